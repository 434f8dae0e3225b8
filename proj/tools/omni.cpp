// omni: synthetic omni-modal alignment experiments on the command line.
//
// Subcommands: gen-data, train-align, eval-retrieval, teg, crte, compress,
// grpo-train, ablate, selftest. Every command is deterministic for a fixed
// seed; OMNI_SEED overrides the config seed. Fatal errors exit nonzero with
// one JSON object on stderr.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "omni/ablation.hpp"
#include "omni/compression.hpp"
#include "omni/config.hpp"
#include "omni/grpo.hpp"
#include "omni/io.hpp"
#include "omni/persist.hpp"
#include "omni/sequencing.hpp"
#include "omni/synthetic.hpp"
#include "omni/temporal.hpp"
#include "omni/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace omni;

namespace {

ExperimentConfig load_config(const std::string& path) {
    ExperimentConfig cfg;
    if (!path.empty()) cfg = load_experiment_config(path);
    if (const char* env_seed = std::getenv("OMNI_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env_seed, &end, 10);
        if (end == env_seed || *end != '\0')
            throw OmniError("bad_seed", "OMNI_SEED must be an unsigned integer");
        cfg.data.seed = static_cast<uint64_t>(v);
    }
    return cfg;
}

struct ModalityFile {
    Mat rows;
    json meta;
};

void write_modality(const fs::path& dir, const std::string& name, const Mat& rows,
                    const json& meta) {
    fs::create_directories(dir);
    write_embedding_file(dir / (name + ".omni"), rows);
    std::ofstream out(dir / (name + ".json"));
    if (!out) throw OmniError("io_error", "cannot write sidecar for " + name);
    out << meta.dump(2) << "\n";
}

ModalityFile read_modality(const fs::path& dir, const std::string& name) {
    ModalityFile file;
    file.rows = read_embedding_file(dir / (name + ".omni"));
    const fs::path sidecar = dir / (name + ".json");
    if (fs::exists(sidecar)) {
        std::ifstream in(sidecar);
        try {
            in >> file.meta;
        } catch (const json::parse_error& e) {
            throw OmniError("sidecar_parse_error", e.what());
        }
    }
    return file;
}

json modality_meta(const std::string& modality, const SyntheticPairConfig& cfg, int n_per_sample,
                   const std::vector<Vec>& timestamps) {
    json ts = json::array();
    json sample = json::array();
    json source = json::array();
    for (int i = 0; i < cfg.k; ++i)
        for (int r = 0; r < n_per_sample; ++r) {
            ts.push_back(timestamps[static_cast<size_t>(i)][static_cast<size_t>(r)]);
            sample.push_back(i);
            source.push_back(r);
        }
    return json{{"modality", modality},
                {"k", cfg.k},
                {"n_per_sample", n_per_sample},
                {"dim", cfg.c},
                {"duration", cfg.duration},
                {"rate", static_cast<double>(n_per_sample) / cfg.duration},
                {"seed", cfg.seed},
                {"timestamps", std::move(ts)},
                {"sample_index", std::move(sample)},
                {"source_index", std::move(source)}};
}

// split a flat modality file back into per-sample sequences with timestamps
struct SampleStreams {
    std::vector<Mat> seqs;
    std::vector<Vec> timestamps;
};

SampleStreams split_samples(const ModalityFile& file) {
    if (!file.meta.contains("k") || !file.meta.contains("sample_index") ||
        !file.meta.contains("timestamps"))
        throw OmniError("sidecar_missing", "modality sidecar lacks k/sample_index/timestamps");
    const int k = file.meta.at("k").get<int>();
    SampleStreams out;
    std::vector<std::vector<int>> rows_per_sample(static_cast<size_t>(k));
    const auto& sample_index = file.meta.at("sample_index");
    for (int r = 0; r < file.rows.rows; ++r) {
        const int s = sample_index.at(static_cast<size_t>(r)).get<int>();
        if (s < 0 || s >= k) throw OmniError("sidecar_invalid", "sample_index out of range");
        rows_per_sample[static_cast<size_t>(s)].push_back(r);
    }
    const auto& ts = file.meta.at("timestamps");
    for (int s = 0; s < k; ++s) {
        const auto& rows = rows_per_sample[static_cast<size_t>(s)];
        if (rows.empty()) throw OmniError("sidecar_invalid", "sample without rows");
        Mat seq(static_cast<int>(rows.size()), file.rows.cols);
        Vec times(rows.size());
        for (size_t i = 0; i < rows.size(); ++i) {
            seq.set_row(static_cast<int>(i), file.rows.row(rows[i]));
            times[i] = ts.at(static_cast<size_t>(rows[i])).get<double>();
        }
        out.seqs.push_back(std::move(seq));
        out.timestamps.push_back(std::move(times));
    }
    return out;
}

int cmd_gen_data(const std::string& config_path, const std::string& out_dir) {
    const ExperimentConfig cfg = load_config(config_path);
    const SyntheticPairs pairs = gen_synthetic_pairs(cfg.data);

    Mat vision(cfg.data.k * cfg.data.n_v, cfg.data.c);
    Mat audio(cfg.data.k * cfg.data.n_a, cfg.data.c);
    for (int i = 0; i < cfg.data.k; ++i) {
        for (int r = 0; r < cfg.data.n_v; ++r)
            vision.set_row(i * cfg.data.n_v + r, pairs.batch.vision_seqs[static_cast<size_t>(i)].row(r));
        for (int r = 0; r < cfg.data.n_a; ++r)
            audio.set_row(i * cfg.data.n_a + r, pairs.batch.audio_seqs[static_cast<size_t>(i)].row(r));
    }
    write_modality(out_dir, "vision", vision,
                   modality_meta("vision", cfg.data, cfg.data.n_v, pairs.vision_timestamps));
    write_modality(out_dir, "audio", audio,
                   modality_meta("audio", cfg.data, cfg.data.n_a, pairs.audio_timestamps));
    std::printf("wrote %d paired samples to %s\n", cfg.data.k, out_dir.c_str());
    return 0;
}

OmniBatch load_batch(const fs::path& dir) {
    const SampleStreams vision = split_samples(read_modality(dir, "vision"));
    const SampleStreams audio = split_samples(read_modality(dir, "audio"));
    OmniBatch batch;
    batch.vision_seqs = vision.seqs;
    batch.audio_seqs = audio.seqs;
    batch.validate();
    return batch;
}

int cmd_train_align(const std::string& config_path, const std::string& out_dir) {
    ExperimentConfig cfg = load_config(config_path);
    cfg.data.k = cfg.align.k;  // the align section owns the training batch size
    const SyntheticPairs pairs = gen_synthetic_pairs(cfg.data);

    AlignTrainOptions opt;
    opt.seed = cfg.data.seed;
    const AlignTrainResult result = train_alignment(pairs.batch, cfg.align, opt);

    fs::create_directories(out_dir);
    save_linear_heads(out_dir, result.heads, cfg.data.seed, cfg.align.init_scale);
    std::ofstream curve(fs::path(out_dir) / "curve.csv");
    curve << "epoch,loss,v_to_a_top1,a_to_v_top1\n";
    char line[160];
    for (const AlignCurvePoint& point : result.curve) {
        std::snprintf(line, sizeof(line), "%d,%.10g,%.10g,%.10g\n", point.epoch, point.loss,
                      point.v_to_a_top1, point.a_to_v_top1);
        curve << line;
    }
    const AlignCurvePoint& last = result.curve.back();
    std::printf("epochs=%d final_loss=%.6f v_to_a=%.4f a_to_v=%.4f\n",
                static_cast<int>(result.curve.size()), last.loss, last.v_to_a_top1,
                last.a_to_v_top1);
    return 0;
}

int cmd_eval_retrieval(const std::string& model_dir, const std::string& data_dir) {
    const LinearHeads heads = load_linear_heads(model_dir);
    const OmniBatch batch = load_batch(data_dir);
    const RetrievalAccuracy acc = eval_retrieval(batch, heads);
    const json out = {{"k", batch.k()},
                      {"v_to_a_top1", acc.v_to_a_top1},
                      {"a_to_v_top1", acc.a_to_v_top1}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_teg(const std::string& in_dir, double t_g, const std::string& out_dir) {
    if (!(t_g > 0.0)) throw OmniError("config_invalid", "t_g must be positive");
    const SampleStreams vision = split_samples(read_modality(in_dir, "vision"));
    const SampleStreams audio = split_samples(read_modality(in_dir, "audio"));
    if (vision.seqs.size() != audio.seqs.size())
        throw OmniError("sidecar_invalid", "vision and audio sample counts differ");

    std::vector<Vec> flat_rows;
    json index = json::array();
    for (size_t s = 0; s < vision.seqs.size(); ++s) {
        std::vector<TimedEmbedding> v_items, a_items;
        for (int r = 0; r < vision.seqs[s].rows; ++r)
            v_items.push_back({vision.seqs[s].row(r), vision.timestamps[s][static_cast<size_t>(r)],
                               Modality::vision, r});
        for (int r = 0; r < audio.seqs[s].rows; ++r)
            a_items.push_back({audio.seqs[s].row(r), audio.timestamps[s][static_cast<size_t>(r)],
                               Modality::audio, r});
        const GroupedSequence seq = assemble_sequence(v_items, a_items, t_g);
        for (const TimedEmbedding& item : seq.flat) {
            flat_rows.push_back(item.vec);
            index.push_back({{"sample", s},
                             {"group_index", group_index_for(item.t, t_g)},
                             {"modality", item.modality == Modality::vision ? "vision" : "audio"},
                             {"source_index", item.source_index},
                             {"t", item.t}});
        }
    }
    Mat out(static_cast<int>(flat_rows.size()),
            flat_rows.empty() ? 0 : static_cast<int>(flat_rows[0].size()));
    for (size_t r = 0; r < flat_rows.size(); ++r) out.set_row(static_cast<int>(r), flat_rows[r]);
    write_modality(out_dir, "sequence", out,
                   json{{"t_g", t_g}, {"k", vision.seqs.size()}, {"index", std::move(index)}});
    std::printf("wrote interleaved sequence of %d embeddings to %s\n", out.rows, out_dir.c_str());
    return 0;
}

int cmd_crte(const std::string& in_dir, const std::string& config_path, const std::string& out_dir) {
    const ExperimentConfig cfg = load_config(config_path);
    int past_horizon = 0;
    for (const std::string name : {"vision", "audio"}) {
        ModalityFile file = read_modality(in_dir, name);
        if (!file.meta.contains("timestamps"))
            throw OmniError("sidecar_missing", name + " sidecar lacks timestamps");
        const auto& ts_json = file.meta.at("timestamps");
        Vec timestamps(ts_json.size());
        for (size_t i = 0; i < timestamps.size(); ++i) {
            timestamps[i] = ts_json.at(i).get<double>();
            if (exceeds_horizon(cfg.crte, timestamps[i])) ++past_horizon;
        }
        const Mat rotated = apply_crte_seq(file.rows, timestamps, cfg.crte);
        json meta = file.meta;
        meta["crte"] = crte_config_to_json(cfg.crte);
        write_modality(out_dir, name, rotated, meta);
    }
    if (past_horizon > 0)
        std::fprintf(stderr, "warning: %d timestamps exceed t_max=%g; low-frequency planes wrap\n",
                     past_horizon, cfg.crte.t_max);
    std::printf("wrote rotated embeddings to %s\n", out_dir.c_str());
    return 0;
}

struct CompressTarget {
    fs::path payload;
    fs::path sidecar;
};

CompressTarget resolve_compress_path(const std::string& path, bool for_output) {
    CompressTarget target;
    fs::path p(path);
    if (p.extension() == ".omni") {
        target.payload = p;
    } else {
        if (for_output) fs::create_directories(p);
        target.payload = p / "audio.omni";
    }
    target.sidecar = target.payload;
    target.sidecar.replace_extension(".json");
    return target;
}

int cmd_compress(const std::string& in_path, const std::string& mode, const std::string& out_path) {
    const CompressTarget in = resolve_compress_path(in_path, false);
    const CompressTarget out = resolve_compress_path(out_path, true);

    AudioTokenSeq seq;
    seq.tokens = read_embedding_file(in.payload);
    json meta;
    if (fs::exists(in.sidecar)) {
        std::ifstream side(in.sidecar);
        try {
            side >> meta;
        } catch (const json::parse_error& e) {
            throw OmniError("sidecar_parse_error", e.what());
        }
    }
    seq.rate = meta.value("rate", 25.0);

    AudioTokenSeq compressed;
    if (mode == "max") compressed = pool_sequence(seq, PoolMode::max);
    else if (mode == "avg") compressed = pool_sequence(seq, PoolMode::avg);
    else if (mode == "conv") compressed = conv1d_downsample(seq, make_avg_conv_kernel(seq.tokens.cols));
    else throw OmniError("bad_mode", "mode must be max, avg or conv");

    write_embedding_file(out.payload, compressed.tokens);
    json out_meta = meta;
    out_meta["rate"] = compressed.rate;
    out_meta["mode"] = mode;
    out_meta["count"] = compressed.tokens.rows;
    if (meta.contains("timestamps")) {
        // window-merged timestamps: mean of each pair, trailing one verbatim
        const auto& ts = meta.at("timestamps");
        json merged = json::array();
        for (int w = 0; w < compressed.tokens.rows; ++w) {
            const size_t first = static_cast<size_t>(2 * w);
            if (first + 1 < ts.size())
                merged.push_back(0.5 * (ts.at(first).get<double>() + ts.at(first + 1).get<double>()));
            else
                merged.push_back(ts.at(first).get<double>());
        }
        out_meta["timestamps"] = std::move(merged);
        out_meta.erase("source_index");
        out_meta.erase("sample_index");
        out_meta.erase("n_per_sample");
    }
    std::ofstream side(out.sidecar);
    side << out_meta.dump(2) << "\n";
    std::printf("%d tokens -> %d tokens (%s), rate %.6g -> %.6g\n", seq.tokens.rows,
                compressed.tokens.rows, mode.c_str(), seq.rate, compressed.rate);
    return 0;
}

int cmd_grpo_train(const std::string& config_path, const std::string& out_csv, int steps, int g,
                   double epsilon, double beta, int64_t seed_flag, int questions, int options,
                   double lr) {
    ExperimentConfig cfg = load_config(config_path);
    if (g > 0) cfg.grpo.g = g;
    if (epsilon > 0.0) cfg.grpo.epsilon = epsilon;
    if (beta >= 0.0) cfg.grpo.beta = beta;
    cfg.grpo.validate();

    GrpoTrainOptions opt;
    opt.steps = steps;
    opt.learning_rate = lr;
    opt.seed = seed_flag >= 0 ? static_cast<uint64_t>(seed_flag) : cfg.data.seed;

    SeededRng task_rng(opt.seed ^ 0x7A5Cull);
    const McqTask task = make_mcq_task(questions, options, task_rng);
    const GrpoTrainResult result = train_toy_policy(task, cfg.grpo, opt);

    std::ofstream out(out_csv);
    if (!out) throw OmniError("io_error", "cannot write " + out_csv);
    out << "step,mean_accuracy_reward,mean_format_reward,objective\n";
    char line[160];
    for (const GrpoCurvePoint& point : result.curve) {
        std::snprintf(line, sizeof(line), "%d,%.10g,%.10g,%.10g\n", point.step,
                      point.mean_accuracy_reward, point.mean_format_reward, point.objective);
        out << line;
    }
    const GrpoCurvePoint& last = result.curve.back();
    std::printf("steps=%d final_accuracy=%.4f final_format=%.4f\n", steps,
                last.mean_accuracy_reward, last.mean_format_reward);
    return 0;
}

int cmd_ablate(const std::string& config_path, const std::string& out_json) {
    const ExperimentConfig cfg = load_config(config_path);
    const AblationReport report = run_ablation(cfg);
    std::ofstream out(out_json);
    if (!out) throw OmniError("io_error", "cannot write " + out_json);
    out << ablation_report_to_json(report).dump(2) << "\n";
    for (const AblationRow& row : report.variants)
        std::printf("%-22s v_to_a=%.4f a_to_v=%.4f margin=%+.4f\n", row.name.c_str(),
                    row.v_to_a_top1, row.a_to_v_top1, row.margin_vs_baseline);
    return 0;
}

#define SELFTEST(cond, what)                    \
    do {                                        \
        if (cond) {                             \
            std::printf("[ok] %s\n", what);     \
        } else {                                \
            std::printf("[failed] %s\n", what); \
            ok = false;                         \
        }                                       \
    } while (0)

int cmd_selftest() {
    bool ok = true;
    SeededRng rng(12345);

    {
        const Vec s = softmax({0.0, std::log(3.0)});
        SELFTEST(std::fabs(s[0] - 0.25) < 1e-12 && std::fabs(s[1] - 0.75) < 1e-12,
                 "softmax closed form");
        const Vec u = l2_normalize({3.0, 4.0});
        SELFTEST(std::fabs(u[0] - 0.6) < 1e-12, "l2_normalize");
    }
    {
        CrteConfig cfg;
        cfg.dim = 16;
        cfg.t_max = 60.0;
        cfg.theta = 1000.0;
        const FrequencyTable table = base_frequencies(cfg);
        bool geometric = true;
        const double ratio = std::pow(cfg.theta, -1.0 / cfg.dim);
        for (size_t i = 0; i + 1 < table.omega.size(); ++i)
            geometric = geometric && std::fabs(table.omega[i + 1] / table.omega[i] - ratio) < 1e-12;
        SELFTEST(geometric, "crte geometric frequency progression");

        bool norms = true;
        for (int trial = 0; trial < 200; ++trial) {
            Vec x(16);
            for (double& v : x) v = rng.normal();
            const double t = rng.uniform(0.0, 60.0);
            norms = norms && std::fabs(norm2(apply_crte(x, t, cfg)) - norm2(x)) < 1e-12;
        }
        SELFTEST(norms, "crte norm preservation (shared_per_plane)");
        const Vec rh = rotate_half({1.0, 2.0, 3.0, 4.0});
        SELFTEST((rh == Vec{-2.0, 1.0, -4.0, 3.0}), "rotate_half");
    }
    {
        bool teg_ok = true;
        for (int trial = 0; trial < 300; ++trial) {
            std::vector<TimedEmbedding> vision, audio;
            const int n_v = rng.uniform_int(30);
            const int n_a = rng.uniform_int(30);
            for (int i = 0; i < n_v; ++i)
                vision.push_back({{0.0}, rng.uniform(0.0, 40.0), Modality::vision, i});
            for (int i = 0; i < n_a; ++i)
                audio.push_back({{0.0}, rng.uniform(0.0, 40.0), Modality::audio, i});
            const double t_g = rng.uniform(0.2, 10.0);
            const GroupedSequence seq = assemble_sequence(vision, audio, t_g);
            teg_ok = teg_ok && seq.flat.size() == static_cast<size_t>(n_v + n_a);
            int64_t prev = -1;
            for (const TimedEmbedding& item : seq.flat) {
                const int64_t gidx = group_index_for(item.t, t_g);
                teg_ok = teg_ok && gidx >= prev;
                prev = gidx;
            }
        }
        SELFTEST(teg_ok, "teg permutation and monotone groups");
    }
    {
        Mat eye(2, 2);
        eye.at(0, 0) = eye.at(1, 1) = 1.0;
        SELFTEST(std::fabs(contrastive_loss(eye, eye, 1.0) - std::log(1.0 + std::exp(-1.0))) < 1e-12,
                 "contrastive loss closed form");
        Mat v(4, 8), a(4, 8);
        for (int i = 0; i < 4; ++i) {
            Vec rv(8), ra(8);
            for (double& x : rv) x = rng.normal();
            for (double& x : ra) x = rng.normal();
            v.set_row(i, l2_normalize(rv));
            a.set_row(i, l2_normalize(ra));
        }
        const ContrastiveGrad grad = contrastive_loss_grad(v, a, 1.0);
        double worst = 0.0;
        double max_abs = 1e-12;
        for (double x : grad.dv.data) max_abs = std::max(max_abs, std::fabs(x));
        for (size_t idx = 0; idx < v.data.size(); ++idx) {
            const double keep = v.data[idx];
            v.data[idx] = keep + 1e-6;
            const double fp = contrastive_loss(v, a, 1.0);
            v.data[idx] = keep - 1e-6;
            const double fm = contrastive_loss(v, a, 1.0);
            v.data[idx] = keep;
            worst = std::max(worst, std::fabs((fp - fm) / 2e-6 - grad.dv.data[idx]));
        }
        SELFTEST(worst / max_abs < 1e-5, "contrastive gradient vs finite differences");
    }
    {
        AudioTokenSeq seq{Mat(5, 2), 25.0};
        for (double& x : seq.tokens.data) x = rng.normal();
        const AudioTokenSeq mx = pool_sequence(seq, PoolMode::max);
        const AudioTokenSeq av = pool_sequence(seq, PoolMode::avg);
        bool dominance = mx.tokens.rows == 3 && av.rate == 12.5;
        for (size_t i = 0; i < mx.tokens.data.size(); ++i)
            dominance = dominance && mx.tokens.data[i] >= av.tokens.data[i];
        SELFTEST(dominance, "compression length law and max >= avg");
    }
    {
        const Vec adv = normalize_advantages({0.0, 1.0}, 1e-8);
        SELFTEST(std::fabs(adv[0] + 1.0) < 1e-12 && std::fabs(adv[1] - 1.0) < 1e-12,
                 "grpo advantage normalization");
        SELFTEST(std::fabs(clipped_term(2.0, 1.0, 0.2) - 1.2) < 1e-15 &&
                     std::fabs(clipped_term(0.5, -1.0, 0.2) + 0.8) < 1e-15,
                 "grpo clipped term");
    }
    {
        const fs::path tmp = fs::temp_directory_path() / "omni_selftest.omni";
        Mat m(7, 3);
        for (double& x : m.data) x = static_cast<double>(static_cast<float>(rng.normal()));
        write_embedding_file(tmp, m);
        const Mat back = read_embedding_file(tmp);
        SELFTEST(back.data == m.data, "embedding file round trip");
        fs::remove(tmp);
    }

    if (!ok) {
        std::printf("selftest failed\n");
        return 1;
    }
    std::printf("selftest passed\n");
    return 0;
}

void print_error(const std::string& code, const std::string& message) {
    const json err = {{"error", {{"code", code}, {"message", message}}}};
    std::cerr << err.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthetic omni-modal alignment toolkit"};
    app.require_subcommand(1);

    std::function<int()> action;

    std::string config_path, out_path, in_path, model_path, data_path, mode = "max";
    double t_g = 1.0;
    int steps = 200, g = -1, questions = 16, options = 4;
    double epsilon = -1.0, beta = -1.0, lr = 0.5;
    int64_t seed_flag = -1;

    auto* gen = app.add_subcommand("gen-data", "generate synthetic paired embeddings");
    gen->add_option("--config", config_path, "experiment config JSON");
    gen->add_option("--out", out_path, "output directory")->required();
    gen->callback([&] { action = [&] { return cmd_gen_data(config_path, out_path); }; });

    auto* train = app.add_subcommand("train-align", "train linear alignment heads");
    train->add_option("--config", config_path, "experiment config JSON");
    train->add_option("--out", out_path, "output model directory")->required();
    train->callback([&] { action = [&] { return cmd_train_align(config_path, out_path); }; });

    auto* eval = app.add_subcommand("eval-retrieval", "evaluate cross-modal retrieval");
    eval->add_option("--model", model_path, "model directory")->required();
    eval->add_option("--data", data_path, "data directory")->required();
    eval->callback([&] { action = [&] { return cmd_eval_retrieval(model_path, data_path); }; });

    auto* teg = app.add_subcommand("teg", "temporal embedding grouping");
    teg->add_option("--in", in_path, "input data directory")->required();
    teg->add_option("--tg", t_g, "group duration in seconds");
    teg->add_option("--out", out_path, "output directory")->required();
    teg->callback([&] { action = [&] { return cmd_teg(in_path, t_g, out_path); }; });

    auto* crte = app.add_subcommand("crte", "apply constrained rotary time embedding");
    crte->add_option("--in", in_path, "input data directory")->required();
    crte->add_option("--config", config_path, "experiment config JSON");
    crte->add_option("--out", out_path, "output directory")->required();
    crte->callback([&] { action = [&] { return cmd_crte(in_path, config_path, out_path); }; });

    auto* compress = app.add_subcommand("compress", "downsample audio tokens");
    compress->add_option("--in", in_path, "input file or directory")->required();
    compress->add_option("--mode", mode, "max, avg or conv");
    compress->add_option("--out", out_path, "output file or directory")->required();
    compress->callback([&] { action = [&] { return cmd_compress(in_path, mode, out_path); }; });

    auto* grpo = app.add_subcommand("grpo-train", "train the toy policy with GRPO");
    grpo->add_option("--config", config_path, "experiment config JSON");
    grpo->add_option("--out", out_path, "learning-curve CSV path")->required();
    grpo->add_option("--steps", steps, "training steps");
    grpo->add_option("--g", g, "rollouts per group");
    grpo->add_option("--epsilon", epsilon, "clip range");
    grpo->add_option("--beta", beta, "KL weight");
    grpo->add_option("--seed", seed_flag, "seed override");
    grpo->add_option("--questions", questions, "MCQ bank size");
    grpo->add_option("--options", options, "options per question");
    grpo->add_option("--lr", lr, "learning rate");
    grpo->callback([&] {
        action = [&] {
            return cmd_grpo_train(config_path, out_path, steps, g, epsilon, beta, seed_flag,
                                  questions, options, lr);
        };
    });

    auto* ablate = app.add_subcommand("ablate", "run the alignment ablation table");
    ablate->add_option("--config", config_path, "experiment config JSON");
    ablate->add_option("--out", out_path, "report JSON path")->required();
    ablate->callback([&] { action = [&] { return cmd_ablate(config_path, out_path); }; });

    app.add_subcommand("selftest", "run the built-in invariant suite")->callback([&] {
        action = [] { return cmd_selftest(); };
    });

    CLI11_PARSE(app, argc, argv);

    try {
        return action();
    } catch (const OmniError& e) {
        print_error(e.code, e.what());
        return 1;
    } catch (const std::exception& e) {
        print_error("error", e.what());
        return 1;
    }
}
