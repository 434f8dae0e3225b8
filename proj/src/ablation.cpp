#include "omni/ablation.hpp"

#include <algorithm>
#include <cmath>

#include "omni/io.hpp"
#include "omni/temporal.hpp"

namespace omni {

static std::vector<int> random_permutation(int n, SeededRng& rng) {
    std::vector<int> perm(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i) std::swap(perm[static_cast<size_t>(i)],
                                              perm[static_cast<size_t>(rng.uniform_int(i + 1))]);
    return perm;
}

AblationTask make_ablation_task(const ExperimentConfig& cfg, bool shuffle_timestamps,
                                uint64_t clip_stream_offset) {
    cfg.data.validate();
    cfg.teg.validate();
    if (cfg.crte.dim != cfg.data.c)
        throw OmniError("config_invalid", "crte.dim must equal data.c for the ablation task");

    AblationTask task;
    task.t_g = cfg.teg.t_g;
    task.duration = cfg.data.duration;
    task.n_slots = static_cast<int>(std::ceil(task.duration / task.t_g));
    const int events_per_slot = 2;
    const int n_events = events_per_slot * task.n_slots;
    const double event_width = task.duration / static_cast<double>(n_events);
    const double audio_offset = 0.1 * event_width;
    const int c = cfg.data.c;
    const double sigma = cfg.data.noise_sigma;

    SeededRng root(cfg.data.seed);
    SeededRng code_stream = root.clone_with_offset(0);
    Mat codebook(n_events, c);
    const double scale = 1.0 / std::sqrt(static_cast<double>(c));
    for (double& w : codebook.data) w = scale * code_stream.normal();

    task.clips.resize(static_cast<size_t>(cfg.data.k));
    for (int i = 0; i < cfg.data.k; ++i) {
        SeededRng stream = root.clone_with_offset(clip_stream_offset + static_cast<uint64_t>(i) + 1);
        const std::vector<int> schedule = random_permutation(n_events, stream);
        AblationClip& clip = task.clips[static_cast<size_t>(i)];
        for (int e = 0; e < n_events; ++e) {
            const double t = (static_cast<double>(e) + 0.25) * event_width;
            const int code = schedule[static_cast<size_t>(e)];
            Vec v_vec = codebook.row(code);
            Vec a_vec = codebook.row(code);
            for (double& x : v_vec) x += sigma * stream.normal();
            for (double& x : a_vec) x += sigma * stream.normal();
            clip.vision.push_back({std::move(v_vec), t, Modality::vision, e});
            clip.audio.push_back({std::move(a_vec), t + audio_offset, Modality::audio, e});
        }
        if (shuffle_timestamps) {
            const std::vector<int> pv = random_permutation(n_events, stream);
            const std::vector<int> pa = random_permutation(n_events, stream);
            std::vector<double> tv(static_cast<size_t>(n_events));
            std::vector<double> ta(static_cast<size_t>(n_events));
            for (int e = 0; e < n_events; ++e) {
                tv[static_cast<size_t>(e)] = clip.vision[static_cast<size_t>(e)].t;
                ta[static_cast<size_t>(e)] = clip.audio[static_cast<size_t>(e)].t;
            }
            for (int e = 0; e < n_events; ++e) {
                clip.vision[static_cast<size_t>(e)].t = tv[static_cast<size_t>(pv[static_cast<size_t>(e)])];
                clip.audio[static_cast<size_t>(e)].t = ta[static_cast<size_t>(pa[static_cast<size_t>(e)])];
            }
        }
    }
    return task;
}

static Vec meanpool_items(const std::vector<TimedEmbedding>& items) {
    Vec out(items.front().vec.size(), 0.0);
    for (const TimedEmbedding& item : items) add_scaled(out, item.vec, 1.0);
    const double inv = 1.0 / static_cast<double>(items.size());
    for (double& x : out) x *= inv;
    return out;
}

Vec clip_rep_baseline(const std::vector<TimedEmbedding>& items) {
    return meanpool_items(items);
}

Vec clip_rep_grouped(const std::vector<TimedEmbedding>& items, double t_g, int n_slots) {
    const size_t c = items.front().vec.size();
    Vec out(static_cast<size_t>(n_slots) * c, 0.0);
    const auto groups = assign_groups(items, t_g);
    for (const auto& [slot, members] : groups) {
        if (slot < 0 || slot >= n_slots) continue;
        const Vec pooled = meanpool_items(members);
        for (size_t d = 0; d < c; ++d) out[static_cast<size_t>(slot) * c + d] = pooled[d];
    }
    return out;
}

Vec clip_rep_grouped_crte(const std::vector<TimedEmbedding>& items, double t_g, int n_slots,
                          const CrteConfig& crte) {
    std::vector<TimedEmbedding> rotated = items;
    const FrequencyTable freqs = base_frequencies(crte);
    for (TimedEmbedding& item : rotated) item.vec = apply_crte(item.vec, item.t, freqs);
    return clip_rep_grouped(rotated, t_g, n_slots);
}

namespace {

enum class Variant { baseline, teg, teg_crte, teg_crte_head };

Mat rep_matrix(const AblationTask& task, Variant variant, const CrteConfig& crte, bool audio) {
    std::vector<Vec> reps;
    for (const AblationClip& clip : task.clips) {
        const std::vector<TimedEmbedding>& items = audio ? clip.audio : clip.vision;
        switch (variant) {
            case Variant::baseline:
                reps.push_back(clip_rep_baseline(items));
                break;
            case Variant::teg:
                reps.push_back(clip_rep_grouped(items, task.t_g, task.n_slots));
                break;
            default:
                reps.push_back(clip_rep_grouped_crte(items, task.t_g, task.n_slots, crte));
                break;
        }
    }
    Mat out(static_cast<int>(reps.size()), static_cast<int>(reps.front().size()));
    for (int i = 0; i < out.rows; ++i) out.set_row(i, l2_normalize(reps[static_cast<size_t>(i)]));
    return out;
}

AblationRow score_variant(const std::string& name, const Mat& v, const Mat& a) {
    const RetrievalAccuracy acc = retrieval_accuracy(v, a);
    return {name, acc.v_to_a_top1, acc.a_to_v_top1, 0.0};
}

OmniBatch single_row_batch(const Mat& v, const Mat& a) {
    OmniBatch batch;
    for (int i = 0; i < v.rows; ++i) {
        Mat vrow(1, v.cols);
        vrow.set_row(0, v.row(i));
        Mat arow(1, a.cols);
        arow.set_row(0, a.row(i));
        batch.vision_seqs.push_back(std::move(vrow));
        batch.audio_seqs.push_back(std::move(arow));
    }
    return batch;
}

std::vector<AblationRow> score_all_variants(const AblationTask& task, const AblationTask& train_task,
                                            const ExperimentConfig& cfg) {
    std::vector<AblationRow> rows;
    rows.push_back(score_variant("concat-baseline",
                                 rep_matrix(task, Variant::baseline, cfg.crte, false),
                                 rep_matrix(task, Variant::baseline, cfg.crte, true)));
    rows.push_back(score_variant("+TEG", rep_matrix(task, Variant::teg, cfg.crte, false),
                                 rep_matrix(task, Variant::teg, cfg.crte, true)));
    const Mat crte_v = rep_matrix(task, Variant::teg_crte, cfg.crte, false);
    const Mat crte_a = rep_matrix(task, Variant::teg_crte, cfg.crte, true);
    rows.push_back(score_variant("+TEG+CRTE", crte_v, crte_a));

    // linear heads trained on a disjoint clip draw, scored on the report task
    AlignTrainOptions opt;
    opt.seed = cfg.data.seed + 17;
    const AlignTrainResult trained = train_alignment(
        single_row_batch(rep_matrix(train_task, Variant::teg_crte, cfg.crte, false),
                         rep_matrix(train_task, Variant::teg_crte, cfg.crte, true)),
        cfg.align, opt);
    const RetrievalAccuracy acc = eval_retrieval(single_row_batch(crte_v, crte_a), trained.heads);
    rows.push_back({"+TEG+CRTE+align-head", acc.v_to_a_top1, acc.a_to_v_top1, 0.0});

    const double base = 0.5 * (rows[0].v_to_a_top1 + rows[0].a_to_v_top1);
    for (AblationRow& row : rows)
        row.margin_vs_baseline = 0.5 * (row.v_to_a_top1 + row.a_to_v_top1) - base;
    return rows;
}

}  // namespace

AblationReport run_ablation(const ExperimentConfig& cfg) {
    constexpr uint64_t k_train_block = 1u << 20;  // disjoint clip stream block
    AblationReport report;
    report.variants = score_all_variants(make_ablation_task(cfg, false),
                                         make_ablation_task(cfg, false, k_train_block), cfg);
    report.shuffled_control = score_all_variants(make_ablation_task(cfg, true),
                                                 make_ablation_task(cfg, true, k_train_block), cfg);
    report.task_params = {{"k", cfg.data.k},
                          {"c", cfg.data.c},
                          {"duration", cfg.data.duration},
                          {"t_g", cfg.teg.t_g},
                          {"noise_sigma", cfg.data.noise_sigma},
                          {"seed", cfg.data.seed}};
    return report;
}

nlohmann::json ablation_report_to_json(const AblationReport& report) {
    auto rows_to_json = [](const std::vector<AblationRow>& rows) {
        nlohmann::json arr = nlohmann::json::array();
        for (const AblationRow& row : rows)
            arr.push_back({{"name", row.name},
                           {"v_to_a_top1", row.v_to_a_top1},
                           {"a_to_v_top1", row.a_to_v_top1},
                           {"margin_vs_baseline", row.margin_vs_baseline}});
        return arr;
    };
    return {{"task", report.task_params},
            {"variants", rows_to_json(report.variants)},
            {"shuffled_control", rows_to_json(report.shuffled_control)}};
}

}  // namespace omni
