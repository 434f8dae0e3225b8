#include "omni/persist.hpp"

#include <fstream>

#include <json.hpp>

#include "omni/io.hpp"

namespace omni {

using nlohmann::json;
namespace fs = std::filesystem;

static void write_manifest(const fs::path& dir, const json& manifest) {
    std::ofstream out(dir / "manifest.json");
    if (!out) throw OmniError("io_error", "cannot write manifest in " + dir.string());
    out << manifest.dump(2) << "\n";
}

static json read_manifest(const fs::path& dir, const std::string& expected_format) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw OmniError("io_error", "missing manifest in " + dir.string());
    json manifest;
    try {
        in >> manifest;
    } catch (const json::parse_error& e) {
        throw OmniError("manifest_parse_error", e.what());
    }
    if (manifest.value("format", "") != expected_format)
        throw OmniError("manifest_format", "manifest format is not " + expected_format);
    return manifest;
}

void save_linear_heads(const fs::path& dir, const LinearHeads& heads, uint64_t seed,
                       double init_scale) {
    fs::create_directories(dir);
    write_embedding_file(dir / "w_v.omni", heads.w_v);
    write_embedding_file(dir / "w_a.omni", heads.w_a);
    write_manifest(dir, json{{"format", "omni-linear-heads"},
                             {"version", 1},
                             {"tau", heads.tau},
                             {"out_dim", heads.w_v.rows},
                             {"in_dim", heads.w_v.cols},
                             {"seed", seed},
                             {"init_scale", init_scale}});
}

LinearHeads load_linear_heads(const fs::path& dir) {
    const json manifest = read_manifest(dir, "omni-linear-heads");
    LinearHeads heads;
    heads.tau = manifest.at("tau").get<double>();
    heads.w_v = read_embedding_file(dir / "w_v.omni");
    heads.w_a = read_embedding_file(dir / "w_a.omni");
    if (heads.w_v.rows != manifest.at("out_dim").get<int>() ||
        heads.w_v.cols != manifest.at("in_dim").get<int>())
        throw OmniError("manifest_shape", "head tensor shape disagrees with manifest");
    return heads;
}

void save_align_head_params(const fs::path& dir, const AlignHeadParams& params, uint64_t seed,
                            double tau) {
    fs::create_directories(dir);
    const int c = static_cast<int>(params.q_v.size());
    Mat q(2, c);
    q.set_row(0, params.q_v);
    q.set_row(1, params.q_a);
    write_embedding_file(dir / "queries.omni", q);
    json tensors = json::array();
    tensors.push_back({{"name", "queries"}, {"rows", 2}, {"cols", c}, {"file", "queries.omni"}});
    for (size_t b = 0; b < params.blocks.size(); ++b) {
        const AttentionBlock& block = params.blocks[b];
        const std::string prefix = "block" + std::to_string(b) + "_";
        const std::pair<const char*, const Mat*> entries[] = {
            {"w_q", &block.w_q},       {"w_k", &block.w_k},   {"w_v", &block.w_v},
            {"w_o", &block.w_o},       {"ffn_up", &block.ffn_up}, {"ffn_down", &block.ffn_down}};
        for (const auto& [name, mat] : entries) {
            const std::string file = prefix + name + ".omni";
            write_embedding_file(dir / file, *mat);
            tensors.push_back(
                {{"name", prefix + name}, {"rows", mat->rows}, {"cols", mat->cols}, {"file", file}});
        }
    }
    write_manifest(dir, json{{"format", "omni-align-head"},
                             {"version", 1},
                             {"c", c},
                             {"seed", seed},
                             {"init_scale", params.init_scale},
                             {"tau", tau},
                             {"tensors", tensors}});
}

AlignHeadParams load_align_head_params(const fs::path& dir) {
    const json manifest = read_manifest(dir, "omni-align-head");
    AlignHeadParams params;
    params.init_scale = manifest.at("init_scale").get<double>();
    const Mat q = read_embedding_file(dir / "queries.omni");
    if (q.rows != 2) throw OmniError("manifest_shape", "queries tensor must have two rows");
    params.q_v = q.row(0);
    params.q_a = q.row(1);
    for (size_t b = 0; b < params.blocks.size(); ++b) {
        const std::string prefix = "block" + std::to_string(b) + "_";
        AttentionBlock& block = params.blocks[b];
        block.w_q = read_embedding_file(dir / (prefix + "w_q.omni"));
        block.w_k = read_embedding_file(dir / (prefix + "w_k.omni"));
        block.w_v = read_embedding_file(dir / (prefix + "w_v.omni"));
        block.w_o = read_embedding_file(dir / (prefix + "w_o.omni"));
        block.ffn_up = read_embedding_file(dir / (prefix + "ffn_up.omni"));
        block.ffn_down = read_embedding_file(dir / (prefix + "ffn_down.omni"));
    }
    return params;
}

}  // namespace omni
