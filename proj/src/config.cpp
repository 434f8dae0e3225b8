#include "omni/config.hpp"

#include <fstream>
#include <set>

#include "omni/io.hpp"

namespace omni {

using nlohmann::json;

void TegConfig::validate() const {
    if (!(t_g > 0.0)) throw OmniError("config_invalid", "teg.t_g must be positive");
}

void AlignTrainConfig::validate() const {
    if (!(tau > 0.0)) throw OmniError("config_invalid", "align.tau must be positive");
    if (!(init_scale > 0.0)) throw OmniError("config_invalid", "align.init_scale must be positive");
    if (learning_rate < 0.0)
        throw OmniError("config_invalid", "align.learning_rate must be >= 0");
    if (epochs < 1) throw OmniError("config_invalid", "align.epochs must be >= 1");
    if (k < 2) throw OmniError("config_invalid", "align.k must be >= 2");
}

void SyntheticPairConfig::validate() const {
    if (k < 1) throw OmniError("config_invalid", "data.k must be >= 1");
    if (latent_dim < 1) throw OmniError("config_invalid", "data.latent_dim must be >= 1");
    if (c < 1) throw OmniError("config_invalid", "data.c must be >= 1");
    if (latent_dim > c) throw OmniError("config_invalid", "data.latent_dim must be <= data.c");
    if (n_v < 1 || n_a < 1) throw OmniError("config_invalid", "data.n_v and data.n_a must be >= 1");
    if (noise_sigma < 0.0) throw OmniError("config_invalid", "data.noise_sigma must be >= 0");
    if (!(duration > 0.0)) throw OmniError("config_invalid", "data.duration must be positive");
}

static void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                                const std::string& section) {
    for (const auto& item : j.items()) {
        if (!known.count(item.key()))
            throw OmniError("config_unknown_key",
                            "unknown config key: " + section + "." + item.key());
    }
}

template <typename T>
static void read_field(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

json crte_config_to_json(const CrteConfig& cfg) {
    return json{{"dim", cfg.dim},
                {"t_max", cfg.t_max},
                {"theta", cfg.theta},
                {"pairing_mode", to_string(cfg.pairing_mode)}};
}

CrteConfig crte_config_from_json(const json& j) {
    reject_unknown_keys(j, {"dim", "t_max", "theta", "pairing_mode"}, "crte");
    CrteConfig cfg;
    read_field(j, "dim", cfg.dim);
    read_field(j, "t_max", cfg.t_max);
    read_field(j, "theta", cfg.theta);
    if (j.contains("pairing_mode"))
        cfg.pairing_mode = pairing_mode_from_string(j.at("pairing_mode").get<std::string>());
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw OmniError("config_invalid", std::string("crte: ") + e.what());
    }
    return cfg;
}

static TegConfig teg_from_json(const json& j) {
    reject_unknown_keys(j, {"t_g"}, "teg");
    TegConfig cfg;
    read_field(j, "t_g", cfg.t_g);
    cfg.validate();
    return cfg;
}

static AlignTrainConfig align_from_json(const json& j) {
    reject_unknown_keys(j, {"tau", "init_scale", "learning_rate", "epochs", "k"}, "align");
    AlignTrainConfig cfg;
    read_field(j, "tau", cfg.tau);
    read_field(j, "init_scale", cfg.init_scale);
    read_field(j, "learning_rate", cfg.learning_rate);
    read_field(j, "epochs", cfg.epochs);
    read_field(j, "k", cfg.k);
    cfg.validate();
    return cfg;
}

static GrpoConfig grpo_from_json(const json& j) {
    reject_unknown_keys(j, {"epsilon", "beta", "g", "std_floor"}, "grpo");
    GrpoConfig cfg;
    read_field(j, "epsilon", cfg.epsilon);
    read_field(j, "beta", cfg.beta);
    read_field(j, "g", cfg.g);
    read_field(j, "std_floor", cfg.std_floor);
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw OmniError("config_invalid", std::string("grpo: ") + e.what());
    }
    return cfg;
}

static SyntheticPairConfig data_from_json(const json& j) {
    reject_unknown_keys(j, {"k", "latent_dim", "c", "n_v", "n_a", "noise_sigma", "duration", "seed"},
                        "data");
    SyntheticPairConfig cfg;
    read_field(j, "k", cfg.k);
    read_field(j, "latent_dim", cfg.latent_dim);
    read_field(j, "c", cfg.c);
    read_field(j, "n_v", cfg.n_v);
    read_field(j, "n_a", cfg.n_a);
    read_field(j, "noise_sigma", cfg.noise_sigma);
    read_field(j, "duration", cfg.duration);
    read_field(j, "seed", cfg.seed);
    cfg.validate();
    return cfg;
}

ExperimentConfig experiment_config_from_json(const json& j) {
    if (!j.is_object()) throw OmniError("config_invalid", "config root must be a JSON object");
    reject_unknown_keys(j, {"crte", "teg", "align", "grpo", "data"}, "config");
    ExperimentConfig cfg;
    if (j.contains("crte")) cfg.crte = crte_config_from_json(j.at("crte"));
    if (j.contains("teg")) cfg.teg = teg_from_json(j.at("teg"));
    if (j.contains("align")) cfg.align = align_from_json(j.at("align"));
    if (j.contains("grpo")) cfg.grpo = grpo_from_json(j.at("grpo"));
    if (j.contains("data")) cfg.data = data_from_json(j.at("data"));
    return cfg;
}

json experiment_config_to_json(const ExperimentConfig& cfg) {
    return json{{"crte", crte_config_to_json(cfg.crte)},
                {"teg", {{"t_g", cfg.teg.t_g}}},
                {"align",
                 {{"tau", cfg.align.tau},
                  {"init_scale", cfg.align.init_scale},
                  {"learning_rate", cfg.align.learning_rate},
                  {"epochs", cfg.align.epochs},
                  {"k", cfg.align.k}}},
                {"grpo",
                 {{"epsilon", cfg.grpo.epsilon},
                  {"beta", cfg.grpo.beta},
                  {"g", cfg.grpo.g},
                  {"std_floor", cfg.grpo.std_floor}}},
                {"data",
                 {{"k", cfg.data.k},
                  {"latent_dim", cfg.data.latent_dim},
                  {"c", cfg.data.c},
                  {"n_v", cfg.data.n_v},
                  {"n_a", cfg.data.n_a},
                  {"noise_sigma", cfg.data.noise_sigma},
                  {"duration", cfg.data.duration},
                  {"seed", cfg.data.seed}}}};
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw OmniError("io_error", "cannot open config: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw OmniError("config_parse_error", e.what());
    }
    return experiment_config_from_json(j);
}

}  // namespace omni
