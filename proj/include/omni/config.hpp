#pragma once

#include <cstdint>
#include <filesystem>

#include <json.hpp>

#include "omni/grpo.hpp"
#include "omni/temporal.hpp"

namespace omni {

struct TegConfig {
    double t_g = 1.0;
    void validate() const;
};

struct AlignTrainConfig {
    double tau = 1.0;
    double init_scale = 0.02;
    double learning_rate = 0.05;
    int epochs = 500;
    int k = 64;
    void validate() const;
};

struct SyntheticPairConfig {
    int k = 64;
    int latent_dim = 8;
    int c = 32;
    int n_v = 16;
    int n_a = 8;
    double noise_sigma = 0.1;
    double duration = 8.0;  // clip seconds
    uint64_t seed = 0;
    void validate() const;
};

struct ExperimentConfig {
    CrteConfig crte;
    TegConfig teg;
    AlignTrainConfig align;
    GrpoConfig grpo;
    SyntheticPairConfig data;
};

// Strict schema: unknown keys are rejected with the offending key named,
// every section is optional and falls back to defaults.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json experiment_config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

nlohmann::json crte_config_to_json(const CrteConfig& cfg);
CrteConfig crte_config_from_json(const nlohmann::json& j);

}  // namespace omni
