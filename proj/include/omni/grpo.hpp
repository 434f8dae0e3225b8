#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "omni/numerics.hpp"
#include "omni/rng.hpp"

namespace omni {

struct GrpoConfig {
    double epsilon = 0.2;    // clip range, in (0, 1)
    double beta = 0.02;      // KL weight, >= 0
    int g = 8;               // rollouts per group
    double std_floor = 1e-8;

    void validate() const;
};

// One rollout group: G sampled responses with rewards and the probability
// each response had under the new, old and reference policies.
struct RolloutGroup {
    std::vector<std::string> responses;
    Vec rewards;
    Vec p_new, p_old, p_ref;  // each in (0, 1]

    int g() const { return static_cast<int>(rewards.size()); }
};

/// A_i = (r_i - mean) / max(popstd, std_floor); population std (divide by G)
Vec normalize_advantages(const Vec& rewards, double std_floor);

/// min(ratio*A, clip(ratio, 1-eps, 1+eps)*A); throws for ratio <= 0
double clipped_term(double ratio, double advantage, double epsilon);

/// exact KL over a shared categorical support; throws when q = 0 where p > 0
double categorical_kl(const Vec& p, const Vec& q);

/// (1/G) sum_i clipped_term(p_new_i/p_old_i, A_i, eps) - beta * kl_value
double grpo_objective(const RolloutGroup& group, const GrpoConfig& cfg, double kl_value);

struct RewardBreakdown {
    double format = 0.0;    // 1 if the response matches <answer>...</answer> exactly
    double accuracy = 0.0;  // 1 if the extracted answer equals the key
    double total = 0.0;     // (format + accuracy) / 2
};

// Format check is the strict tag template. Extraction is lenient: a bare
// option token still counts for accuracy, anything else is unextractable
// and scores zero on both parts.
RewardBreakdown rule_based_reward(const std::string& response, const std::string& expected);

std::string option_token(int index);  // 0 -> "A", 1 -> "B", ...
std::string render_response(int option, bool well_formed);

struct McqTask {
    int n_options = 4;
    std::vector<int> correct;  // answer index per question
};

McqTask make_mcq_task(int n_questions, int n_options, SeededRng& rng);

// Toy categorical policy: per-question logits over options, one shared
// logit pair {well_formed, bare} for formatting.
struct ToyPolicy {
    Mat option_logits;  // Q x n_options
    Vec format_logits;  // size 2
};

struct GrpoCurvePoint {
    int step = 0;
    // expected reward components under the step's sampling policy, exact
    // over the categorical support (not a Monte Carlo estimate)
    double mean_accuracy_reward = 0.0;
    double mean_format_reward = 0.0;
    double objective = 0.0;  // mean grpo_objective over the step's groups
};

struct GrpoTrainOptions {
    int steps = 200;
    double learning_rate = 0.5;
    uint64_t seed = 0;
};

struct GrpoTrainResult {
    ToyPolicy policy;
    std::vector<GrpoCurvePoint> curve;
};

/// one synchronous policy-gradient update per step on the clipped
/// surrogate with exact KL to the frozen initial policy; analytic gradient
/// through p_new only; deterministic given the seed
GrpoTrainResult train_toy_policy(const McqTask& task, const GrpoConfig& cfg,
                                 const GrpoTrainOptions& opt);

}  // namespace omni
