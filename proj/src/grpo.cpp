#include "omni/grpo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace omni {

void GrpoConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must be in (0, 1)");
    if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
    if (g < 1) throw std::invalid_argument("g must be >= 1");
    if (!(std_floor > 0.0)) throw std::invalid_argument("std_floor must be positive");
}

Vec normalize_advantages(const Vec& rewards, double std_floor) {
    if (rewards.empty()) throw std::invalid_argument("empty reward list");
    const double n = static_cast<double>(rewards.size());
    double mean = 0.0;
    for (double r : rewards) mean += r;
    mean /= n;
    double var = 0.0;
    for (double r : rewards) var += (r - mean) * (r - mean);
    var /= n;  // population std
    const double denom = std::max(std::sqrt(var), std_floor);
    Vec adv(rewards.size());
    for (size_t i = 0; i < rewards.size(); ++i) adv[i] = (rewards[i] - mean) / denom;
    return adv;
}

double clipped_term(double ratio, double advantage, double epsilon) {
    if (!(ratio > 0.0)) throw std::invalid_argument("invalid probability ratio");
    const double clipped = std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon);
    return std::min(ratio * advantage, clipped * advantage);
}

double categorical_kl(const Vec& p, const Vec& q) {
    if (p.size() != q.size()) throw std::invalid_argument("support mismatch");
    double kl = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) throw std::invalid_argument("reference probability is zero on the support");
        kl += p[i] * std::log(p[i] / q[i]);
    }
    return kl;
}

double grpo_objective(const RolloutGroup& group, const GrpoConfig& cfg, double kl_value) {
    cfg.validate();
    if (!(kl_value >= 0.0)) throw std::invalid_argument("kl_value must be >= 0");
    const int g = group.g();
    if (g < 1) throw std::invalid_argument("empty rollout group");
    if (group.p_new.size() != static_cast<size_t>(g) || group.p_old.size() != static_cast<size_t>(g))
        throw std::invalid_argument("probability lists must match group size");
    const Vec adv = normalize_advantages(group.rewards, cfg.std_floor);
    double total = 0.0;
    for (int i = 0; i < g; ++i) {
        const size_t s = static_cast<size_t>(i);
        total += clipped_term(group.p_new[s] / group.p_old[s], adv[s], cfg.epsilon);
    }
    return total / static_cast<double>(g) - cfg.beta * kl_value;
}

std::string option_token(int index) {
    return std::string(1, static_cast<char>('A' + index));
}

std::string render_response(int option, bool well_formed) {
    const std::string token = option_token(option);
    return well_formed ? "<answer>" + token + "</answer>" : token;
}

static bool is_bare_token(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c))) return false;
    return true;
}

RewardBreakdown rule_based_reward(const std::string& response, const std::string& expected) {
    RewardBreakdown out;
    std::string extracted;
    const std::string open = "<answer>";
    const std::string close = "</answer>";
    if (response.size() > open.size() + close.size() &&
        response.compare(0, open.size(), open) == 0 &&
        response.compare(response.size() - close.size(), close.size(), close) == 0) {
        const std::string inner =
            response.substr(open.size(), response.size() - open.size() - close.size());
        if (is_bare_token(inner)) {
            out.format = 1.0;
            extracted = inner;
        }
    } else if (is_bare_token(response)) {
        extracted = response;
    }
    if (!extracted.empty() && extracted == expected) out.accuracy = 1.0;
    out.total = (out.format + out.accuracy) / 2.0;
    return out;
}

McqTask make_mcq_task(int n_questions, int n_options, SeededRng& rng) {
    if (n_questions < 1 || n_options < 2) throw std::invalid_argument("invalid task shape");
    McqTask task;
    task.n_options = n_options;
    task.correct.resize(static_cast<size_t>(n_questions));
    for (int& c : task.correct) c = rng.uniform_int(n_options);
    return task;
}

namespace {

struct QuestionGrad {
    Vec option;  // d objective / d option_logits[q]
    Vec format;  // contribution to d objective / d format_logits
    double objective = 0.0;
    double kl = 0.0;
};

int sample_categorical(const Vec& probs, double u) {
    double acc = 0.0;
    for (size_t i = 0; i + 1 < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
}

}  // namespace

GrpoTrainResult train_toy_policy(const McqTask& task, const GrpoConfig& cfg,
                                 const GrpoTrainOptions& opt) {
    cfg.validate();
    if (opt.steps < 1) throw std::invalid_argument("steps must be >= 1");
    const int n_questions = static_cast<int>(task.correct.size());
    if (n_questions < 1) throw std::invalid_argument("task has no questions");
    const int n_options = task.n_options;

    GrpoTrainResult result;
    result.policy.option_logits = Mat(n_questions, n_options, 0.0);
    result.policy.format_logits = Vec(2, 0.0);
    ToyPolicy& policy = result.policy;
    const ToyPolicy reference = policy;  // frozen uniform reference

    const Vec ref_fmt = softmax(reference.format_logits);
    SeededRng root(opt.seed);

    for (int step = 0; step < opt.steps; ++step) {
        const Vec p_fmt = softmax(policy.format_logits);
        std::vector<QuestionGrad> grads(static_cast<size_t>(n_questions));

#pragma omp parallel for schedule(static)
        for (int q = 0; q < n_questions; ++q) {
            SeededRng stream = root.clone_with_offset(
                1 + static_cast<uint64_t>(step) * static_cast<uint64_t>(n_questions) +
                static_cast<uint64_t>(q));
            const Vec p_opt = softmax(policy.option_logits.row(q));
            const Vec ref_opt = softmax(reference.option_logits.row(q));
            const std::string key = option_token(task.correct[static_cast<size_t>(q)]);

            RolloutGroup group;
            group.rewards.resize(static_cast<size_t>(cfg.g));
            group.p_new.resize(static_cast<size_t>(cfg.g));
            group.p_old.resize(static_cast<size_t>(cfg.g));
            group.p_ref.resize(static_cast<size_t>(cfg.g));
            std::vector<int> options(static_cast<size_t>(cfg.g));
            std::vector<int> formats(static_cast<size_t>(cfg.g));
            for (int i = 0; i < cfg.g; ++i) {
                const size_t s = static_cast<size_t>(i);
                options[s] = sample_categorical(p_opt, stream.uniform());
                formats[s] = stream.uniform() < p_fmt[0] ? 0 : 1;
                const bool well_formed = formats[s] == 0;
                group.responses.push_back(render_response(options[s], well_formed));
                group.rewards[s] = rule_based_reward(group.responses.back(), key).total;
                const double p_action =
                    p_opt[static_cast<size_t>(options[s])] * p_fmt[static_cast<size_t>(formats[s])];
                group.p_new[s] = p_action;  // evaluated at the sampling policy
                group.p_old[s] = p_action;
                group.p_ref[s] = ref_opt[static_cast<size_t>(options[s])] *
                                 ref_fmt[static_cast<size_t>(formats[s])];
            }

            const Vec adv = normalize_advantages(group.rewards, cfg.std_floor);
            QuestionGrad& qg = grads[static_cast<size_t>(q)];
            qg.option.assign(static_cast<size_t>(n_options), 0.0);
            qg.format.assign(2, 0.0);

            const double inv_g = 1.0 / static_cast<double>(cfg.g);
            for (int i = 0; i < cfg.g; ++i) {
                const size_t s = static_cast<size_t>(i);
                const double ratio = group.p_new[s] / group.p_old[s];
                // pessimistic min: the surrogate only passes gradient when
                // the unclipped branch is active
                const double clipped = std::clamp(ratio, 1.0 - cfg.epsilon, 1.0 + cfg.epsilon);
                if (ratio * adv[s] > clipped * adv[s]) continue;
                const double w = inv_g * adv[s] * ratio;
                for (int j = 0; j < n_options; ++j)
                    qg.option[static_cast<size_t>(j)] +=
                        w * ((j == options[s] ? 1.0 : 0.0) - p_opt[static_cast<size_t>(j)]);
                for (int b = 0; b < 2; ++b)
                    qg.format[static_cast<size_t>(b)] +=
                        w * ((b == formats[s] ? 1.0 : 0.0) - p_fmt[static_cast<size_t>(b)]);
            }

            const double kl_opt = categorical_kl(p_opt, ref_opt);
            const double kl_fmt = categorical_kl(p_fmt, ref_fmt);
            qg.kl = std::max(0.0, kl_opt + kl_fmt);  // clamp rounding residue
            for (int j = 0; j < n_options; ++j) {
                const size_t s = static_cast<size_t>(j);
                qg.option[s] -= cfg.beta * p_opt[s] * (std::log(p_opt[s] / ref_opt[s]) - kl_opt);
            }
            for (int b = 0; b < 2; ++b) {
                const size_t s = static_cast<size_t>(b);
                qg.format[s] -= cfg.beta * p_fmt[s] * (std::log(p_fmt[s] / ref_fmt[s]) - kl_fmt);
            }
            qg.objective = grpo_objective(group, cfg, qg.kl);
        }

        // curve entry reflects the sampling policy of this step
        GrpoCurvePoint point;
        point.step = step;
        point.mean_format_reward = p_fmt[0];
        double acc = 0.0;
        double obj = 0.0;
        for (int q = 0; q < n_questions; ++q) {
            const Vec p_opt = softmax(policy.option_logits.row(q));
            acc += p_opt[static_cast<size_t>(task.correct[static_cast<size_t>(q)])];
            obj += grads[static_cast<size_t>(q)].objective;
        }
        point.mean_accuracy_reward = acc / static_cast<double>(n_questions);
        point.objective = obj / static_cast<double>(n_questions);
        result.curve.push_back(point);

        // synchronous ascent step on the summed group objectives; the shared
        // format logits accumulate signal from every group, so formatting
        // converges faster than per-question accuracy
        for (int q = 0; q < n_questions; ++q) {
            const QuestionGrad& qg = grads[static_cast<size_t>(q)];
            for (int j = 0; j < n_options; ++j)
                policy.option_logits.at(q, j) += opt.learning_rate * qg.option[static_cast<size_t>(j)];
            for (int b = 0; b < 2; ++b)
                policy.format_logits[static_cast<size_t>(b)] +=
                    opt.learning_rate * qg.format[static_cast<size_t>(b)];
        }
    }
    return result;
}

}  // namespace omni
