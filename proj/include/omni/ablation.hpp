#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "omni/config.hpp"
#include "omni/sequencing.hpp"
#include "omni/trainer.hpp"

namespace omni {

// Synthetic temporal-retrieval task: every clip carries the same multiset
// of codebook events, so content alone cannot identify a clip; only the
// clip-specific temporal arrangement can. Vision and audio observe the
// same schedule with a small audio time offset.
struct AblationClip {
    std::vector<TimedEmbedding> vision;
    std::vector<TimedEmbedding> audio;
};

struct AblationTask {
    std::vector<AblationClip> clips;
    int n_slots = 0;  // TEG buckets covering the clip duration
    double t_g = 1.0;
    double duration = 8.0;
};

/// shuffle_timestamps reassigns event times at random within each modality,
/// destroying the temporal correspondence (negative control).
/// clip_stream_offset selects a disjoint block of clip RNG streams while
/// keeping the codebook fixed; the align-head variant trains on one block
/// and is scored on another.
AblationTask make_ablation_task(const ExperimentConfig& cfg, bool shuffle_timestamps,
                                uint64_t clip_stream_offset = 0);

// per-clip representations, each composed from public module operations
Vec clip_rep_baseline(const std::vector<TimedEmbedding>& items);
Vec clip_rep_grouped(const std::vector<TimedEmbedding>& items, double t_g, int n_slots);
Vec clip_rep_grouped_crte(const std::vector<TimedEmbedding>& items, double t_g, int n_slots,
                          const CrteConfig& crte);

struct AblationRow {
    std::string name;
    double v_to_a_top1 = 0.0;
    double a_to_v_top1 = 0.0;
    double margin_vs_baseline = 0.0;  // mean of both directions minus baseline mean
};

struct AblationReport {
    std::vector<AblationRow> variants;          // 4 rows
    std::vector<AblationRow> shuffled_control;  // same variants, shuffled timestamps
    nlohmann::json task_params;
};

nlohmann::json ablation_report_to_json(const AblationReport& report);

AblationReport run_ablation(const ExperimentConfig& cfg);

}  // namespace omni
