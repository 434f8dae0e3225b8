#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "omni/numerics.hpp"

namespace omni {

enum class Modality { vision, audio };

struct TimedEmbedding {
    Vec vec;
    double t = 0.0;
    Modality modality = Modality::vision;
    int source_index = 0;  // position within its modality stream
};

/// bucket index floor(t / t_g) over half-open intervals [k*t_g, (k+1)*t_g)
int64_t group_index_for(double t, double t_g);

/// throws for t_g <= 0 or non-finite timestamps
std::map<int64_t, std::vector<TimedEmbedding>> assign_groups(
    const std::vector<TimedEmbedding>& items, double t_g);

struct SequenceGroup {
    int64_t group_index = 0;
    std::vector<TimedEmbedding> vision_members;
    std::vector<TimedEmbedding> audio_members;
};

struct GroupedSequence {
    double group_duration = 0.0;
    std::vector<SequenceGroup> groups;  // ascending group_index; empty groups skipped
    std::vector<TimedEmbedding> flat;   // vision block then audio block per group
};

// Sorts each modality stably by (t, source_index), buckets by timestamp and
// emits [G1_v, G1_a, G2_v, G2_a, ...]. Throws on mixed embedding dimensions.
GroupedSequence assemble_sequence(std::vector<TimedEmbedding> vision,
                                  std::vector<TimedEmbedding> audio, double t_g);

}  // namespace omni
