#include "omni/sequencing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace omni {

int64_t group_index_for(double t, double t_g) {
    if (!(t_g > 0.0)) throw std::invalid_argument("group duration must be positive");
    if (!std::isfinite(t) || t < 0.0) throw std::invalid_argument("invalid timestamp");
    return static_cast<int64_t>(std::floor(t / t_g));
}

std::map<int64_t, std::vector<TimedEmbedding>> assign_groups(
    const std::vector<TimedEmbedding>& items, double t_g) {
    if (!(t_g > 0.0)) throw std::invalid_argument("group duration must be positive");
    std::map<int64_t, std::vector<TimedEmbedding>> groups;
    for (const TimedEmbedding& item : items) groups[group_index_for(item.t, t_g)].push_back(item);
    return groups;
}

static void sort_stream(std::vector<TimedEmbedding>& items) {
    std::stable_sort(items.begin(), items.end(), [](const TimedEmbedding& a, const TimedEmbedding& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.source_index < b.source_index;
    });
}

GroupedSequence assemble_sequence(std::vector<TimedEmbedding> vision,
                                  std::vector<TimedEmbedding> audio, double t_g) {
    size_t dim = 0;
    bool have_dim = false;
    for (const auto* stream : {&vision, &audio}) {
        for (const TimedEmbedding& item : *stream) {
            if (!have_dim) {
                dim = item.vec.size();
                have_dim = true;
            } else if (item.vec.size() != dim) {
                throw std::invalid_argument("mixed embedding dimensions");
            }
        }
    }

    sort_stream(vision);
    sort_stream(audio);

    auto vision_groups = assign_groups(vision, t_g);
    auto audio_groups = assign_groups(audio, t_g);

    GroupedSequence out;
    out.group_duration = t_g;

    auto vi = vision_groups.begin();
    auto ai = audio_groups.begin();
    while (vi != vision_groups.end() || ai != audio_groups.end()) {
        int64_t idx;
        if (vi == vision_groups.end()) idx = ai->first;
        else if (ai == audio_groups.end()) idx = vi->first;
        else idx = std::min(vi->first, ai->first);

        SequenceGroup group;
        group.group_index = idx;
        if (vi != vision_groups.end() && vi->first == idx) {
            group.vision_members = std::move(vi->second);
            ++vi;
        }
        if (ai != audio_groups.end() && ai->first == idx) {
            group.audio_members = std::move(ai->second);
            ++ai;
        }
        for (const TimedEmbedding& item : group.vision_members) out.flat.push_back(item);
        for (const TimedEmbedding& item : group.audio_members) out.flat.push_back(item);
        out.groups.push_back(std::move(group));
    }
    return out;
}

}  // namespace omni
