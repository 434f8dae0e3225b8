#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "omni/rng.hpp"
#include "omni/sequencing.hpp"

using namespace omni;

namespace {

TimedEmbedding make_item(double t, Modality m, int source_index, double payload = 0.0) {
    return {{payload, payload}, t, m, source_index};
}

std::vector<TimedEmbedding> make_stream(Modality m, const std::vector<double>& times) {
    std::vector<TimedEmbedding> items;
    for (size_t i = 0; i < times.size(); ++i)
        items.push_back(make_item(times[i], m, static_cast<int>(i)));
    return items;
}

// brute-force bucket oracle: linear scan per group index
std::vector<std::pair<Modality, int>> oracle_flat(const std::vector<TimedEmbedding>& vision,
                                                  const std::vector<TimedEmbedding>& audio,
                                                  double t_g) {
    std::vector<std::pair<Modality, int>> flat;
    int64_t max_group = 0;
    for (const auto* stream : {&vision, &audio})
        for (const TimedEmbedding& item : *stream)
            max_group = std::max(max_group, static_cast<int64_t>(std::floor(item.t / t_g)));
    for (int64_t g = 0; g <= max_group; ++g) {
        for (const auto* stream : {&vision, &audio}) {
            std::vector<const TimedEmbedding*> members;
            for (const TimedEmbedding& item : *stream)
                if (static_cast<int64_t>(std::floor(item.t / t_g)) == g) members.push_back(&item);
            std::stable_sort(members.begin(), members.end(),
                             [](const TimedEmbedding* a, const TimedEmbedding* b) {
                                 if (a->t != b->t) return a->t < b->t;
                                 return a->source_index < b->source_index;
                             });
            for (const TimedEmbedding* item : members) flat.emplace_back(item->modality, item->source_index);
        }
    }
    return flat;
}

}  // namespace

TEST_CASE("assign_groups buckets half-open intervals") {
    const auto groups = assign_groups(make_stream(Modality::vision, {1.0, 2.0, 13.0, 14.0}), 10.0);
    REQUIRE(groups.size() == 2);
    REQUIRE(groups.count(0) == 1);
    REQUIRE(groups.count(1) == 1);
    CHECK(groups.at(0).size() == 2);
    CHECK(groups.at(1).size() == 2);
    CHECK(groups.at(0)[0].t == 1.0);
    CHECK(groups.at(1)[0].t == 13.0);

    // everything below t_g lands in group 0
    const auto single = assign_groups(make_stream(Modality::audio, {0.0, 3.5, 9.99}), 10.0);
    CHECK(single.size() == 1);
    CHECK(single.at(0).size() == 3);

    // boundary timestamp opens the next group
    CHECK(group_index_for(10.0, 10.0) == 1);
    CHECK(group_index_for(9.999999, 10.0) == 0);

    CHECK_THROWS(assign_groups({}, 0.0));
    CHECK_THROWS(assign_groups({}, -1.0));
}

TEST_CASE("assemble_sequence reproduces the two-group worked example") {
    // four vision and four audio timestamps straddling one boundary
    const auto vision = make_stream(Modality::vision, {1.0, 4.0, 12.0, 17.0});
    const auto audio = make_stream(Modality::audio, {2.0, 6.0, 13.0, 18.0});
    const GroupedSequence seq = assemble_sequence(vision, audio, 10.0);

    REQUIRE(seq.flat.size() == 8);
    const std::vector<std::pair<Modality, int>> expected = {
        {Modality::vision, 0}, {Modality::vision, 1}, {Modality::audio, 0}, {Modality::audio, 1},
        {Modality::vision, 2}, {Modality::vision, 3}, {Modality::audio, 2}, {Modality::audio, 3}};
    for (size_t i = 0; i < expected.size(); ++i) {
        CHECK(seq.flat[i].modality == expected[i].first);
        CHECK(seq.flat[i].source_index == expected[i].second);
    }
    REQUIRE(seq.groups.size() == 2);
    CHECK(seq.groups[0].vision_members.size() == 2);
    CHECK(seq.groups[0].audio_members.size() == 2);
}

TEST_CASE("assemble_sequence hand-checked uneven case") {
    // vision at {0.1, 5, 9}, audio at {4, 12}: group 0 holds v0 v1 v2 + a0,
    // group 1 holds a1 only
    const auto vision = make_stream(Modality::vision, {0.1, 5.0, 9.0});
    const auto audio = make_stream(Modality::audio, {4.0, 12.0});
    const GroupedSequence seq = assemble_sequence(vision, audio, 10.0);

    REQUIRE(seq.flat.size() == 5);
    CHECK(seq.flat[0].t == 0.1);
    CHECK(seq.flat[1].t == 5.0);
    CHECK(seq.flat[2].t == 9.0);
    CHECK(seq.flat[3].t == 4.0);
    CHECK(seq.flat[3].modality == Modality::audio);
    CHECK(seq.flat[4].t == 12.0);

    const auto expected = oracle_flat(vision, audio, 10.0);
    REQUIRE(expected.size() == seq.flat.size());
    for (size_t i = 0; i < expected.size(); ++i) {
        CHECK(seq.flat[i].modality == expected[i].first);
        CHECK(seq.flat[i].source_index == expected[i].second);
    }
}

TEST_CASE("empty audio leaves the vision stream in timestamp order") {
    const auto vision = make_stream(Modality::vision, {3.0, 1.0, 2.0});
    const GroupedSequence seq = assemble_sequence(vision, {}, 10.0);
    REQUIRE(seq.flat.size() == 3);
    CHECK(seq.flat[0].t == 1.0);
    CHECK(seq.flat[1].t == 2.0);
    CHECK(seq.flat[2].t == 3.0);
}

TEST_CASE("assemble_sequence rejects mixed dimensions") {
    std::vector<TimedEmbedding> vision = {make_item(0.0, Modality::vision, 0)};
    std::vector<TimedEmbedding> audio = {{Vec{1.0, 2.0, 3.0}, 0.5, Modality::audio, 0}};
    CHECK_THROWS_WITH(assemble_sequence(vision, audio, 1.0), "mixed embedding dimensions");
}

namespace {

// a stream: ascending timestamps (ties allowed), source_index = stream position
std::vector<TimedEmbedding> random_stream(Modality m, int n, double horizon, SeededRng& rng) {
    std::vector<double> times(static_cast<size_t>(n));
    for (double& t : times) t = rng.uniform(0.0, horizon);
    for (size_t i = 1; i < times.size(); ++i)
        if (rng.uniform() < 0.15) times[i] = times[i - 1];  // occasional tie
    std::sort(times.begin(), times.end());
    std::vector<TimedEmbedding> items;
    for (int i = 0; i < n; ++i) items.push_back(make_item(times[static_cast<size_t>(i)], m, i));
    return items;
}

void shuffle_items(std::vector<TimedEmbedding>& items, SeededRng& rng) {
    for (size_t i = items.size(); i > 1; --i)
        std::swap(items[i - 1], items[static_cast<size_t>(rng.uniform_int(static_cast<int>(i)))]);
}

}  // namespace

TEST_CASE("fuzzed invariants: permutation, monotone groups, order, stability") {
    SeededRng rng(2024);
    for (int trial = 0; trial < 2000; ++trial) {
        const int n_v = rng.uniform_int(40);
        const int n_a = rng.uniform_int(40);
        const double t_g = rng.uniform(0.05, 20.0);
        const double horizon = rng.uniform(1.0, 100.0);
        std::vector<TimedEmbedding> vision = random_stream(Modality::vision, n_v, horizon, rng);
        std::vector<TimedEmbedding> audio = random_stream(Modality::audio, n_a, horizon, rng);
        shuffle_items(vision, rng);  // input order must not matter
        shuffle_items(audio, rng);

        const GroupedSequence seq = assemble_sequence(vision, audio, t_g);

        // permutation: multiset of (modality, source_index) preserved
        REQUIRE(seq.flat.size() == static_cast<size_t>(n_v + n_a));
        std::set<std::pair<int, int>> seen;
        for (const TimedEmbedding& item : seq.flat)
            seen.insert({item.modality == Modality::vision ? 0 : 1, item.source_index});
        CHECK(seen.size() == static_cast<size_t>(n_v + n_a));

        int64_t prev_group = -1;
        bool saw_audio_in_group = false;
        std::map<int64_t, int> last_source_v, last_source_a;
        for (const TimedEmbedding& item : seq.flat) {
            const int64_t g = group_index_for(item.t, t_g);
            CHECK(g >= prev_group);  // monotone groups
            if (g != prev_group) {
                prev_group = g;
                saw_audio_in_group = false;
            }
            if (item.modality == Modality::audio) {
                saw_audio_in_group = true;
                auto it = last_source_a.find(g);
                if (it != last_source_a.end()) CHECK(item.source_index > it->second);  // stability
                last_source_a[g] = item.source_index;
            } else {
                CHECK_FALSE(saw_audio_in_group);  // vision precedes audio inside a group
                auto it = last_source_v.find(g);
                if (it != last_source_v.end()) CHECK(item.source_index > it->second);
                last_source_v[g] = item.source_index;
            }
        }

        // no bucket index appears twice in the group list and none is empty
        for (size_t i = 0; i < seq.groups.size(); ++i) {
            CHECK(seq.groups[i].vision_members.size() + seq.groups[i].audio_members.size() > 0);
            if (i > 0) CHECK(seq.groups[i].group_index > seq.groups[i - 1].group_index);
        }
    }
}

TEST_CASE("re-assembling an assembled sequence is idempotent") {
    SeededRng rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<TimedEmbedding> vision, audio;
        const double t_g = rng.uniform(0.5, 5.0);
        for (int i = 0; i < 12; ++i)
            vision.push_back(make_item(rng.uniform(0.0, 30.0), Modality::vision, i));
        for (int i = 0; i < 7; ++i)
            audio.push_back(make_item(rng.uniform(0.0, 30.0), Modality::audio, i));
        const GroupedSequence once = assemble_sequence(vision, audio, t_g);

        std::vector<TimedEmbedding> vision2, audio2;
        for (const TimedEmbedding& item : once.flat)
            (item.modality == Modality::vision ? vision2 : audio2).push_back(item);
        const GroupedSequence twice = assemble_sequence(vision2, audio2, t_g);

        REQUIRE(twice.flat.size() == once.flat.size());
        for (size_t i = 0; i < once.flat.size(); ++i) {
            CHECK(twice.flat[i].modality == once.flat[i].modality);
            CHECK(twice.flat[i].source_index == once.flat[i].source_index);
            CHECK(twice.flat[i].t == once.flat[i].t);
        }
    }
}
