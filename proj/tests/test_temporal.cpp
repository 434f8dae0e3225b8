#include <doctest.h>

#include <cmath>

#include "omni/temporal.hpp"

using namespace omni;

namespace {
constexpr double k_pi = 3.14159265358979323846264338328;

CrteConfig make_cfg(int dim, double t_max, double theta, PairingMode mode) {
    CrteConfig cfg;
    cfg.dim = dim;
    cfg.t_max = t_max;
    cfg.theta = theta;
    cfg.pairing_mode = mode;
    return cfg;
}
}  // namespace

TEST_CASE("base frequencies follow 2*pi / (t_max * theta^(i/C))") {
    // theta = 1 collapses the scaling
    const FrequencyTable flat = base_frequencies(make_cfg(4, 1.0, 1.0, PairingMode::shared_per_plane));
    for (double w : flat.omega) CHECK(w == doctest::Approx(2.0 * k_pi).epsilon(1e-15));

    // theta = 16 on C = 4 halves the frequency per dimension
    const FrequencyTable table = base_frequencies(make_cfg(4, 1.0, 16.0, PairingMode::shared_per_plane));
    const double expected[4] = {2.0 * k_pi, k_pi, k_pi / 2.0, k_pi / 4.0};
    for (int i = 0; i < 4; ++i) CHECK(table.omega[static_cast<size_t>(i)] ==
                                      doctest::Approx(expected[i]).epsilon(1e-13));

    const FrequencyTable deflt = base_frequencies(make_cfg(32, 3600.0, 10000.0, PairingMode::shared_per_plane));
    CHECK(std::fabs(deflt.omega[0] - 2.0 * k_pi / 3600.0) < 1e-12);

    CHECK_THROWS(base_frequencies(make_cfg(5, 1.0, 2.0, PairingMode::shared_per_plane)));
    CHECK_THROWS(base_frequencies(make_cfg(4, -1.0, 2.0, PairingMode::shared_per_plane)));
    CHECK_THROWS(base_frequencies(make_cfg(4, 1.0, 0.5, PairingMode::shared_per_plane)));
}

TEST_CASE("frequency ratios form an exact geometric progression") {
    const FrequencyTable table =
        base_frequencies(make_cfg(64, 1800.0, 10000.0, PairingMode::shared_per_plane));
    const double expected_ratio = std::pow(10000.0, -1.0 / 64.0);
    for (size_t i = 0; i + 1 < table.omega.size(); ++i) {
        CHECK(std::fabs(table.omega[i + 1] / table.omega[i] - expected_ratio) < 1e-12);
        CHECK(table.omega[i + 1] < table.omega[i]);
    }
}

TEST_CASE("smaller t_max raises the base frequency") {
    const auto small = base_frequencies(make_cfg(8, 10.0, 100.0, PairingMode::shared_per_plane));
    const auto large = base_frequencies(make_cfg(8, 100.0, 100.0, PairingMode::shared_per_plane));
    CHECK(small.omega[0] > large.omega[0]);
}

TEST_CASE("modulate scales frequencies by the timestamp") {
    const FrequencyTable table = base_frequencies(make_cfg(4, 1.0, 1.0, PairingMode::shared_per_plane));
    for (double w : modulate(table, 0.0)) CHECK(w == 0.0);

    FrequencyTable single;
    single.omega = {2.0 * k_pi};
    CHECK(modulate(single, 0.5)[0] == doctest::Approx(k_pi).epsilon(1e-15));

    const Vec at_t = modulate(table, 0.35);
    const Vec at_2t = modulate(table, 0.70);
    for (size_t i = 0; i < at_t.size(); ++i) CHECK(std::fabs(at_2t[i] - 2.0 * at_t[i]) < 1e-12);

    CHECK_THROWS_WITH(modulate(table, -0.1), "negative timestamp");
}

TEST_CASE("rotate_half definition, involution and norm") {
    const Vec rotated = rotate_half({1.0, 2.0, 3.0, 4.0});
    CHECK(rotated == Vec{-2.0, 1.0, -4.0, 3.0});

    CHECK_THROWS_WITH(rotate_half({1.0, 2.0, 3.0}), "odd dimension");

    SeededRng rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
        Vec x(8);
        for (double& v : x) v = rng.normal();
        const Vec twice = rotate_half(rotate_half(x));
        for (size_t i = 0; i < x.size(); ++i) CHECK(std::fabs(twice[i] + x[i]) < 1e-15);
        CHECK(std::fabs(norm2(rotate_half(x)) - norm2(x)) < 1e-12);
    }
}

TEST_CASE("apply_crte is the identity at t = 0") {
    SeededRng rng(5);
    const CrteConfig cfg = make_cfg(16, 60.0, 10000.0, PairingMode::shared_per_plane);
    Vec x(16);
    for (double& v : x) v = rng.normal();
    const Vec out = apply_crte(x, 0.0, cfg);
    for (size_t i = 0; i < x.size(); ++i) CHECK(std::fabs(out[i] - x[i]) < 1e-15);
}

TEST_CASE("apply_crte matches the 2x2 rotation-matrix oracle") {
    const CrteConfig cfg = make_cfg(2, 2.0 * k_pi, 1.0, PairingMode::shared_per_plane);
    const Vec out = apply_crte({1.0, 0.0}, k_pi / 2.0, cfg);
    CHECK(std::fabs(out[0] - 0.0) < 1e-12);
    CHECK(std::fabs(out[1] - 1.0) < 1e-12);

    // random angle against an explicit rotation matrix per plane
    SeededRng rng(41);
    const CrteConfig cfg8 = make_cfg(8, 30.0, 100.0, PairingMode::shared_per_plane);
    const FrequencyTable table = base_frequencies(cfg8);
    for (int trial = 0; trial < 200; ++trial) {
        Vec x(8);
        for (double& v : x) v = rng.normal();
        const double t = rng.uniform(0.0, 30.0);
        const Vec got = apply_crte(x, t, cfg8);
        for (int plane = 0; plane < 4; ++plane) {
            const double phi = table.omega[static_cast<size_t>(2 * plane)] * t;
            const double c = std::cos(phi);
            const double s = std::sin(phi);
            const double x0 = x[static_cast<size_t>(2 * plane)];
            const double x1 = x[static_cast<size_t>(2 * plane + 1)];
            CHECK(std::fabs(got[static_cast<size_t>(2 * plane)] - (c * x0 - s * x1)) < 1e-12);
            CHECK(std::fabs(got[static_cast<size_t>(2 * plane + 1)] - (s * x0 + c * x1)) < 1e-12);
        }
    }
}

TEST_CASE("paper_per_dim mode keeps per-dimension angles") {
    const CrteConfig cfg = make_cfg(4, 1.0, 16.0, PairingMode::paper_per_dim);
    const FrequencyTable table = base_frequencies(cfg);
    const Vec x = {0.3, -1.2, 0.7, 0.9};
    const double t = 0.4;
    const Vec got = apply_crte(x, t, cfg);
    const Vec rh = rotate_half(x);
    for (size_t i = 0; i < x.size(); ++i) {
        const double phi = table.omega[i] * t;
        CHECK(std::fabs(got[i] - (x[i] * std::cos(phi) + rh[i] * std::sin(phi))) < 1e-15);
    }
}

TEST_CASE("shared_per_plane preserves norms") {
    SeededRng rng(6);
    const CrteConfig cfg = make_cfg(32, 120.0, 10000.0, PairingMode::shared_per_plane);
    for (int trial = 0; trial < 500; ++trial) {
        Vec x(32);
        for (double& v : x) v = rng.normal();
        const double t = rng.uniform(0.0, 120.0);
        CHECK(std::fabs(norm2(apply_crte(x, t, cfg)) - norm2(x)) < 1e-12);
    }
}

TEST_CASE("apply_crte is linear in the embedding") {
    SeededRng rng(61);
    for (PairingMode mode : {PairingMode::shared_per_plane, PairingMode::paper_per_dim}) {
        const CrteConfig cfg = make_cfg(8, 20.0, 500.0, mode);
        for (int trial = 0; trial < 100; ++trial) {
            Vec x(8), y(8);
            for (double& v : x) v = rng.normal();
            for (double& v : y) v = rng.normal();
            const double alpha = rng.uniform(-2.0, 2.0);
            const double beta = rng.uniform(-2.0, 2.0);
            const double t = rng.uniform(0.0, 20.0);
            Vec combo(8);
            for (size_t i = 0; i < combo.size(); ++i) combo[i] = alpha * x[i] + beta * y[i];
            const Vec lhs = apply_crte(combo, t, cfg);
            const Vec rx = apply_crte(x, t, cfg);
            const Vec ry = apply_crte(y, t, cfg);
            for (size_t i = 0; i < combo.size(); ++i)
                CHECK(std::fabs(lhs[i] - (alpha * rx[i] + beta * ry[i])) < 1e-12);
        }
    }
}

TEST_CASE("dot products are invariant to a shared time shift") {
    SeededRng rng(71);
    const CrteConfig cfg = make_cfg(16, 100.0, 1000.0, PairingMode::shared_per_plane);
    for (int trial = 0; trial < 1000; ++trial) {
        Vec x(16), y(16);
        for (double& v : x) v = rng.normal();
        for (double& v : y) v = rng.normal();
        const double t1 = rng.uniform(0.0, 50.0);
        const double t2 = rng.uniform(0.0, 50.0);
        const double delta = rng.uniform(0.0, 50.0);
        const double base = dot(apply_crte(x, t1, cfg), apply_crte(y, t2, cfg));
        const double shifted = dot(apply_crte(x, t1 + delta, cfg), apply_crte(y, t2 + delta, cfg));
        CHECK(std::fabs(base - shifted) < 1e-9);
    }
}

TEST_CASE("timestamps beyond the horizon are flagged, not rejected") {
    const CrteConfig cfg = make_cfg(4, 10.0, 100.0, PairingMode::shared_per_plane);
    CHECK(exceeds_horizon(cfg, 11.0));
    CHECK_FALSE(exceeds_horizon(cfg, 10.0));
    CHECK_NOTHROW(apply_crte({1.0, 0.0, 0.0, 0.0}, 25.0, cfg));
}

TEST_CASE("apply_crte_seq parity and dimension checks") {
    SeededRng rng(81);
    const CrteConfig cfg = make_cfg(8, 16.0, 100.0, PairingMode::shared_per_plane);
    Mat seq(20, 8);
    for (double& v : seq.data) v = rng.normal();
    Vec ts(20);
    for (double& t : ts) t = rng.uniform(0.0, 16.0);
    const Mat par = apply_crte_seq(seq, ts, cfg);
    const Mat ser = apply_crte_seq_serial(seq, ts, cfg);
    for (size_t i = 0; i < par.data.size(); ++i) CHECK(par.data[i] == ser.data[i]);

    CHECK_THROWS(apply_crte_seq(seq, Vec(3, 0.0), cfg));
    CHECK_THROWS(apply_crte(Vec(6, 1.0), 0.0, cfg));
}

TEST_CASE("learned time table lookup") {
    LearnedTimeTable table;
    table.resolution = 1.0;
    table.t_max = 2.0;
    table.entries = Mat(3, 2);
    table.entries.set_row(0, {0.0, 0.0});
    table.entries.set_row(1, {2.0, 2.0});
    table.entries.set_row(2, {4.0, 4.0});

    CHECK(learned_time_lookup(table, 1.0) == Vec{2.0, 2.0});  // grid point verbatim

    const Vec mid = learned_time_lookup(table, 1.5);
    CHECK(mid[0] == doctest::Approx(3.0).epsilon(1e-15));  // midway average

    const Vec half = learned_time_lookup(table, 0.5);
    CHECK(half[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(half[1] == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_NOTHROW(learned_time_lookup(table, 2.0));  // top of range stays in bounds
    CHECK_THROWS_WITH(learned_time_lookup(table, 2.5), "timestamp out of range");
    CHECK_THROWS_WITH(learned_time_lookup(table, -0.5), "timestamp out of range");

    SeededRng rng(4);
    const LearnedTimeTable made = make_learned_time_table(10.0, 0.5, 8, rng, 0.02);
    CHECK(made.entries.rows == 21);
    for (double t : {0.0, 3.3, 9.99, 10.0}) CHECK_NOTHROW(learned_time_lookup(made, t));
}
