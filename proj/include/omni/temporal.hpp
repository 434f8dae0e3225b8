#pragma once

#include <string>

#include "omni/numerics.hpp"
#include "omni/rng.hpp"

namespace omni {

// How rotation angles map onto dimension pairs.
//  - shared_per_plane: plane (2k, 2k+1) uses omega[2k] for both components,
//    so every plane is a proper rotation (default).
//  - paper_per_dim: each dimension keeps its own omega[i].
enum class PairingMode { paper_per_dim, shared_per_plane };

std::string to_string(PairingMode m);
PairingMode pairing_mode_from_string(const std::string& s);

struct CrteConfig {
    int dim = 32;             // C, must be even
    double t_max = 3600.0;    // coarsest temporal resolution, seconds
    double theta = 10000.0;   // frequency scaling, >= 1
    PairingMode pairing_mode = PairingMode::shared_per_plane;

    void validate() const;  // throws std::invalid_argument
};

struct FrequencyTable {
    Vec omega;  // radians/second; omega[0] = 2*pi/t_max
    PairingMode pairing_mode = PairingMode::shared_per_plane;
};

/// omega[i] = 2*pi / (t_max * theta^(i/C)) for i = 0..C-1
FrequencyTable base_frequencies(const CrteConfig& cfg);

/// Omega[i] = omega[i] * t; throws "negative timestamp" for t < 0
Vec modulate(const FrequencyTable& freqs, double t);

/// (x1, x2, x3, x4, ...) -> (-x2, x1, -x4, x3, ...); throws "odd dimension"
Vec rotate_half(const Vec& x);

/// x .* cos(Omega) + rotate_half(x) .* sin(Omega). In shared_per_plane mode
/// Omega[2k+1] is replaced by Omega[2k] before application. Timestamps past
/// t_max are computed as-is; callers that care use exceeds_horizon to flag.
Vec apply_crte(const Vec& x, double t, const FrequencyTable& freqs);
Vec apply_crte(const Vec& x, double t, const CrteConfig& cfg);

bool exceeds_horizon(const CrteConfig& cfg, double t);

/// every row of seq rotated by its own timestamp (OpenMP over rows)
Mat apply_crte_seq(const Mat& seq, const Vec& timestamps, const CrteConfig& cfg);
Mat apply_crte_seq_serial(const Mat& seq, const Vec& timestamps, const CrteConfig& cfg);

// Trainable absolute-time baseline: a row per grid point, linearly
// interpolated between the two bracketing rows on lookup.
struct LearnedTimeTable {
    double resolution = 1.0;  // seconds between rows
    double t_max = 0.0;
    Mat entries;  // (ceil(t_max/resolution)+1) x C
};

LearnedTimeTable make_learned_time_table(double t_max, double resolution, int dim,
                                         SeededRng& rng, double init_scale);

/// throws "timestamp out of range" outside [0, t_max]
Vec learned_time_lookup(const LearnedTimeTable& table, double t);

}  // namespace omni
