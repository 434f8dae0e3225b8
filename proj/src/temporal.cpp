#include "omni/temporal.hpp"

#include <cmath>
#include <stdexcept>

namespace omni {

static constexpr double k_two_pi = 6.283185307179586476925286766559;

std::string to_string(PairingMode m) {
    return m == PairingMode::paper_per_dim ? "paper_per_dim" : "shared_per_plane";
}

PairingMode pairing_mode_from_string(const std::string& s) {
    if (s == "paper_per_dim") return PairingMode::paper_per_dim;
    if (s == "shared_per_plane") return PairingMode::shared_per_plane;
    throw std::invalid_argument("unknown pairing_mode: " + s);
}

void CrteConfig::validate() const {
    if (dim <= 0 || dim % 2 != 0) throw std::invalid_argument("dim must be positive and even");
    if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
    if (!(theta >= 1.0)) throw std::invalid_argument("theta must be >= 1");
}

FrequencyTable base_frequencies(const CrteConfig& cfg) {
    cfg.validate();
    FrequencyTable table;
    table.pairing_mode = cfg.pairing_mode;
    table.omega.resize(static_cast<size_t>(cfg.dim));
    for (int i = 0; i < cfg.dim; ++i) {
        const double exponent = static_cast<double>(i) / static_cast<double>(cfg.dim);
        table.omega[static_cast<size_t>(i)] = k_two_pi / (cfg.t_max * std::pow(cfg.theta, exponent));
    }
    return table;
}

Vec modulate(const FrequencyTable& freqs, double t) {
    if (t < 0.0) throw std::invalid_argument("negative timestamp");
    return scaled(freqs.omega, t);
}

Vec rotate_half(const Vec& x) {
    if (x.size() % 2 != 0) throw std::invalid_argument("odd dimension");
    Vec out(x.size());
    for (size_t k = 0; k + 1 < x.size(); k += 2) {
        out[k] = -x[k + 1];
        out[k + 1] = x[k];
    }
    return out;
}

Vec apply_crte(const Vec& x, double t, const FrequencyTable& freqs) {
    if (x.size() != freqs.omega.size()) throw std::invalid_argument("dimension mismatch");
    Vec angles = modulate(freqs, t);
    if (freqs.pairing_mode == PairingMode::shared_per_plane) {
        for (size_t k = 0; k + 1 < angles.size(); k += 2) angles[k + 1] = angles[k];
    }
    const Vec rh = rotate_half(x);
    Vec out(x.size());
    for (size_t i = 0; i < x.size(); ++i)
        out[i] = x[i] * std::cos(angles[i]) + rh[i] * std::sin(angles[i]);
    return out;
}

Vec apply_crte(const Vec& x, double t, const CrteConfig& cfg) {
    return apply_crte(x, t, base_frequencies(cfg));
}

bool exceeds_horizon(const CrteConfig& cfg, double t) { return t > cfg.t_max; }

static Mat apply_crte_seq_impl(const Mat& seq, const Vec& timestamps, const CrteConfig& cfg,
                               bool parallel) {
    if (static_cast<size_t>(seq.rows) != timestamps.size())
        throw std::invalid_argument("dimension mismatch");
    if (seq.rows > 0 && seq.cols != cfg.dim) throw std::invalid_argument("dimension mismatch");
    // validate up front so the parallel loop body cannot throw
    for (double t : timestamps)
        if (!(t >= 0.0)) throw std::invalid_argument("negative timestamp");
    const FrequencyTable freqs = base_frequencies(cfg);
    Mat out(seq.rows, seq.cols);
#pragma omp parallel for schedule(static) if (parallel)
    for (int r = 0; r < seq.rows; ++r)
        out.set_row(r, apply_crte(seq.row(r), timestamps[static_cast<size_t>(r)], freqs));
    return out;
}

Mat apply_crte_seq(const Mat& seq, const Vec& timestamps, const CrteConfig& cfg) {
    return apply_crte_seq_impl(seq, timestamps, cfg, true);
}

Mat apply_crte_seq_serial(const Mat& seq, const Vec& timestamps, const CrteConfig& cfg) {
    return apply_crte_seq_impl(seq, timestamps, cfg, false);
}

LearnedTimeTable make_learned_time_table(double t_max, double resolution, int dim,
                                         SeededRng& rng, double init_scale) {
    if (!(t_max > 0.0) || !(resolution > 0.0) || dim <= 0)
        throw std::invalid_argument("invalid learned time table parameters");
    LearnedTimeTable table;
    table.resolution = resolution;
    table.t_max = t_max;
    const int n_rows = static_cast<int>(std::ceil(t_max / resolution)) + 1;
    table.entries = Mat(n_rows, dim);
    for (double& w : table.entries.data) w = init_scale * rng.normal();
    return table;
}

Vec learned_time_lookup(const LearnedTimeTable& table, double t) {
    if (t < 0.0 || t > table.t_max) throw std::invalid_argument("timestamp out of range");
    const double pos = t / table.resolution;
    const int lo = static_cast<int>(pos);
    const int hi = std::min(lo + 1, table.entries.rows - 1);
    const double frac = pos - static_cast<double>(lo);
    Vec out = table.entries.row(lo);
    const Vec next = table.entries.row(hi);
    for (size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - frac) * out[i] + frac * next[i];
    return out;
}

}  // namespace omni
