#include "omni/synthetic.hpp"

#include <algorithm>
#include <cmath>

namespace omni {

static Mat random_projection(int rows, int cols, SeededRng& rng) {
    Mat m(rows, cols);
    const double scale = 1.0 / std::sqrt(static_cast<double>(cols));
    for (double& w : m.data) w = scale * rng.normal();
    return m;
}

static Vec sorted_timestamps(int n, double duration, SeededRng& rng) {
    Vec ts(static_cast<size_t>(n));
    for (double& t : ts) t = rng.uniform(0.0, duration);
    std::sort(ts.begin(), ts.end());
    return ts;
}

static Mat modality_rows(const Mat& proj, const Vec& latent, int n_rows, double sigma,
                         SeededRng& rng) {
    const Vec mean = matvec(proj, latent);
    Mat rows(n_rows, proj.rows);
    for (int r = 0; r < n_rows; ++r)
        for (int c = 0; c < proj.rows; ++c)
            rows.at(r, c) = mean[static_cast<size_t>(c)] + sigma * rng.normal();
    return rows;
}

SyntheticPairs gen_synthetic_pairs(const SyntheticPairConfig& cfg) {
    cfg.validate();
    SeededRng root(cfg.seed);

    SyntheticPairs out;
    SeededRng proj_stream = root.clone_with_offset(0);
    out.proj_v = random_projection(cfg.c, cfg.latent_dim, proj_stream);
    out.proj_a = random_projection(cfg.c, cfg.latent_dim, proj_stream);
    out.latents = Mat(cfg.k, cfg.latent_dim);
    out.batch.vision_seqs.resize(static_cast<size_t>(cfg.k));
    out.batch.audio_seqs.resize(static_cast<size_t>(cfg.k));
    out.vision_timestamps.resize(static_cast<size_t>(cfg.k));
    out.audio_timestamps.resize(static_cast<size_t>(cfg.k));

#pragma omp parallel for schedule(static)
    for (int i = 0; i < cfg.k; ++i) {
        SeededRng stream = root.clone_with_offset(static_cast<uint64_t>(i) + 1);
        Vec latent(static_cast<size_t>(cfg.latent_dim));
        for (double& z : latent) z = stream.normal();
        out.latents.set_row(i, latent);
        const size_t s = static_cast<size_t>(i);
        out.batch.vision_seqs[s] = modality_rows(out.proj_v, latent, cfg.n_v, cfg.noise_sigma, stream);
        out.batch.audio_seqs[s] = modality_rows(out.proj_a, latent, cfg.n_a, cfg.noise_sigma, stream);
        out.vision_timestamps[s] = sorted_timestamps(cfg.n_v, cfg.duration, stream);
        out.audio_timestamps[s] = sorted_timestamps(cfg.n_a, cfg.duration, stream);
    }
    return out;
}

}  // namespace omni
