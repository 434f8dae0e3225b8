#include "omni/compression.hpp"

#include <algorithm>
#include <stdexcept>

namespace omni {

static void check_seq(const AudioTokenSeq& seq) {
    if (seq.tokens.rows < 1) throw std::invalid_argument("empty token sequence");
    if (!(seq.rate > 0.0)) throw std::invalid_argument("rate must be positive");
}

static AudioTokenSeq pool_impl(const AudioTokenSeq& seq, PoolMode mode, bool parallel) {
    check_seq(seq);
    const int n = seq.tokens.rows;
    const int c = seq.tokens.cols;
    const int n_out = (n + 1) / 2;
    AudioTokenSeq out{Mat(n_out, c), seq.rate / 2.0};
#pragma omp parallel for schedule(static) if (parallel)
    for (int w = 0; w < n_out; ++w) {
        const int first = 2 * w;
        const int second = first + 1;
        if (second >= n) {
            out.tokens.set_row(w, seq.tokens.row(first));  // trailing singleton
            continue;
        }
        for (int ch = 0; ch < c; ++ch) {
            const double a = seq.tokens.at(first, ch);
            const double b = seq.tokens.at(second, ch);
            out.tokens.at(w, ch) = mode == PoolMode::max ? std::max(a, b) : 0.5 * (a + b);
        }
    }
    return out;
}

AudioTokenSeq pool_sequence(const AudioTokenSeq& seq, PoolMode mode) {
    return pool_impl(seq, mode, true);
}

AudioTokenSeq pool_sequence_serial(const AudioTokenSeq& seq, PoolMode mode) {
    return pool_impl(seq, mode, false);
}

static AudioTokenSeq conv_impl(const AudioTokenSeq& seq, const Mat& weights, bool parallel) {
    check_seq(seq);
    if (weights.rows != seq.tokens.cols || weights.cols != 3)
        throw std::invalid_argument("conv weights must be channels x 3");
    const int n = seq.tokens.rows;
    const int c = seq.tokens.cols;
    const int n_out = (n + 1) / 2;
    AudioTokenSeq out{Mat(n_out, c), seq.rate / 2.0};
#pragma omp parallel for schedule(static) if (parallel)
    for (int w = 0; w < n_out; ++w) {
        const int center = 2 * w;
        for (int ch = 0; ch < c; ++ch) {
            double s = 0.0;
            for (int tap = -1; tap <= 1; ++tap) {
                const int idx = center + tap;
                if (idx < 0 || idx >= n) continue;  // zero padding
                s += weights.at(ch, tap + 1) * seq.tokens.at(idx, ch);
            }
            out.tokens.at(w, ch) = s;
        }
    }
    return out;
}

AudioTokenSeq conv1d_downsample(const AudioTokenSeq& seq, const Mat& weights) {
    return conv_impl(seq, weights, true);
}

AudioTokenSeq conv1d_downsample_serial(const AudioTokenSeq& seq, const Mat& weights) {
    return conv_impl(seq, weights, false);
}

Mat make_avg_conv_kernel(int channels) {
    Mat kernel(channels, 3, 1.0 / 3.0);
    return kernel;
}

}  // namespace omni
