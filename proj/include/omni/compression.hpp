#pragma once

#include "omni/numerics.hpp"

namespace omni {

struct AudioTokenSeq {
    Mat tokens;         // N x C, time-major
    double rate = 0.0;  // tokens per second
};

enum class PoolMode { max, avg };

/// kernel 2, stride 2 pooling along time; a trailing odd window passes
/// through unchanged; output length ceil(N/2), rate halved
AudioTokenSeq pool_sequence(const AudioTokenSeq& seq, PoolMode mode);
AudioTokenSeq pool_sequence_serial(const AudioTokenSeq& seq, PoolMode mode);

/// depthwise 1-D convolution, kernel 3, stride 2, zero padding 1;
/// weights is C x 3 (one kernel row per channel); output length ceil(N/2)
AudioTokenSeq conv1d_downsample(const AudioTokenSeq& seq, const Mat& weights);
AudioTokenSeq conv1d_downsample_serial(const AudioTokenSeq& seq, const Mat& weights);

/// default kernel: every channel (1/3, 1/3, 1/3)
Mat make_avg_conv_kernel(int channels);

}  // namespace omni
