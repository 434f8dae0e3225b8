#pragma once

#include <vector>

#include "omni/alignnet.hpp"
#include "omni/config.hpp"

namespace omni {

struct LinearHeads {
    Mat w_v, w_a;  // out_dim x in_dim
    double tau = 1.0;
};

struct AlignCurvePoint {
    int epoch = 0;
    double loss = 0.0;
    double v_to_a_top1 = 0.0;
    double a_to_v_top1 = 0.0;
};

struct AlignTrainOptions {
    uint64_t seed = 0;
    bool debug_grad_check = false;  // finite-difference spot check each epoch
    bool learn_tau = false;         // gradient on log tau alongside the heads
};

struct AlignTrainResult {
    LinearHeads heads;
    std::vector<AlignCurvePoint> curve;
};

Vec meanpool(const Mat& seq);

/// V_i = l2_normalize(w_v . meanpool(vision_i)), same for audio; full-batch
/// gradient descent on the contrastive loss with the analytic gradient
/// through the normalization and the linear map. Throws "divergence at
/// epoch N" if the loss goes non-finite.
AlignTrainResult train_alignment(const OmniBatch& batch, const AlignTrainConfig& cfg,
                                 const AlignTrainOptions& opt);

OmniEmbeddings apply_linear_heads(const OmniBatch& batch, const LinearHeads& heads);
RetrievalAccuracy eval_retrieval(const OmniBatch& batch, const LinearHeads& heads);

/// least-squares recovery of the latent from pooled rows; used as the
/// exact-alignment oracle when noise_sigma = 0
Mat pseudo_inverse_head(const Mat& projection);

}  // namespace omni
