#pragma once

#include <array>
#include <vector>

#include "omni/numerics.hpp"
#include "omni/rng.hpp"

namespace omni {

// K paired variable-length modality sequences, uniform embedding dim.
struct OmniBatch {
    std::vector<Mat> vision_seqs;  // each N_v x C, N_v >= 1
    std::vector<Mat> audio_seqs;   // each N_a x C

    int k() const { return static_cast<int>(vision_seqs.size()); }
    int dim() const { return vision_seqs.empty() ? 0 : vision_seqs.front().cols; }
    void validate() const;  // throws std::invalid_argument
};

// Residual attention + feed-forward block. No biases, no layer norm.
struct AttentionBlock {
    Mat w_q, w_k, w_v, w_o;  // C x C
    Mat ffn_up;              // 4C x C
    Mat ffn_down;            // C x 4C
};

struct AlignHeadParams {
    Vec q_v, q_a;                         // 1 x C modality queries
    std::array<AttentionBlock, 3> blocks;
    double init_scale = 0.02;
};

/// Gaussian init, mean 0, std init_scale, drawn from rng in a fixed order
AlignHeadParams init_align_head(int dim, SeededRng& rng, double init_scale = 0.02);

/// single-head scaled dot-product cross-attention of q over seq rows:
/// softmax(q.seq^T / sqrt(C)) . seq
Vec project_with_query(const Mat& seq, const Vec& q);

/// y = x + W_o(W_v x); z = y + ffn_down(gelu(ffn_up y))
Vec attention_block_forward(const Vec& x, const AttentionBlock& block);

struct OmniEmbeddings {
    Mat v;  // K x C, unit rows
    Mat a;
};

/// per sample, per modality: project_with_query -> 3 blocks -> l2_normalize
OmniEmbeddings compute_omni_embeddings(const OmniBatch& batch, const AlignHeadParams& params);
OmniEmbeddings compute_omni_embeddings_serial(const OmniBatch& batch, const AlignHeadParams& params);

/// symmetric cross-entropy over s_ij = (V_i . A_j) / tau, averaged over the
/// row-wise and column-wise directions; throws for tau <= 0
double contrastive_loss(const Mat& v, const Mat& a, double tau);
double contrastive_loss_serial(const Mat& v, const Mat& a, double tau);

struct ContrastiveGrad {
    Mat dv, da;  // dL/dV, dL/dA
};

ContrastiveGrad contrastive_loss_grad(const Mat& v, const Mat& a, double tau);
ContrastiveGrad contrastive_loss_grad_serial(const Mat& v, const Mat& a, double tau);

/// dL/d(log tau), for the learnable-temperature option
double contrastive_loss_log_tau_grad(const Mat& v, const Mat& a, double tau);

struct RetrievalAccuracy {
    double v_to_a_top1 = 0.0;
    double a_to_v_top1 = 0.0;
};

/// fraction of rows whose matched partner has the highest similarity,
/// ties broken toward the lowest index
RetrievalAccuracy retrieval_accuracy(const Mat& v, const Mat& a);

}  // namespace omni
