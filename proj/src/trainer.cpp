#include "omni/trainer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace omni {

Vec meanpool(const Mat& seq) {
    if (seq.rows < 1) throw std::invalid_argument("empty sequence");
    Vec out(static_cast<size_t>(seq.cols), 0.0);
    for (int r = 0; r < seq.rows; ++r) add_scaled(out, seq.row(r), 1.0);
    const double inv = 1.0 / static_cast<double>(seq.rows);
    for (double& x : out) x *= inv;
    return out;
}

static Mat pooled_inputs(const std::vector<Mat>& seqs) {
    Mat pooled(static_cast<int>(seqs.size()), seqs.front().cols);
    for (int i = 0; i < pooled.rows; ++i) pooled.set_row(i, meanpool(seqs[static_cast<size_t>(i)]));
    return pooled;
}

// rows of `pooled` mapped through w then normalized; also returns the
// pre-normalization norms needed by the backward pass
static Mat forward_heads(const Mat& w, const Mat& pooled, Vec& norms) {
    Mat out(pooled.rows, w.rows);
    norms.assign(static_cast<size_t>(pooled.rows), 0.0);
    bool degenerate = false;  // throw only after the parallel region
#pragma omp parallel for schedule(static)
    for (int i = 0; i < pooled.rows; ++i) {
        const Vec u = matvec(w, pooled.row(i));
        const double n = norm2(u);
        if (!(n > k_norm_eps)) {
            degenerate = true;
            continue;
        }
        norms[static_cast<size_t>(i)] = n;
        out.set_row(i, scaled(u, 1.0 / n));
    }
    if (degenerate) throw std::invalid_argument("degenerate norm");
    return out;
}

// dL/dW from dL/dV through the row normalization: for each sample,
// dL/du = (g - (v.g) v) / ||u||, dL/dW += dL/du pooled_i^T
static Mat head_grad(const Mat& w, const Mat& pooled, const Mat& v, const Vec& norms,
                     const Mat& dv) {
    Mat grad(w.rows, w.cols, 0.0);
    for (int i = 0; i < pooled.rows; ++i) {
        const Vec vi = v.row(i);
        const Vec gi = dv.row(i);
        const double proj = dot(vi, gi);
        const double inv_norm = 1.0 / norms[static_cast<size_t>(i)];
        const Vec mi = pooled.row(i);
        for (int r = 0; r < w.rows; ++r) {
            const double du = (gi[static_cast<size_t>(r)] - proj * vi[static_cast<size_t>(r)]) * inv_norm;
            for (int c = 0; c < w.cols; ++c) grad.at(r, c) += du * mi[static_cast<size_t>(c)];
        }
    }
    return grad;
}

static double full_loss(const Mat& w_v, const Mat& w_a, const Mat& pooled_v, const Mat& pooled_a,
                        double tau) {
    Vec nv, na;
    const Mat v = forward_heads(w_v, pooled_v, nv);
    const Mat a = forward_heads(w_a, pooled_a, na);
    return contrastive_loss(v, a, tau);
}

static void debug_check_grads(const Mat& w_v, const Mat& w_a, const Mat& pooled_v,
                              const Mat& pooled_a, double tau, const Mat& grad_v,
                              const Mat& grad_a, SeededRng& rng, int epoch) {
    const double h = 1e-6;
    double scale = 1e-12;
    for (double x : grad_v.data) scale = std::max(scale, std::fabs(x));
    for (double x : grad_a.data) scale = std::max(scale, std::fabs(x));
    for (int side = 0; side < 2; ++side) {
        const Mat& w = side == 0 ? w_v : w_a;
        const Mat& grad = side == 0 ? grad_v : grad_a;
        for (int probe = 0; probe < 16; ++probe) {
            const int idx = rng.uniform_int(static_cast<int>(w.data.size()));
            Mat wp = w;
            wp.data[static_cast<size_t>(idx)] += h;
            const double fp = side == 0 ? full_loss(wp, w_a, pooled_v, pooled_a, tau)
                                        : full_loss(w_v, wp, pooled_v, pooled_a, tau);
            wp.data[static_cast<size_t>(idx)] -= 2.0 * h;
            const double fm = side == 0 ? full_loss(wp, w_a, pooled_v, pooled_a, tau)
                                        : full_loss(w_v, wp, pooled_v, pooled_a, tau);
            const double fd = (fp - fm) / (2.0 * h);
            const double analytic = grad.data[static_cast<size_t>(idx)];
            if (std::fabs(fd - analytic) > 1e-4 * std::max(scale, 1e-6))
                throw std::runtime_error("gradient check failed at epoch " + std::to_string(epoch));
        }
    }
}

AlignTrainResult train_alignment(const OmniBatch& batch, const AlignTrainConfig& cfg,
                                 const AlignTrainOptions& opt) {
    batch.validate();
    cfg.validate();
    if (batch.k() < 2) throw std::invalid_argument("training needs K >= 2");

    const int in_dim = batch.dim();
    const Mat pooled_v = pooled_inputs(batch.vision_seqs);
    const Mat pooled_a = pooled_inputs(batch.audio_seqs);

    SeededRng rng(opt.seed);
    AlignTrainResult result;
    result.heads.tau = cfg.tau;
    result.heads.w_v = Mat(in_dim, in_dim);
    result.heads.w_a = Mat(in_dim, in_dim);
    for (double& w : result.heads.w_v.data) w = cfg.init_scale * rng.normal();
    for (double& w : result.heads.w_a.data) w = cfg.init_scale * rng.normal();
    double log_tau = std::log(cfg.tau);
    SeededRng check_rng = rng.clone_with_offset(0xC0FFEE);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        Vec norms_v, norms_a;
        const Mat v = forward_heads(result.heads.w_v, pooled_v, norms_v);
        const Mat a = forward_heads(result.heads.w_a, pooled_a, norms_a);
        const double tau = std::exp(log_tau);
        const double loss = contrastive_loss(v, a, tau);
        if (!std::isfinite(loss))
            throw std::runtime_error("divergence at epoch " + std::to_string(epoch));

        const RetrievalAccuracy acc = retrieval_accuracy(v, a);
        result.curve.push_back({epoch, loss, acc.v_to_a_top1, acc.a_to_v_top1});

        const ContrastiveGrad grad = contrastive_loss_grad(v, a, tau);
        const Mat grad_wv = head_grad(result.heads.w_v, pooled_v, v, norms_v, grad.dv);
        const Mat grad_wa = head_grad(result.heads.w_a, pooled_a, a, norms_a, grad.da);
        if (opt.debug_grad_check)
            debug_check_grads(result.heads.w_v, result.heads.w_a, pooled_v, pooled_a, tau,
                              grad_wv, grad_wa, check_rng, epoch);

        for (size_t i = 0; i < result.heads.w_v.data.size(); ++i)
            result.heads.w_v.data[i] -= cfg.learning_rate * grad_wv.data[i];
        for (size_t i = 0; i < result.heads.w_a.data.size(); ++i)
            result.heads.w_a.data[i] -= cfg.learning_rate * grad_wa.data[i];
        if (opt.learn_tau) {
            log_tau -= cfg.learning_rate * contrastive_loss_log_tau_grad(v, a, tau);
            result.heads.tau = std::exp(log_tau);
        }
    }
    return result;
}

OmniEmbeddings apply_linear_heads(const OmniBatch& batch, const LinearHeads& heads) {
    batch.validate();
    const Mat pooled_v = pooled_inputs(batch.vision_seqs);
    const Mat pooled_a = pooled_inputs(batch.audio_seqs);
    Vec nv, na;
    OmniEmbeddings out;
    out.v = forward_heads(heads.w_v, pooled_v, nv);
    out.a = forward_heads(heads.w_a, pooled_a, na);
    return out;
}

RetrievalAccuracy eval_retrieval(const OmniBatch& batch, const LinearHeads& heads) {
    const OmniEmbeddings emb = apply_linear_heads(batch, heads);
    return retrieval_accuracy(emb.v, emb.a);
}

// Gaussian elimination with partial pivoting; a is square and small
static Mat solve_linear(Mat a, Mat b) {
    const int n = a.rows;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a.at(r, col)) > std::fabs(a.at(pivot, col))) pivot = r;
        if (std::fabs(a.at(pivot, col)) < 1e-14)
            throw std::runtime_error("singular system in pseudo_inverse_head");
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(a.at(pivot, c), a.at(col, c));
            for (int c = 0; c < b.cols; ++c) std::swap(b.at(pivot, c), b.at(col, c));
        }
        const double inv = 1.0 / a.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double f = a.at(r, col) * inv;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a.at(r, c) -= f * a.at(col, c);
            for (int c = 0; c < b.cols; ++c) b.at(r, c) -= f * b.at(col, c);
        }
    }
    Mat x(n, b.cols);
    for (int r = n - 1; r >= 0; --r) {
        for (int c = 0; c < b.cols; ++c) {
            double s = b.at(r, c);
            for (int k = r + 1; k < n; ++k) s -= a.at(r, k) * x.at(k, c);
            x.at(r, c) = s / a.at(r, r);
        }
    }
    return x;
}

Mat pseudo_inverse_head(const Mat& projection) {
    // (P^T P)^{-1} P^T, latent_dim x c
    const Mat pt = transpose(projection);
    const Mat gram = matmul(pt, projection);
    return solve_linear(gram, pt);
}

}  // namespace omni
