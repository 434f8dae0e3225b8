#include "omni/alignnet.hpp"

#include <cmath>
#include <stdexcept>

namespace omni {

void OmniBatch::validate() const {
    if (vision_seqs.empty() || vision_seqs.size() != audio_seqs.size())
        throw std::invalid_argument("batch must hold K >= 1 paired sequences");
    const int c = dim();
    for (const auto* seqs : {&vision_seqs, &audio_seqs}) {
        for (const Mat& seq : *seqs) {
            if (seq.rows < 1) throw std::invalid_argument("empty sequence in batch");
            if (seq.cols != c) throw std::invalid_argument("mixed embedding dimensions in batch");
        }
    }
}

static Mat gaussian_mat(int rows, int cols, SeededRng& rng, double scale) {
    Mat m(rows, cols);
    for (double& w : m.data) w = scale * rng.normal();
    return m;
}

AlignHeadParams init_align_head(int dim, SeededRng& rng, double init_scale) {
    AlignHeadParams params;
    params.init_scale = init_scale;
    params.q_v.resize(static_cast<size_t>(dim));
    params.q_a.resize(static_cast<size_t>(dim));
    for (double& w : params.q_v) w = init_scale * rng.normal();
    for (double& w : params.q_a) w = init_scale * rng.normal();
    for (AttentionBlock& block : params.blocks) {
        block.w_q = gaussian_mat(dim, dim, rng, init_scale);
        block.w_k = gaussian_mat(dim, dim, rng, init_scale);
        block.w_v = gaussian_mat(dim, dim, rng, init_scale);
        block.w_o = gaussian_mat(dim, dim, rng, init_scale);
        block.ffn_up = gaussian_mat(4 * dim, dim, rng, init_scale);
        block.ffn_down = gaussian_mat(dim, 4 * dim, rng, init_scale);
    }
    return params;
}

Vec project_with_query(const Mat& seq, const Vec& q) {
    if (seq.rows < 1) throw std::invalid_argument("empty sequence");
    if (static_cast<size_t>(seq.cols) != q.size())
        throw std::invalid_argument("query dimension mismatch");
    const double scale = 1.0 / std::sqrt(static_cast<double>(seq.cols));
    Vec logits(static_cast<size_t>(seq.rows));
    for (int r = 0; r < seq.rows; ++r) logits[static_cast<size_t>(r)] = scale * dot(q, seq.row(r));
    const Vec weights = softmax(logits);
    Vec out(static_cast<size_t>(seq.cols), 0.0);
    for (int r = 0; r < seq.rows; ++r) add_scaled(out, seq.row(r), weights[static_cast<size_t>(r)]);
    return out;
}

static inline double gelu(double x) {
    return 0.5 * x * (1.0 + std::erf(x * 0.70710678118654752440));
}

Vec attention_block_forward(const Vec& x, const AttentionBlock& block) {
    // attention over a single token: softmax of one logit is 1, so the
    // attended value is just W_v x
    Vec y = x;
    add_scaled(y, matvec(block.w_o, matvec(block.w_v, x)), 1.0);
    Vec hidden = matvec(block.ffn_up, y);
    for (double& h : hidden) h = gelu(h);
    Vec z = y;
    add_scaled(z, matvec(block.ffn_down, hidden), 1.0);
    return z;
}

static Vec head_forward(const Mat& seq, const Vec& q, const AlignHeadParams& params) {
    Vec x = project_with_query(seq, q);
    for (const AttentionBlock& block : params.blocks) x = attention_block_forward(x, block);
    return l2_normalize(x);
}

static OmniEmbeddings compute_omni_embeddings_impl(const OmniBatch& batch,
                                                   const AlignHeadParams& params, bool parallel) {
    batch.validate();
    const int k = batch.k();
    const int c = batch.dim();
    if (params.q_v.size() != static_cast<size_t>(c) || params.q_a.size() != static_cast<size_t>(c))
        throw std::invalid_argument("query dimension mismatch");
    OmniEmbeddings out{Mat(k, c), Mat(k, c)};
    // exceptions must not escape the parallel region; remember the first one
    std::exception_ptr error = nullptr;
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < k; ++i) {
        try {
            out.v.set_row(i,
                          head_forward(batch.vision_seqs[static_cast<size_t>(i)], params.q_v, params));
            out.a.set_row(i,
                          head_forward(batch.audio_seqs[static_cast<size_t>(i)], params.q_a, params));
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return out;
}

OmniEmbeddings compute_omni_embeddings(const OmniBatch& batch, const AlignHeadParams& params) {
    return compute_omni_embeddings_impl(batch, params, true);
}

OmniEmbeddings compute_omni_embeddings_serial(const OmniBatch& batch,
                                              const AlignHeadParams& params) {
    return compute_omni_embeddings_impl(batch, params, false);
}

static void check_loss_args(const Mat& v, const Mat& a, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("temperature must be positive");
    if (v.rows != a.rows || v.cols != a.cols || v.rows < 1)
        throw std::invalid_argument("embedding shape mismatch");
}

static Mat similarity(const Mat& v, const Mat& a, double tau) {
    Mat s = matmul(v, transpose(a));
    for (double& x : s.data) x /= tau;
    return s;
}

static double loss_impl(const Mat& v, const Mat& a, double tau, bool parallel) {
    check_loss_args(v, a, tau);
    const Mat s = similarity(v, a, tau);
    const Mat st = transpose(s);
    const int k = v.rows;
    Vec per_row(static_cast<size_t>(k), 0.0);
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < k; ++i) {
        const Vec p = softmax(s.row(i));
        const Vec q = softmax(st.row(i));
        per_row[static_cast<size_t>(i)] =
            -std::log(p[static_cast<size_t>(i)]) - std::log(q[static_cast<size_t>(i)]);
    }
    double total = 0.0;
    for (double x : per_row) total += x;  // fixed-order reduction
    return total / (2.0 * static_cast<double>(k));
}

double contrastive_loss(const Mat& v, const Mat& a, double tau) {
    return loss_impl(v, a, tau, true);
}

double contrastive_loss_serial(const Mat& v, const Mat& a, double tau) {
    return loss_impl(v, a, tau, false);
}

static ContrastiveGrad grad_impl(const Mat& v, const Mat& a, double tau, bool parallel) {
    check_loss_args(v, a, tau);
    const Mat s = similarity(v, a, tau);
    const Mat st = transpose(s);
    const int k = v.rows;

    // dL/ds = (P + Q - 2I) / (2K) with P row-softmax, Q column-softmax of s.
    // Row pass writes P - 2I, column pass adds Q; each pass owns disjoint
    // cells per thread.
    Mat dls(k, k);
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < k; ++i) {
        const Vec p = softmax(s.row(i));
        for (int j = 0; j < k; ++j) dls.at(i, j) = p[static_cast<size_t>(j)] - (i == j ? 2.0 : 0.0);
    }
#pragma omp parallel for schedule(static) if (parallel)
    for (int j = 0; j < k; ++j) {
        const Vec qcol = softmax(st.row(j));
        for (int i = 0; i < k; ++i) dls.at(i, j) += qcol[static_cast<size_t>(i)];
    }
    const double norm = 1.0 / (2.0 * static_cast<double>(k));
    for (double& x : dls.data) x *= norm;

    ContrastiveGrad grad;
    grad.dv = matmul(dls, a);
    grad.da = matmul(transpose(dls), v);
    const double inv_tau = 1.0 / tau;
    for (double& x : grad.dv.data) x *= inv_tau;
    for (double& x : grad.da.data) x *= inv_tau;
    return grad;
}

ContrastiveGrad contrastive_loss_grad(const Mat& v, const Mat& a, double tau) {
    return grad_impl(v, a, tau, true);
}

ContrastiveGrad contrastive_loss_grad_serial(const Mat& v, const Mat& a, double tau) {
    return grad_impl(v, a, tau, false);
}

double contrastive_loss_log_tau_grad(const Mat& v, const Mat& a, double tau) {
    check_loss_args(v, a, tau);
    const Mat s = similarity(v, a, tau);
    const Mat st = transpose(s);
    const int k = v.rows;
    // dL/d(log tau) = -sum_ij (dL/ds_ij) s_ij, same two-pass dL/ds as grad_impl
    Mat dls(k, k);
    for (int i = 0; i < k; ++i) {
        const Vec p = softmax(s.row(i));
        for (int j = 0; j < k; ++j) dls.at(i, j) = p[static_cast<size_t>(j)] - (i == j ? 2.0 : 0.0);
    }
    for (int j = 0; j < k; ++j) {
        const Vec qcol = softmax(st.row(j));
        for (int i = 0; i < k; ++i) dls.at(i, j) += qcol[static_cast<size_t>(i)];
    }
    double g = 0.0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) g += dls.at(i, j) * s.at(i, j);
    return -g / (2.0 * static_cast<double>(k));
}

RetrievalAccuracy retrieval_accuracy(const Mat& v, const Mat& a) {
    if (v.rows != a.rows || v.cols != a.cols || v.rows < 1)
        throw std::invalid_argument("embedding shape mismatch");
    const Mat s = matmul(v, transpose(a));
    const int k = v.rows;
    int hit_va = 0;
    int hit_av = 0;
    for (int i = 0; i < k; ++i) {
        int best = 0;
        for (int j = 1; j < k; ++j)
            if (s.at(i, j) > s.at(i, best)) best = j;
        if (best == i) ++hit_va;
    }
    for (int j = 0; j < k; ++j) {
        int best = 0;
        for (int i = 1; i < k; ++i)
            if (s.at(i, j) > s.at(best, j)) best = i;
        if (best == j) ++hit_av;
    }
    RetrievalAccuracy acc;
    acc.v_to_a_top1 = static_cast<double>(hit_va) / static_cast<double>(k);
    acc.a_to_v_top1 = static_cast<double>(hit_av) / static_cast<double>(k);
    return acc;
}

}  // namespace omni
