#include "omni/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace omni {

Vec Mat::row(int r) const {
    return Vec(data.begin() + static_cast<size_t>(r) * cols,
               data.begin() + static_cast<size_t>(r + 1) * cols);
}

void Mat::set_row(int r, const Vec& v) {
    std::copy(v.begin(), v.end(), data.begin() + static_cast<size_t>(r) * cols);
}

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

void add_scaled(Vec& y, const Vec& x, double a) {
    for (size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

Vec scaled(const Vec& x, double a) {
    Vec y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] = a * x[i];
    return y;
}

bool all_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

bool all_finite(const Mat& m) {
    for (double x : m.data)
        if (!std::isfinite(x)) return false;
    return true;
}

Vec softmax(const Vec& v) {
    if (v.empty()) throw std::invalid_argument("empty input");
    const double m = *std::max_element(v.begin(), v.end());
    Vec out(v.size());
    double sum = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        out[i] = std::exp(v[i] - m);
        sum += out[i];
    }
    for (double& x : out) x /= sum;
    return out;
}

Vec l2_normalize(const Vec& v) {
    const double n = norm2(v);
    if (!(n > k_norm_eps)) throw std::invalid_argument("degenerate norm");
    return scaled(v, 1.0 / n);
}

Vec matvec(const Mat& m, const Vec& x) {
    Vec y(static_cast<size_t>(m.rows), 0.0);
    for (int r = 0; r < m.rows; ++r) {
        double s = 0.0;
        const double* row = m.data.data() + static_cast<size_t>(r) * m.cols;
        for (int c = 0; c < m.cols; ++c) s += row[c] * x[c];
        y[r] = s;
    }
    return y;
}

Vec matvec_t(const Mat& m, const Vec& x) {
    Vec y(static_cast<size_t>(m.cols), 0.0);
    for (int r = 0; r < m.rows; ++r) {
        const double* row = m.data.data() + static_cast<size_t>(r) * m.cols;
        for (int c = 0; c < m.cols; ++c) y[c] += row[c] * x[r];
    }
    return y;
}

static inline double row_col_dot(const Mat& a, const Mat& b, int r, int c) {
    double s = 0.0;
    const double* ar = a.data.data() + static_cast<size_t>(r) * a.cols;
    for (int k = 0; k < a.cols; ++k) s += ar[k] * b.at(k, c);
    return s;
}

Mat matmul_serial(const Mat& a, const Mat& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul dimension mismatch");
    Mat out(a.rows, b.cols);
    for (int r = 0; r < a.rows; ++r)
        for (int c = 0; c < b.cols; ++c) out.at(r, c) = row_col_dot(a, b, r, c);
    return out;
}

Mat matmul(const Mat& a, const Mat& b) {
    if (a.cols != b.rows) throw std::invalid_argument("matmul dimension mismatch");
    Mat out(a.rows, b.cols);
#pragma omp parallel for schedule(static)
    for (int r = 0; r < a.rows; ++r)
        for (int c = 0; c < b.cols; ++c) out.at(r, c) = row_col_dot(a, b, r, c);
    return out;
}

Mat transpose(const Mat& m) {
    Mat out(m.cols, m.rows);
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c) out.at(c, r) = m.at(r, c);
    return out;
}

Vec finite_diff_grad(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("step size must be positive");
    Vec g(x.size());
    Vec xp = x;
    for (size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        xp[i] = xi + h;
        const double fp = f(xp);
        xp[i] = xi - h;
        const double fm = f(xp);
        xp[i] = xi;
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw std::runtime_error("non-finite function value at coordinate " + std::to_string(i));
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

}  // namespace omni
