#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace omni {

using Vec = std::vector<double>;

// Dense row-major matrix of doubles.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(int r, int c, double fill = 0.0)
        : rows(r), cols(c), data(static_cast<size_t>(r) * static_cast<size_t>(c), fill) {}

    double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }

    Vec row(int r) const;
    void set_row(int r, const Vec& v);
};

// l2_normalize rejects inputs with norm at or below this
constexpr double k_norm_eps = 1e-12;

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& v);
void add_scaled(Vec& y, const Vec& x, double a);  // y += a*x
Vec scaled(const Vec& x, double a);
bool all_finite(const Vec& v);
bool all_finite(const Mat& m);

/// max-subtracted softmax; throws on empty input
Vec softmax(const Vec& v);

/// unit-norm copy of v; throws "degenerate norm" when ||v|| <= k_norm_eps
Vec l2_normalize(const Vec& v);

Vec matvec(const Mat& m, const Vec& x);    // m * x
Vec matvec_t(const Mat& m, const Vec& x);  // m^T * x

Mat matmul(const Mat& a, const Mat& b);         // OpenMP over output rows
Mat matmul_serial(const Mat& a, const Mat& b);  // reference kernel
Mat transpose(const Mat& m);

/// central differences (f(x+h e_i) - f(x-h e_i)) / 2h per coordinate;
/// throws if f evaluates non-finite, naming the coordinate
Vec finite_diff_grad(const std::function<double(const Vec&)>& f, const Vec& x, double h);

}  // namespace omni
