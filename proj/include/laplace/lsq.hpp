#pragma once

// Dense least squares by Householder QR with column pivoting.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "laplace/errors.hpp"

namespace laplace {

/// Column-major dense matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[j * rows_ + i]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[j * rows_ + i]; }

    std::span<double> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
    std::span<const double> col(std::size_t j) const noexcept { return {data_.data() + j * rows_, rows_}; }

    std::vector<double> multiply(std::span<const double> x) const {
        std::vector<double> y(rows_, 0.0);
        for (std::size_t j = 0; j < cols_; ++j) {
            const double xj = x[j];
            if (xj == 0.0) continue;
            const auto c = col(j);
            for (std::size_t i = 0; i < rows_; ++i) y[i] += c[i] * xj;
        }
        return y;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct LeastSquaresResult {
    std::vector<double> x;
    std::size_t rank = 0;
};

/// Pivots with |R_kk| <= kRankTolerance * |R_00| are treated as zero.
inline constexpr double kRankTolerance = 1e-13;

/// Minimizes ||A x - b||_2. Rank-deficient systems get the basic solution of
/// the pivoted factorization (truncated columns set to zero).
inline LeastSquaresResult solve_least_squares_ranked(Matrix a, std::vector<double> b) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (b.size() != m) throw ArgumentError("least squares: rhs length does not match the row count");
    if (m < n) throw ArgumentError("least squares: fewer rows than columns");
    for (std::size_t j = 0; j < n; ++j)
        for (double v : a.col(j))
            if (!std::isfinite(v)) throw ArgumentError("least squares: non-finite matrix entry");
    for (double v : b)
        if (!std::isfinite(v)) throw ArgumentError("least squares: non-finite rhs entry");

    auto norm2 = [](std::span<const double> v) {
        // scaled accumulation so huge or tiny columns do not over/underflow
        double scale = 0.0, ssq = 1.0;
        for (double x : v) {
            if (x == 0.0) continue;
            const double ax = std::abs(x);
            if (scale < ax) {
                ssq = 1.0 + ssq * (scale / ax) * (scale / ax);
                scale = ax;
            } else {
                ssq += (ax / scale) * (ax / scale);
            }
        }
        return scale * std::sqrt(ssq);
    };

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<double> norms(n), norms_ref(n), diag(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) norms[j] = norms_ref[j] = norm2(a.col(j));

    const double tol3z = std::sqrt(std::numeric_limits<double>::epsilon());
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t p = k + static_cast<std::size_t>(
            std::max_element(norms.begin() + static_cast<std::ptrdiff_t>(k), norms.end()) - norms.begin() -
            static_cast<std::ptrdiff_t>(k));
        if (p != k) {
            std::swap_ranges(a.col(k).begin(), a.col(k).end(), a.col(p).begin());
            std::swap(perm[k], perm[p]);
            std::swap(norms[k], norms[p]);
            std::swap(norms_ref[k], norms_ref[p]);
        }

        auto ck = a.col(k);
        const double xnorm = norm2(ck.subspan(k));
        if (xnorm == 0.0) {
            diag[k] = 0.0;
            continue;
        }
        const double x0 = ck[k];
        const double beta = x0 >= 0.0 ? -xnorm : xnorm;
        const double tau = (beta - x0) / beta;
        const double scal = 1.0 / (x0 - beta);
        for (std::size_t i = k + 1; i < m; ++i) ck[i] *= scal;
        ck[k] = 1.0;  // v, with implicit leading one
        diag[k] = beta;

        auto apply = [&](std::span<double> y) {
            double s = 0.0;
            for (std::size_t i = k; i < m; ++i) s += ck[i] * y[i];
            s *= tau;
            for (std::size_t i = k; i < m; ++i) y[i] -= s * ck[i];
        };
        for (std::size_t j = k + 1; j < n; ++j) apply(a.col(j));
        apply(b);
        ck[k] = beta;

        for (std::size_t j = k + 1; j < n; ++j) {
            if (norms[j] == 0.0) continue;
            double t = std::abs(a(k, j)) / norms[j];
            t = std::max(0.0, (1.0 + t) * (1.0 - t));
            const double t2 = t * (norms[j] / norms_ref[j]) * (norms[j] / norms_ref[j]);
            if (t2 <= tol3z) {
                norms[j] = k + 1 < m ? norm2(a.col(j).subspan(k + 1)) : 0.0;
                norms_ref[j] = norms[j];
            } else {
                norms[j] *= std::sqrt(t);
            }
        }
    }

    std::size_t rank = 0;
    const double lead = n > 0 ? std::abs(diag[0]) : 0.0;
    while (rank < n && std::abs(diag[rank]) > kRankTolerance * lead) ++rank;

    std::vector<double> y(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(rank));
    for (std::size_t ii = rank; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t j = ii + 1; j < rank; ++j) s -= a(ii, j) * y[j];
        y[ii] = s / diag[ii];
    }
    LeastSquaresResult out;
    out.x.assign(n, 0.0);
    for (std::size_t i = 0; i < rank; ++i) out.x[perm[i]] = y[i];
    out.rank = rank;
    return out;
}

inline std::vector<double> solve_least_squares(Matrix a, std::vector<double> b) {
    return solve_least_squares_ranked(std::move(a), std::move(b)).x;
}

/// Least squares over all rows except `constraint_row`, which is satisfied
/// exactly: the unknown with the largest constraint coefficient is eliminated,
/// the reduced problem is solved, and the eliminated unknown is recovered.
/// An all-zero constraint row is treated as an ordinary row.
inline LeastSquaresResult solve_constrained_least_squares(const Matrix& a, const std::vector<double>& b,
                                                          std::size_t constraint_row) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (b.size() != m) throw ArgumentError("least squares: rhs length does not match the row count");
    if (constraint_row >= m) throw ArgumentError("least squares: constraint row out of range");
    if (m < n) throw ArgumentError("least squares: fewer rows than columns");

    std::size_t p = 0;
    for (std::size_t j = 1; j < n; ++j)
        if (std::abs(a(constraint_row, j)) > std::abs(a(constraint_row, p))) p = j;
    if (n == 0 || a(constraint_row, p) == 0.0) return solve_least_squares_ranked(a, b);

    const double cp = a(constraint_row, p);
    const double t = b[constraint_row];
    Matrix reduced(m - 1, n - 1);
    std::vector<double> rhs(m - 1);
    for (std::size_t i = 0, r = 0; i < m; ++i) {
        if (i == constraint_row) continue;
        const double f = a(i, p) / cp;
        for (std::size_t j = 0, c = 0; j < n; ++j) {
            if (j == p) continue;
            reduced(r, c++) = a(i, j) - f * a(constraint_row, j);
        }
        rhs[r++] = b[i] - f * t;
    }
    auto sub = solve_least_squares_ranked(std::move(reduced), std::move(rhs));

    LeastSquaresResult out;
    out.x.assign(n, 0.0);
    double acc = t;
    for (std::size_t j = 0, c = 0; j < n; ++j) {
        if (j == p) continue;
        out.x[j] = sub.x[c++];
        acc -= a(constraint_row, j) * out.x[j];
    }
    out.x[p] = acc / cp;
    out.rank = sub.rank + 1;
    return out;
}

}  // namespace laplace
