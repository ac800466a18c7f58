#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "laplace/lsq.hpp"

using namespace laplace;

namespace {

Matrix random_matrix(std::size_t m, std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Matrix a(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = g(rng);
    return a;
}

/// Dense Gaussian elimination with partial pivoting; test oracle only.
std::vector<double> gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
        std::swap(a[k], a[p]);
        std::swap(b[k], b[p]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

/// Normal equations A^T A x = A^T b, optionally bordered by one equality constraint.
std::vector<double> normal_equations(const Matrix& a, const std::vector<double>& b, const std::vector<double>* c = nullptr,
                                     double t = 0.0) {
    const std::size_t n = a.cols(), k = n + (c ? 1 : 0);
    std::vector<std::vector<double>> m(k, std::vector<double>(k, 0.0));
    std::vector<double> rhs(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t r = 0; r < a.rows(); ++r) m[i][j] += a(r, i) * a(r, j);
        for (std::size_t r = 0; r < a.rows(); ++r) rhs[i] += a(r, i) * b[r];
    }
    if (c) {
        for (std::size_t j = 0; j < n; ++j) m[n][j] = m[j][n] = (*c)[j];
        rhs[n] = t;
    }
    auto x = gauss_solve(m, rhs);
    x.resize(n);
    return x;
}

double residual_norm(const Matrix& a, const std::vector<double>& x, const std::vector<double>& b) {
    const auto ax = a.multiply(x);
    double s = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) s += (ax[i] - b[i]) * (ax[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace

TEST(LeastSquares, SquareSystem) {
    Matrix a(2, 2);
    a(0, 0) = 2, a(0, 1) = 1, a(1, 0) = 1, a(1, 1) = 3;
    const auto x = solve_least_squares(a, {3, 5});
    EXPECT_NEAR(x[0], 0.8, 1e-14);
    EXPECT_NEAR(x[1], 1.4, 1e-14);
}

TEST(LeastSquares, ConsistentDuplicateRows) {
    Matrix a(4, 2);
    const double rows[4][2] = {{1, 2}, {3, -1}, {1, 2}, {3, -1}};
    for (int i = 0; i < 4; ++i) a(i, 0) = rows[i][0], a(i, 1) = rows[i][1];
    const auto x = solve_least_squares(a, {5, 1, 5, 1});
    EXPECT_NEAR(x[0], 1.0, 1e-14);
    EXPECT_NEAR(x[1], 2.0, 1e-14);
}

TEST(LeastSquares, DuplicatedColumnMatchesReducedProblem) {
    const Matrix base = random_matrix(30, 4, 1);
    Matrix dup(30, 5);
    for (std::size_t i = 0; i < 30; ++i) {
        for (std::size_t j = 0; j < 4; ++j) dup(i, j) = base(i, j);
        dup(i, 4) = base(i, 2);
    }
    std::vector<double> b(30);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    for (auto& v : b) v = g(rng);
    const auto full = solve_least_squares_ranked(dup, b);
    const auto reduced = solve_least_squares(base, b);
    EXPECT_EQ(full.rank, 4u);
    for (double v : full.x) EXPECT_TRUE(std::isfinite(v));
    EXPECT_NEAR(residual_norm(dup, full.x, b), residual_norm(base, reduced, b), 1e-10);
}

TEST(LeastSquares, MatchesNormalEquations) {
    const Matrix a = random_matrix(40, 7, 3);
    std::vector<double> b(40);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::sin(1.0 + i);
    const auto x = solve_least_squares(a, b);
    const auto ref = normal_equations(a, b);
    for (std::size_t j = 0; j < x.size(); ++j) EXPECT_NEAR(x[j], ref[j], 1e-11);
}

TEST(LeastSquares, BadlyScaledColumns) {
    Matrix a = random_matrix(25, 4, 4);
    for (std::size_t i = 0; i < 25; ++i) a(i, 3) *= 1e4, a(i, 1) *= 1e-3;
    std::vector<double> xt{1.0, -2.0, 0.5, 3e-4};
    const auto b = a.multiply(xt);
    const auto x = solve_least_squares(a, b);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(x[j], xt[j], 1e-8 * std::abs(xt[j]));
}

TEST(LeastSquares, ColumnBelowRankToleranceIsDropped) {
    Matrix a = random_matrix(25, 4, 4);
    for (std::size_t i = 0; i < 25; ++i) a(i, 3) *= 1e8, a(i, 1) *= 1e-6;
    std::vector<double> xt{1.0, -2.0, 0.5, 3e-8};
    const auto x = solve_least_squares(a, a.multiply(xt));
    EXPECT_EQ(x[1], 0.0);
}

TEST(LeastSquares, RejectsBadInput) {
    EXPECT_THROW(solve_least_squares(Matrix(2, 3), {0, 0}), ArgumentError);
    EXPECT_THROW(solve_least_squares(Matrix(3, 2), {0, 0}), ArgumentError);
    Matrix a(2, 1);
    a(0, 0) = NAN;
    EXPECT_THROW(solve_least_squares(a, {0, 0}), ArgumentError);
}

TEST(ConstrainedLeastSquares, SatisfiesConstraintAndMatchesKkt) {
    Matrix a = random_matrix(31, 6, 5);
    std::vector<double> c{0.0, 2.0, 1.0, 1.0, 0.0, 0.0};
    std::vector<double> b(31);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = std::cos(0.3 * i);
    for (std::size_t j = 0; j < 6; ++j) a(30, j) = c[j];
    b[30] = -1.0;

    const auto res = solve_constrained_least_squares(a, b, 30);
    double s = 0.0;
    for (std::size_t j = 0; j < 6; ++j) s += c[j] * res.x[j];
    EXPECT_NEAR(s, -1.0, 1e-14);
    EXPECT_EQ(res.rank, 6u);

    Matrix rest(30, 6);
    for (std::size_t i = 0; i < 30; ++i)
        for (std::size_t j = 0; j < 6; ++j) rest(i, j) = a(i, j);
    const auto ref = normal_equations(rest, std::vector<double>(b.begin(), b.begin() + 30), &c, -1.0);
    for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(res.x[j], ref[j], 1e-11);
}

TEST(ConstrainedLeastSquares, ZeroConstraintRowIsOrdinary) {
    Matrix a = random_matrix(10, 3, 6);
    for (std::size_t j = 0; j < 3; ++j) a(9, j) = 0.0;
    std::vector<double> b(10, 1.0);
    b[9] = 0.0;
    const auto x = solve_constrained_least_squares(a, b, 9).x;
    const auto ref = solve_least_squares(a, b);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(x[j], ref[j], 1e-14);
}
