#pragma once

// Middle-thirds Cantor approximations on [-1.5, 1.5] as slit collections, and
// the harmonic measures of their slits seen from a source at the origin.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "laplace/basis.hpp"
#include "laplace/lsq.hpp"
#include "laplace/solver.hpp"

namespace laplace {

struct CantorLevel {
    int m = 0;
    std::vector<BoundaryComponent> slits;  // ordered left to right
};

/// The 2^m intervals left after m middle-third removals from [-1.5, 1.5].
inline CantorLevel cantor_components(int m) {
    if (m < 1 || m > 12) throw ArgumentError("cantor_components: m must be in 1..12");
    // Integer endpoints in units of 3^(1-m)/2, so [-1.5, 1.5] = [-3^m, 3^m].
    std::int64_t len = 1;
    for (int i = 0; i < m; ++i) len *= 3;
    std::vector<std::int64_t> left{-len};
    std::int64_t piece = 2 * len;
    for (int level = 0; level < m; ++level) {
        piece /= 3;
        std::vector<std::int64_t> next;
        next.reserve(left.size() * 2);
        for (auto l : left) {
            next.push_back(l);
            next.push_back(l + 2 * piece);
        }
        left = std::move(next);
    }
    // each piece is now 2 units long
    const double unit_den = static_cast<double>(2 * (len / 3));  // 1/unit = 2 * 3^(m-1)
    CantorLevel out{m, {}};
    out.slits.reserve(left.size());
    for (auto l : left)
        out.slits.push_back(BoundaryComponent::slit(static_cast<double>(l + 1) / unit_den, 1.0 / unit_den));
    return out;
}

/// Degree schedule N = max(2, 6 - m).
inline int cantor_degree(int m) { return std::max(2, 6 - m); }

namespace detail {

/// Exploits u(conj z) = u(z) and u(-z) = u(z): sine terms vanish, the mirror
/// slits j and j' share d and a_k up to the sign (-1)^k, and only the upper side
/// of the right-half slits is sampled. The sample set is the upper half of the
/// full solver's set, so the minimizer coincides with the general path.
inline Expansion cantor_symmetric_expansion(const CantorLevel& level, int degree, int npts) {
    const auto& slits = level.slits;
    const std::size_t J = slits.size();
    const std::size_t P = J / 2;  // pairs; right slit P + p mirrors left slit P - 1 - p
    const std::size_t N = static_cast<std::size_t>(degree);
    const std::size_t ncols = 1 + P + P * N;
    const int half = npts / 2;

    const std::size_t nrows = P * static_cast<std::size_t>(half) + 1;
    Matrix a(nrows, ncols);
    std::vector<double> rhs(nrows, 0.0);
    std::size_t row = 0;
    for (std::size_t p = 0; p < P; ++p) {
        const auto& right = slits[P + p];
        for (int k = 0; k < half; ++k) {
            const Point w = std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.5) / npts);
            const Point z = joukowski_forward(right.center, right.halfspan, w);
            a(row, 0) = 1.0;
            for (std::size_t q = 0; q < P; ++q) {
                const auto& rq = slits[P + q];
                const auto& lq = slits[P - 1 - q];
                const Point wr = q == p ? w : joukowski_inverse(rq.center, rq.halfspan, z);
                const Point wl = joukowski_inverse(lq.center, lq.halfspan, z);
                a(row, 1 + q) = std::log(std::abs(wr)) + std::log(std::abs(wl));
                const Point ir = 1.0 / wr, il = 1.0 / wl;
                Point pr = ir, pl = il;
                double sign = -1.0;
                for (std::size_t kk = 0; kk < N; ++kk) {
                    a(row, 1 + P + q * N + kk) = pr.real() + sign * pl.real();
                    pr *= ir;
                    pl *= il;
                    sign = -sign;
                }
            }
            rhs[row] = -std::log(std::abs(z));
            ++row;
        }
    }
    // Full-problem constraint row scaled by 1/2 (the reduced objective is a
    // quarter of the full one): weight sqrt(total) / 2 on sum 2 D_p = -1.
    const double weight = std::sqrt(static_cast<double>(J) * npts) / 2.0;
    for (std::size_t q = 0; q < P; ++q) a(row, 1 + q) = 2.0 * weight;
    rhs[row] = -weight;

    const auto x = solve_constrained_least_squares(a, rhs, row).x;

    ExpansionSpec spec;
    spec.degrees.assign(J, degree);
    Expansion e;
    e.components = slits;
    e.source = Point{};
    e.spec = spec;
    e.source_strength = 1.0;
    e.constant = x[0];
    e.log_coeffs.assign(J, 0.0);
    e.cos_coeffs.assign(J, std::vector<double>(N, 0.0));
    e.sin_coeffs.assign(J, std::vector<double>(N, 0.0));
    for (std::size_t q = 0; q < P; ++q) {
        e.log_coeffs[P + q] = e.log_coeffs[P - 1 - q] = x[1 + q];
        double sign = -1.0;
        for (std::size_t kk = 0; kk < N; ++kk) {
            const double c = x[1 + P + q * N + kk];
            e.cos_coeffs[P + q][kk] = c;
            e.cos_coeffs[P - 1 - q][kk] = sign * c;
            sign = -sign;
        }
    }
    return e;
}

}  // namespace detail

/// Green problem for level m with a unit source at the origin, solved with the
/// N = max(2, 6 - m) schedule.
inline Solution cantor_solve(int m, bool use_symmetry) {
    const auto level = cantor_components(m);
    const int degree = cantor_degree(m);
    auto problem = Problem::green(level.slits, Point{});
    const auto spec = ExpansionSpec::uniform(problem.components(), degree);
    auto npts = default_npts(problem, spec);
    if (!use_symmetry) return solve_problem(problem, spec, npts);

    auto expansion = detail::cantor_symmetric_expansion(level, degree, npts.front());
    // Certificate on the upper side of the right half only; symmetry covers the rest.
    double residual = 0.0;
    const std::size_t P = level.slits.size() / 2;
    const int nfine = 4 * npts.front();
    for (std::size_t j = P; j < level.slits.size(); ++j)
        for (const auto& s : sample_boundary(level.slits[j], nfine, j, 0.5)) {
            if (s.preimage.imag() < 0.0) continue;
            residual = std::max(residual, std::abs(eval_expansion(expansion, s.point, OnComponent{j, s.preimage})));
        }
    FitReport report;
    report.rows = P * static_cast<std::size_t>(npts.front() / 2) + 1;
    report.cols = 1 + P + P * static_cast<std::size_t>(degree);
    report.rank = report.cols;
    report.npts = std::move(npts);
    report.degrees = spec.degrees;
    return Solution{std::move(problem), std::move(expansion), residual, std::move(report)};
}

/// Harmonic measures of the right-half-plane slits, ordered from the origin outward.
inline std::vector<double> cantor_measures(int m, bool use_symmetry) {
    const auto solution = cantor_solve(m, use_symmetry);
    const auto report = harmonic_measures(solution);
    const std::size_t half = report.measures.size() / 2;
    return {report.measures.begin() + static_cast<std::ptrdiff_t>(half), report.measures.end()};
}

/// Total measure of the inner half of the right-half slits.
inline double cantor_inner_half_sum(int m, bool use_symmetry = true) {
    if (m < 2) throw ArgumentError("cantor_inner_half_sum: m must be at least 2");
    const auto measures = cantor_measures(m, use_symmetry);
    double sum = 0.0;
    for (std::size_t i = 0; i < measures.size() / 2; ++i) sum += measures[i];
    return sum;
}

}  // namespace laplace
