#pragma once

// Series terms for multiply connected Laplace problems:
//
//   u(z) = s log|z - z_s| + C + sum_j { d_j L_j(z) + sum_k [a_jk Re(t_j^-k) + b_jk Im(t_j^-k)] }
//          + sum_k [a_0k Re(t_0^k) + b_0k Im(t_0^k)]
//
// with L_j = log|z - c_j| and t_j = (z - c_j)/r_j for inner disks (t_j = z - c_j
// when unscaled), L_j = log|w_j(z)| and t_j = w_j(z) for slits, and t_0 the
// scaled coordinate of the outer disk of a bounded problem.
//
// Column order of a collocation row:
//   [C, d_1..d_J, (a_11, b_11, .., a_1N, b_1N), .., (a_J1, .., b_JN), outer (a_1, b_1, ..)]
// where j runs over inner components in input order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "laplace/geometry.hpp"

namespace laplace {

struct ExpansionSpec {
    std::vector<int> degrees;  // one per component; an outer component's entry must equal outer_degree
    bool scaled = true;
    int outer_degree = 0;

    /// Same degree on every component (and on the outer disk, if any).
    static ExpansionSpec uniform(std::span<const BoundaryComponent> comps, int degree, bool scaled = true) {
        ExpansionSpec spec;
        spec.degrees.assign(comps.size(), degree);
        spec.scaled = scaled;
        for (const auto& c : comps)
            if (c.is_outer()) spec.outer_degree = degree;
        return spec;
    }

    bool operator==(const ExpansionSpec&) const = default;
};

/// Identifies the component a boundary point belongs to together with its
/// unit-circle preimage, so points lying exactly on a slit can be evaluated
/// on the correct side.
struct OnComponent {
    std::size_t index;
    Point preimage;
};

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

/// Column offsets for a given geometry and spec.
struct BasisLayout {
    std::size_t ncols = 0;
    std::size_t n_inner = 0;
    std::vector<std::size_t> log_col;    // per component; npos for the outer disk
    std::vector<std::size_t> power_col;  // per inner component; npos for the outer disk
    std::size_t outer_col = npos;
    std::size_t outer_index = npos;

    BasisLayout() = default;

    BasisLayout(std::span<const BoundaryComponent> comps, const ExpansionSpec& spec) {
        if (spec.degrees.size() != comps.size())
            throw ArgumentError("expansion spec: degrees length must equal the component count");
        if (spec.outer_degree < 0) throw ArgumentError("expansion spec: negative outer degree");
        log_col.assign(comps.size(), npos);
        power_col.assign(comps.size(), npos);
        std::size_t col = 1;
        for (std::size_t j = 0; j < comps.size(); ++j) {
            if (spec.degrees[j] < 0) throw ArgumentError("expansion spec: negative degree");
            if (comps[j].is_outer()) {
                if (outer_index != npos) throw ArgumentError("expansion spec: more than one outer component");
                if (spec.degrees[j] != spec.outer_degree)
                    throw ArgumentError("expansion spec: outer component degree must equal outer_degree");
                outer_index = j;
                continue;
            }
            log_col[j] = col++;
            ++n_inner;
        }
        for (std::size_t j = 0; j < comps.size(); ++j) {
            if (comps[j].is_outer()) continue;
            power_col[j] = col;
            col += 2 * static_cast<std::size_t>(spec.degrees[j]);
        }
        if (outer_index != npos) {
            outer_col = col;
            col += 2 * static_cast<std::size_t>(spec.outer_degree);
        }
        ncols = col;
    }
};

namespace detail {

/// Local coordinate t of component `comp` at z, its derivative dt/dz, and the
/// log term. For slits t = w(z).
struct LocalCoordinate {
    Point t;
    Point dt_dz;
    double log_term;
    Point dlog_dz;  // complex derivative of the analytic function whose real part is log_term
    bool singular = false;  // slit endpoint: values are fine, derivatives are not
};

inline LocalCoordinate local_coordinate(const BoundaryComponent& comp, std::size_t index, Point z, bool scaled,
                                        const std::optional<OnComponent>& on) {
    if (comp.is_slit()) {
        const Point w = (on && on->index == index) ? on->preimage : joukowski_inverse(comp.center, comp.halfspan, z);
        const Point dz_dw = joukowski_derivative(comp.halfspan, w);
        if (dz_dw == Point{}) return {w, Point{}, std::log(std::abs(w)), Point{}, true};
        const Point dw_dz = 1.0 / dz_dw;
        return {w, dw_dz, std::log(std::abs(w)), dw_dz / w};
    }
    const Point dz = z - comp.center;
    if (dz == Point{}) throw DomainError("evaluation at a disk center");
    const bool use_scale = scaled || comp.is_outer();
    const double s = use_scale ? comp.radius : 1.0;
    return {dz / s, Point{1.0 / s, 0.0}, std::log(std::abs(dz)), 1.0 / dz};
}

}  // namespace detail

/// One collocation row (source term excluded).
inline void basis_row(Point z, std::span<const BoundaryComponent> comps, const ExpansionSpec& spec,
                      const BasisLayout& layout, std::span<double> row,
                      const std::optional<OnComponent>& on = std::nullopt) {
    if (row.size() != layout.ncols) throw ArgumentError("basis_row: row has the wrong length");
    std::fill(row.begin(), row.end(), 0.0);
    row[0] = 1.0;
    for (std::size_t j = 0; j < comps.size(); ++j) {
        const auto lc = detail::local_coordinate(comps[j], j, z, spec.scaled, on);
        if (comps[j].is_outer()) {
            Point p = lc.t;
            for (int k = 0; k < spec.outer_degree; ++k) {
                row[layout.outer_col + 2 * k] = p.real();
                row[layout.outer_col + 2 * k + 1] = p.imag();
                p *= lc.t;
            }
            continue;
        }
        row[layout.log_col[j]] = lc.log_term;
        const Point inv = 1.0 / lc.t;
        Point p = inv;
        for (int k = 0; k < spec.degrees[j]; ++k) {
            row[layout.power_col[j] + 2 * k] = p.real();
            row[layout.power_col[j] + 2 * k + 1] = p.imag();
            p *= inv;
        }
    }
}

inline std::vector<double> basis_row(Point z, std::span<const BoundaryComponent> comps, const ExpansionSpec& spec,
                                     const std::optional<OnComponent>& on = std::nullopt) {
    const BasisLayout layout(comps, spec);
    std::vector<double> row(layout.ncols);
    basis_row(z, comps, spec, layout, row, on);
    return row;
}

/// Fitted series. Coefficient vectors are indexed by component; the entries
/// belonging to the outer disk are unused (its terms live in outer_cos/outer_sin).
struct Expansion {
    std::vector<BoundaryComponent> components;
    std::optional<Point> source;
    ExpansionSpec spec;

    double constant = 0.0;
    std::vector<double> log_coeffs;               // d_j, per component (0 for the outer disk)
    std::vector<std::vector<double>> cos_coeffs;  // a_jk, k = 1..N_j
    std::vector<std::vector<double>> sin_coeffs;  // b_jk
    std::vector<double> outer_cos;
    std::vector<double> outer_sin;
    double source_strength = 0.0;

    /// Unpacks a coefficient vector in BasisLayout column order.
    static Expansion from_coefficients(std::vector<BoundaryComponent> comps, std::optional<Point> source,
                                       ExpansionSpec spec, std::span<const double> x) {
        const BasisLayout layout(comps, spec);
        if (x.size() != layout.ncols) throw ArgumentError("coefficient vector has the wrong length");
        Expansion e;
        e.constant = x[0];
        e.log_coeffs.assign(comps.size(), 0.0);
        e.cos_coeffs.resize(comps.size());
        e.sin_coeffs.resize(comps.size());
        for (std::size_t j = 0; j < comps.size(); ++j) {
            if (comps[j].is_outer()) continue;
            e.log_coeffs[j] = x[layout.log_col[j]];
            for (int k = 0; k < spec.degrees[j]; ++k) {
                e.cos_coeffs[j].push_back(x[layout.power_col[j] + 2 * k]);
                e.sin_coeffs[j].push_back(x[layout.power_col[j] + 2 * k + 1]);
            }
        }
        for (int k = 0; k < spec.outer_degree && layout.outer_col != npos; ++k) {
            e.outer_cos.push_back(x[layout.outer_col + 2 * k]);
            e.outer_sin.push_back(x[layout.outer_col + 2 * k + 1]);
        }
        e.source_strength = source ? 1.0 : 0.0;
        e.components = std::move(comps);
        e.source = source;
        e.spec = std::move(spec);
        return e;
    }

    std::vector<double> coefficients() const {
        const BasisLayout layout(components, spec);
        std::vector<double> x(layout.ncols, 0.0);
        x[0] = constant;
        for (std::size_t j = 0; j < components.size(); ++j) {
            if (components[j].is_outer()) continue;
            x[layout.log_col[j]] = log_coeffs[j];
            for (std::size_t k = 0; k < cos_coeffs[j].size(); ++k) {
                x[layout.power_col[j] + 2 * k] = cos_coeffs[j][k];
                x[layout.power_col[j] + 2 * k + 1] = sin_coeffs[j][k];
            }
        }
        for (std::size_t k = 0; k < outer_cos.size(); ++k) {
            x[layout.outer_col + 2 * k] = outer_cos[k];
            x[layout.outer_col + 2 * k + 1] = outer_sin[k];
        }
        return x;
    }

    double log_sum() const {
        double s = 0.0;
        for (double d : log_coeffs) s += d;
        return s;
    }
};

namespace detail {

inline void check_source(const Expansion& e, Point z) {
    if (e.source && e.source_strength != 0.0 && z == *e.source)
        throw DomainError("evaluation at the logarithmic source");
}

}  // namespace detail

/// u(z). Points exactly on a slit need `on` to pick the side.
inline double eval_expansion(const Expansion& e, Point z, const std::optional<OnComponent>& on = std::nullopt) {
    if (!is_finite(z)) throw DomainError("evaluation at a non-finite point");
    detail::check_source(e, z);
    double u = e.constant;
    if (e.source && e.source_strength != 0.0) u += e.source_strength * std::log(std::abs(z - *e.source));
    for (std::size_t j = 0; j < e.components.size(); ++j) {
        const auto lc = detail::local_coordinate(e.components[j], j, z, e.spec.scaled, on);
        if (e.components[j].is_outer()) {
            Point p = lc.t;
            for (std::size_t k = 0; k < e.outer_cos.size(); ++k) {
                u += e.outer_cos[k] * p.real() + e.outer_sin[k] * p.imag();
                p *= lc.t;
            }
            continue;
        }
        u += e.log_coeffs[j] * lc.log_term;
        const Point inv = 1.0 / lc.t;
        Point p = inv;
        const auto& a = e.cos_coeffs[j];
        const auto& b = e.sin_coeffs[j];
        for (std::size_t k = 0; k < a.size(); ++k) {
            u += a[k] * p.real() + b[k] * p.imag();
            p *= inv;
        }
    }
    return u;
}

/// grad u as a complex number, using grad Re f = conj(f').
inline Point eval_gradient(const Expansion& e, Point z, const std::optional<OnComponent>& on = std::nullopt) {
    if (!is_finite(z)) throw DomainError("evaluation at a non-finite point");
    detail::check_source(e, z);
    Point fp{};
    if (e.source && e.source_strength != 0.0) fp += e.source_strength / (z - *e.source);
    for (std::size_t j = 0; j < e.components.size(); ++j) {
        const auto lc = detail::local_coordinate(e.components[j], j, z, e.spec.scaled, on);
        if (lc.singular) throw DomainError("gradient at a slit endpoint");
        if (e.components[j].is_outer()) {
            // d/dt of (a - ib) t^k is k (a - ib) t^(k-1)
            Point p{1.0, 0.0};
            Point acc{};
            for (std::size_t k = 0; k < e.outer_cos.size(); ++k) {
                acc += static_cast<double>(k + 1) * Point(e.outer_cos[k], -e.outer_sin[k]) * p;
                p *= lc.t;
            }
            fp += acc * lc.dt_dz;
            continue;
        }
        fp += e.log_coeffs[j] * lc.dlog_dz;
        // d/dt of (a - ib) t^-k is -k (a - ib) t^(-k-1)
        const Point inv = 1.0 / lc.t;
        Point p = inv * inv;
        Point acc{};
        const auto& a = e.cos_coeffs[j];
        const auto& b = e.sin_coeffs[j];
        for (std::size_t k = 0; k < a.size(); ++k) {
            acc -= static_cast<double>(k + 1) * Point(a[k], -b[k]) * p;
            p *= inv;
        }
        fp += acc * lc.dt_dz;
    }
    return std::conj(fp);
}

}  // namespace laplace
