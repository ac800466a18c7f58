#pragma once

// Collocation least-squares solve for Laplace problems bounded by disks and
// slits, with an a posteriori boundary-residual certificate.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "laplace/basis.hpp"
#include "laplace/geometry.hpp"
#include "laplace/lsq.hpp"

namespace laplace {

enum class DomainKind { ExteriorUnbounded, Bounded };

/// Dirichlet datum on one component: a constant or a function of position.
class BoundaryData {
public:
    BoundaryData(double value = 0.0) : data_(value) {}  // NOLINT: implicit from a constant is intended
    BoundaryData(std::function<double(Point)> f) : data_(std::move(f)) {}

    double operator()(Point z) const {
        if (const auto* v = std::get_if<double>(&data_)) return *v;
        return std::get<std::function<double(Point)>>(data_)(z);
    }

    bool is_constant() const noexcept { return std::holds_alternative<double>(data_); }
    std::optional<double> constant() const {
        if (const auto* v = std::get_if<double>(&data_)) return *v;
        return std::nullopt;
    }

private:
    std::variant<double, std::function<double(Point)>> data_;
};

/// A validated Laplace problem. Construction rejects overlapping components,
/// sources inside components, and misplaced outer disks.
class Problem {
public:
    Problem(std::vector<BoundaryComponent> components, DomainKind kind, std::optional<Point> source,
            std::vector<BoundaryData> data)
        : components_(std::move(components)), kind_(kind), source_(source), data_(std::move(data)) {
        validate();
    }

    /// Green function of the exterior of `components` with a unit source at `source`.
    static Problem green(std::vector<BoundaryComponent> components, Point source = {}) {
        std::vector<BoundaryData> zeros(components.size(), BoundaryData(0.0));
        return Problem(std::move(components), DomainKind::ExteriorUnbounded, source, std::move(zeros));
    }

    const std::vector<BoundaryComponent>& components() const noexcept { return components_; }
    DomainKind domain_kind() const noexcept { return kind_; }
    const std::optional<Point>& source() const noexcept { return source_; }
    const std::vector<BoundaryData>& boundary_data() const noexcept { return data_; }

    bool is_exterior() const noexcept { return kind_ == DomainKind::ExteriorUnbounded; }

    /// Exterior problem with a unit source and zero data everywhere.
    bool is_green() const {
        if (!is_exterior() || !source_) return false;
        return std::all_of(data_.begin(), data_.end(), [](const BoundaryData& d) {
            const auto c = d.constant();
            return c && *c == 0.0;
        });
    }

    /// True when z is in the open domain (source point included).
    bool contains(Point z) const {
        return std::all_of(components_.begin(), components_.end(),
                           [&](const BoundaryComponent& c) { return in_component_domain(c, z); });
    }

private:
    void validate() const {
        auto name = [](std::size_t j) { return "component " + std::to_string(j); };
        if (data_.size() != components_.size())
            throw ArgumentError("problem: one boundary datum is required per component");
        if (source_ && !is_finite(*source_)) throw ArgumentError("problem: source must be finite");
        std::size_t outer = npos;
        for (std::size_t j = 0; j < components_.size(); ++j) {
            const auto& c = components_[j];
            if (!is_finite(c.center)) throw GeometryError(name(j) + ": center must be finite");
            if (c.is_disk() && !(c.radius > 0.0 && std::isfinite(c.radius)))
                throw GeometryError(name(j) + ": disk radius must be positive");
            if (c.is_slit() && (c.halfspan == Point{} || !is_finite(c.halfspan)))
                throw GeometryError(name(j) + ": slit halfspan must be nonzero");
            if (c.is_outer()) {
                if (c.is_slit()) throw GeometryError(name(j) + ": only disks may be outer components");
                if (kind_ == DomainKind::ExteriorUnbounded)
                    throw GeometryError(name(j) + ": exterior problems cannot have an outer component");
                if (outer != npos) throw GeometryError(name(outer) + " and " + name(j) + ": two outer components");
                outer = j;
            }
        }
        if (kind_ == DomainKind::Bounded && outer == npos)
            throw GeometryError("bounded problem requires exactly one outer component");
        for (std::size_t i = 0; i < components_.size(); ++i) {
            if (i == outer) continue;
            for (std::size_t j = i + 1; j < components_.size(); ++j) {
                if (j == outer) continue;
                if (separation(components_[i], components_[j]) <= 0.0)
                    throw GeometryError(name(i) + " and " + name(j) + " overlap");
            }
            if (outer != npos && !strictly_inside(components_[i], components_[outer]))
                throw GeometryError(name(i) + " is not strictly inside outer " + name(outer));
            if (source_ && !in_component_domain(components_[i], *source_))
                throw GeometryError(name(i) + " contains the source");
        }
        if (source_ && outer != npos && !in_component_domain(components_[outer], *source_))
            throw GeometryError("source lies outside outer " + name(outer));
    }

    std::vector<BoundaryComponent> components_;
    DomainKind kind_;
    std::optional<Point> source_;
    std::vector<BoundaryData> data_;
};

struct FitReport {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t rank = 0;
    std::vector<int> npts;
    std::vector<int> degrees;
};

struct Solution {
    Problem problem;
    Expansion expansion;
    double residual = 0.0;  // max boundary misfit on the check grid
    FitReport fit_report;
};

struct MeasureReport {
    std::vector<double> measures;  // -d_j, one per inner component
    double total = 0.0;
    bool probabilistic = true;     // false unless the problem is an exterior Green problem
};

struct LinearSystem {
    Matrix matrix;
    std::vector<double> rhs;
    std::vector<BoundarySample> samples;
};

inline int degree_of(const ExpansionSpec& spec, const BoundaryComponent& comp, std::size_t j) {
    return comp.is_outer() ? spec.outer_degree : spec.degrees.at(j);
}

/// max(32, 8 N_j) samples per component.
inline std::vector<int> default_npts(const Problem& problem, const ExpansionSpec& spec) {
    std::vector<int> out;
    for (std::size_t j = 0; j < problem.components().size(); ++j)
        out.push_back(std::max(32, 8 * degree_of(spec, problem.components()[j], j)));
    return out;
}

namespace detail {

inline double source_term(const Problem& p, Point z) { return p.source() ? std::log(std::abs(z - *p.source())) : 0.0; }

}  // namespace detail

/// Collocation matrix and rhs. Exterior problems get one extra row enforcing
/// sum d_j = -(source strength), weighted by sqrt(total samples).
inline LinearSystem assemble_system(const Problem& problem, const ExpansionSpec& spec, const std::vector<int>& npts) {
    const auto& comps = problem.components();
    if (npts.size() != comps.size()) throw ArgumentError("assemble_system: one npts entry per component is required");
    const BasisLayout layout(comps, spec);

    LinearSystem sys;
    for (std::size_t j = 0; j < comps.size(); ++j) {
        const int n = degree_of(spec, comps[j], j);
        if (npts[j] < 2 * n + 2)
            throw ArgumentError("assemble_system: component " + std::to_string(j) + " is undersampled (npts " +
                                std::to_string(npts[j]) + " < 2N+2 = " + std::to_string(2 * n + 2) + ")");
        auto s = sample_boundary(comps[j], npts[j], j);
        for (const auto& smp : s)
            for (std::size_t k = 0; k < comps.size(); ++k)
                if (k != j && !in_component_domain(comps[k], smp.point))
                    throw GeometryError("assemble_system: a sample of component " + std::to_string(j) +
                                        " falls inside component " + std::to_string(k));
        sys.samples.insert(sys.samples.end(), s.begin(), s.end());
    }

    const std::size_t nsamp = sys.samples.size();
    const bool constrained = problem.is_exterior();
    const std::size_t nrows = nsamp + (constrained ? 1 : 0);
    if (nrows < layout.ncols) throw ArgumentError("assemble_system: fewer rows than unknowns");

    sys.matrix = Matrix(nrows, layout.ncols);
    sys.rhs.assign(nrows, 0.0);
    std::vector<double> row(layout.ncols);
    for (std::size_t i = 0; i < nsamp; ++i) {
        const auto& smp = sys.samples[i];
        basis_row(smp.point, comps, spec, layout, row, OnComponent{smp.component_index, smp.preimage});
        for (std::size_t c = 0; c < layout.ncols; ++c) sys.matrix(i, c) = row[c];
        sys.rhs[i] = problem.boundary_data()[smp.component_index](smp.point) - detail::source_term(problem, smp.point);
    }
    if (constrained) {
        const double weight = std::sqrt(static_cast<double>(nsamp));
        for (std::size_t j = 0; j < comps.size(); ++j) sys.matrix(nsamp, layout.log_col[j]) = weight;
        sys.rhs[nsamp] = -weight * (problem.source() ? 1.0 : 0.0);
    }
    return sys;
}

/// max |u - g| over `nfine[j]` samples per component, offset half a spacing
/// from the uniform grid.
inline double boundary_residual(const Problem& problem, const Expansion& expansion, const std::vector<int>& nfine) {
    const auto& comps = problem.components();
    if (nfine.size() != comps.size()) throw ArgumentError("boundary_residual: one nfine entry per component is required");
    double worst = 0.0;
    for (std::size_t j = 0; j < comps.size(); ++j) {
        if (nfine[j] < 1) throw ArgumentError("boundary_residual: nfine must be at least 1");
        for (const auto& smp : sample_boundary(comps[j], nfine[j], j, 0.5)) {
            const double u = eval_expansion(expansion, smp.point, OnComponent{j, smp.preimage});
            worst = std::max(worst, std::abs(u - problem.boundary_data()[j](smp.point)));
        }
    }
    return worst;
}

inline double boundary_residual(const Solution& solution, int nfine) {
    return boundary_residual(solution.problem, solution.expansion,
                             std::vector<int>(solution.problem.components().size(), nfine));
}

/// Least-squares fit with a residual certificate on a grid 4x finer than the fit grid.
inline Solution solve_problem(const Problem& problem, const ExpansionSpec& spec, std::vector<int> npts) {
    auto sys = assemble_system(problem, spec, npts);
    const std::size_t rows = sys.matrix.rows(), cols = sys.matrix.cols();
    // The appended constraint row of an exterior problem is imposed exactly.
    auto fit = problem.is_exterior() ? solve_constrained_least_squares(sys.matrix, sys.rhs, rows - 1)
                                     : solve_least_squares_ranked(std::move(sys.matrix), std::move(sys.rhs));
    auto expansion = Expansion::from_coefficients(problem.components(), problem.source(), spec, fit.x);

    std::vector<int> nfine;
    for (int n : npts) nfine.push_back(4 * n);
    const double residual = boundary_residual(problem, expansion, nfine);

    FitReport report{rows, cols, fit.rank, std::move(npts), {}};
    for (std::size_t j = 0; j < problem.components().size(); ++j)
        report.degrees.push_back(degree_of(spec, problem.components()[j], j));
    return Solution{problem, std::move(expansion), residual, std::move(report)};
}

inline Solution solve_problem(const Problem& problem, const ExpansionSpec& spec) {
    return solve_problem(problem, spec, default_npts(problem, spec));
}

/// Harmonic measures -d_j of the inner components.
inline MeasureReport harmonic_measures(const Solution& solution) {
    MeasureReport report;
    report.probabilistic = solution.problem.is_green();
    const auto& comps = solution.problem.components();
    for (std::size_t j = 0; j < comps.size(); ++j) {
        if (comps[j].is_outer()) continue;
        report.measures.push_back(-solution.expansion.log_coeffs[j]);
        report.total += report.measures.back();
    }
    return report;
}

}  // namespace laplace
