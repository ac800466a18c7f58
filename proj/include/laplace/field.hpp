#pragma once

// Field-line products of a solved problem: streamlines climbing grad u,
// equipotential contours on a grid, and flux integrals (side measures of a
// slit, flux through circles).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "laplace/basis.hpp"
#include "laplace/solver.hpp"

namespace laplace {

struct Window {
    double x0 = -1.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;

    bool contains(Point z) const noexcept {
        return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1;
    }
    bool valid() const noexcept { return x1 > x0 && y1 > y0; }
    bool operator==(const Window&) const = default;
};

/// Bounding box of the components and source, padded by `pad` times its size.
inline Window default_window(const Problem& problem, double pad = 0.25) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    auto grow = [&](Point z, double r) {
        x0 = std::min(x0, z.real() - r);
        x1 = std::max(x1, z.real() + r);
        y0 = std::min(y0, z.imag() - r);
        y1 = std::max(y1, z.imag() + r);
    };
    for (const auto& c : problem.components()) {
        if (c.is_disk()) {
            grow(c.center, c.radius);
        } else {
            grow(c.endpoint_lo(), 0.0);
            grow(c.endpoint_hi(), 0.0);
        }
    }
    if (problem.source()) grow(*problem.source(), 0.0);
    if (!(x1 > x0)) x0 = -1.0, x1 = 1.0;
    if (!(y1 > y0)) y0 = -1.0, y1 = 1.0;
    const double size = std::max({x1 - x0, y1 - y0, 1e-12});
    return {x0 - pad * size, x1 + pad * size, y0 - pad * size, y1 + pad * size};
}

enum class PolylineKind { Equipotential, Streamline };
enum class Termination { HitBoundary, LeftWindow, StepLimit, Closed, Open };

struct Polyline {
    std::vector<Point> points;
    PolylineKind kind = PolylineKind::Equipotential;
    double tag = 0.0;  // level for equipotentials, seed angle for streamlines
    Termination termination = Termination::Open;
    std::size_t hit_component = npos;
    bool stagnation = false;
};

// ---------------------------------------------------------------------------
// Streamlines

struct StreamlineOptions {
    double h_max = 0.05;
    double delta_stop = 1e-3;
    int max_steps = 20000;
    double tolerance = 1e-7;       // local error per step
    std::optional<Window> window;  // defaults to a wide box around the geometry
    double seed_angle = 0.0;       // recorded in the polyline tag
};

namespace detail {

struct NearestBoundary {
    double distance = std::numeric_limits<double>::infinity();
    std::size_t index = npos;
};

inline NearestBoundary nearest_boundary(const Problem& problem, Point z) {
    NearestBoundary out;
    const auto& comps = problem.components();
    for (std::size_t j = 0; j < comps.size(); ++j) {
        const double d = distance_to_boundary(comps[j], z);
        if (d < out.distance) out = {d, j};
    }
    return out;
}

inline bool segment_crosses_slit(const Problem& problem, Point a, Point b) {
    for (const auto& c : problem.components())
        if (c.is_slit() && segments_intersect(a, b, c.endpoint_lo(), c.endpoint_hi())) return true;
    return false;
}

inline Window wide_window(const Problem& problem) { return default_window(problem, 50.0); }

}  // namespace detail

/// Integrates dz/dt = grad u / |grad u| with the Bogacki-Shampine 3(2) pair
/// until the path comes within delta_stop of a boundary, leaves the window,
/// or exhausts the step budget. Steps are capped at half the distance to the
/// nearest boundary, so no step can jump across a slit.
inline Polyline trace_streamline(const Solution& solution, Point z0, const StreamlineOptions& opts = {}) {
    const auto& problem = solution.problem;
    const auto& e = solution.expansion;
    if (!is_finite(z0) || !problem.contains(z0)) throw ArgumentError("trace_streamline: seed lies outside the domain");
    if (problem.source() && z0 == *problem.source()) throw ArgumentError("trace_streamline: seed is the source point");

    const Window window = opts.window.value_or(detail::wide_window(problem));
    Polyline line;
    line.kind = PolylineKind::Streamline;
    line.tag = opts.seed_angle;
    line.points.push_back(z0);

    auto direction = [&](Point z, bool& stagnant) {
        const Point g = eval_gradient(e, z);
        const double n = std::abs(g);
        if (!(n >= 1e-12)) {
            stagnant = true;
            return Point{};
        }
        return g / n;
    };

    Point z = z0;
    double u = eval_expansion(e, z);
    bool stagnant = false;
    Point k1 = direction(z, stagnant);
    double h = opts.h_max;
    int steps = 0;
    for (;;) {
        if (stagnant) {
            line.termination = Termination::StepLimit;
            line.stagnation = true;
            break;
        }
        const auto near = detail::nearest_boundary(problem, z);
        if (near.distance < opts.delta_stop) {
            line.termination = Termination::HitBoundary;
            line.hit_component = near.index;
            break;
        }
        if (!window.contains(z)) {
            line.termination = Termination::LeftWindow;
            break;
        }
        if (steps >= opts.max_steps) {
            line.termination = Termination::StepLimit;
            break;
        }
        double cap = opts.h_max;
        if (near.index != npos) cap = std::min(cap, 0.5 * near.distance);
        if (problem.source()) cap = std::min(cap, 0.5 * std::abs(z - *problem.source()) + 0.5 * opts.delta_stop);
        h = std::min(h, cap);

        bool accepted = false;
        Point znew{}, k4{};
        double unew = 0.0;
        while (!accepted) {
            if (h < 1e-14) {
                stagnant = true;
                break;
            }
            const Point k2 = direction(z + 0.5 * h * k1, stagnant);
            const Point k3 = direction(z + 0.75 * h * k2, stagnant);
            znew = z + h * (2.0 / 9.0 * k1 + 1.0 / 3.0 * k2 + 4.0 / 9.0 * k3);
            if (stagnant) break;
            k4 = direction(znew, stagnant);
            if (stagnant) break;
            const Point zlow = z + h * (7.0 / 24.0 * k1 + 0.25 * k2 + 1.0 / 3.0 * k3 + 0.125 * k4);
            const double err = std::abs(znew - zlow);
            const bool ok_err = err <= opts.tolerance;
            bool ok_path = ok_err && !detail::segment_crosses_slit(problem, z, znew);
            if (ok_path) {
                unew = eval_expansion(e, znew);
                ok_path = unew > u;  // ascent
            }
            if (ok_path) {
                accepted = true;
                const double grow = err > 0.0 ? 0.9 * std::cbrt(opts.tolerance / err) : 4.0;
                h = std::min(opts.h_max, h * std::clamp(grow, 0.2, 4.0));
            } else {
                const double shrink = ok_err || err == 0.0 ? 0.5 : std::clamp(0.9 * std::cbrt(opts.tolerance / err), 0.1, 0.5);
                h *= shrink;
            }
        }
        if (!accepted) continue;  // stagnation handled at the top of the loop
        z = znew;
        u = unew;
        k1 = k4;
        line.points.push_back(z);
        ++steps;
    }
    if (line.points.size() < 2) {
        // A seed already within delta_stop of the boundary still yields a 2-point path.
        const Point g = eval_gradient(e, z0);
        const double n = std::abs(g);
        const Point step = n > 0.0 ? 0.25 * opts.delta_stop * g / n : Point{0.25 * opts.delta_stop, 0.0};
        line.points.push_back(z0 + step);
    }
    return line;
}

/// nseeds streamlines from z_s + eps e^{2 pi i k / nseeds}.
inline std::vector<Polyline> streamline_fan(const Solution& solution, int nseeds, double eps,
                                            StreamlineOptions opts = {}) {
    const auto& problem = solution.problem;
    if (!problem.source()) throw ArgumentError("streamline_fan: problem has no source");
    if (nseeds < 1) throw ArgumentError("streamline_fan: nseeds must be at least 1");
    if (!(eps > 0.0)) throw ArgumentError("streamline_fan: eps must be positive");
    const Point zs = *problem.source();
    for (const auto& c : problem.components()) {
        if (c.is_outer()) continue;
        if (distance_to_boundary(c, zs) <= eps || !in_component_domain(c, zs))
            throw ArgumentError("streamline_fan: eps circle reaches a boundary component");
    }
    std::vector<Polyline> out;
    out.reserve(static_cast<std::size_t>(nseeds));
    for (int k = 0; k < nseeds; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / nseeds;
        opts.seed_angle = angle;
        out.push_back(trace_streamline(solution, zs + std::polar(eps, angle), opts));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Contours

namespace detail {

/// Points masked from the contour grid: inside components, within 1e-6 of a
/// slit, or at the source.
inline bool masked(const Problem& problem, Point z) {
    if (problem.source() && std::abs(z - *problem.source()) < 1e-12) return true;
    for (const auto& c : problem.components()) {
        if (c.is_slit()) {
            if (distance_to_boundary(c, z) <= 1e-6) return true;
        } else if (!in_component_domain(c, z)) {
            return true;
        }
    }
    return false;
}

/// Level crossing on the segment a->b (ua, ub straddle level): linear
/// interpolation polished with a few Illinois steps on the true field.
inline Point edge_crossing(const Expansion& e, Point a, double ua, Point b, double ub, double level) {
    double ta = 0.0, tb = 1.0, fa = ua - level, fb = ub - level;
    double t = fa / (fa - fb);
    try {
        int side = 0;
        for (int it = 0; it < 40; ++it) {
            t = (ta * fb - tb * fa) / (fb - fa);
            const double f = eval_expansion(e, a + t * (b - a)) - level;
            if (std::abs(f) <= 1e-12 * std::max(1.0, std::abs(level))) break;
            if ((f < 0) == (fa < 0)) {
                ta = t, fa = f;
                if (side == -1) fb *= 0.5;
                side = -1;
            } else {
                tb = t, fb = f;
                if (side == 1) fa *= 0.5;
                side = 1;
            }
        }
    } catch (const DomainError&) {
        t = (ua - level) / (ua - ub);
    }
    return a + t * (b - a);
}

}  // namespace detail

/// Marching-squares level curves of u on a grid_n x grid_n lattice over the window.
inline std::vector<Polyline> extract_contours(const Solution& solution, const std::vector<double>& levels,
                                              const Window& window, int grid_n) {
    if (grid_n < 2) throw ArgumentError("extract_contours: grid_n must be at least 2");
    if (!window.valid()) throw ArgumentError("extract_contours: empty window");
    std::vector<Polyline> out;
    if (levels.empty()) return out;

    const auto& problem = solution.problem;
    const auto& e = solution.expansion;
    const std::size_t n = static_cast<std::size_t>(grid_n);
    auto node = [&](std::size_t i, std::size_t j) {
        return Point(window.x0 + (window.x1 - window.x0) * static_cast<double>(i) / static_cast<double>(n - 1),
                     window.y0 + (window.y1 - window.y0) * static_cast<double>(j) / static_cast<double>(n - 1));
    };
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> grid(n * n, nan);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            const Point z = node(i, j);
            if (detail::masked(problem, z)) continue;
            try {
                grid[j * n + i] = eval_expansion(e, z);
            } catch (const DomainError&) {
            }
        }
    auto val = [&](std::size_t i, std::size_t j) { return grid[j * n + i]; };

    // Edge ids: horizontal edge (i,j)-(i+1,j) -> 2*(j*n+i); vertical (i,j)-(i,j+1) -> 2*(j*n+i)+1.
    auto hedge = [&](std::size_t i, std::size_t j) { return std::uint64_t{2} * (j * n + i); };
    auto vedge = [&](std::size_t i, std::size_t j) { return std::uint64_t{2} * (j * n + i) + 1; };

    for (double level : levels) {
        std::map<std::uint64_t, Point> crossing;
        auto cross_point = [&](std::uint64_t id, std::size_t i0, std::size_t j0, std::size_t i1, std::size_t j1) {
            auto it = crossing.find(id);
            if (it != crossing.end()) return;
            crossing.emplace(id, detail::edge_crossing(e, node(i0, j0), val(i0, j0), node(i1, j1), val(i1, j1), level));
        };
        std::vector<std::pair<std::uint64_t, std::uint64_t>> segments;
        for (std::size_t j = 0; j + 1 < n; ++j) {
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const double v0 = val(i, j), v1 = val(i + 1, j), v2 = val(i + 1, j + 1), v3 = val(i, j + 1);
                if (std::isnan(v0) || std::isnan(v1) || std::isnan(v2) || std::isnan(v3)) continue;
                const int code = (v0 > level ? 1 : 0) | (v1 > level ? 2 : 0) | (v2 > level ? 4 : 0) | (v3 > level ? 8 : 0);
                if (code == 0 || code == 15) continue;
                // Edges: bottom (0-1), right (1-2), top (3-2), left (0-3).
                const std::array<std::uint64_t, 4> id = {hedge(i, j), vedge(i + 1, j), hedge(i, j + 1), vedge(i, j)};
                auto touch = [&](int edge) {
                    switch (edge) {
                        case 0: cross_point(id[0], i, j, i + 1, j); break;
                        case 1: cross_point(id[1], i + 1, j, i + 1, j + 1); break;
                        case 2: cross_point(id[2], i, j + 1, i + 1, j + 1); break;
                        default: cross_point(id[3], i, j, i, j + 1); break;
                    }
                };
                auto seg = [&](int a, int b) {
                    touch(a);
                    touch(b);
                    segments.emplace_back(id[static_cast<std::size_t>(a)], id[static_cast<std::size_t>(b)]);
                };
                const bool center_high = 0.25 * (v0 + v1 + v2 + v3) > level;
                switch (code) {
                    case 1: case 14: seg(3, 0); break;
                    case 2: case 13: seg(0, 1); break;
                    case 3: case 12: seg(3, 1); break;
                    case 4: case 11: seg(1, 2); break;
                    case 6: case 9: seg(0, 2); break;
                    case 7: case 8: seg(3, 2); break;
                    case 5:  // corners 0 and 2 high
                        if (center_high) { seg(3, 2); seg(0, 1); } else { seg(3, 0); seg(1, 2); }
                        break;
                    case 10:  // corners 1 and 3 high
                        if (center_high) { seg(3, 0); seg(1, 2); } else { seg(0, 1); seg(3, 2); }
                        break;
                    default: break;
                }
            }
        }

        // Chain segments into polylines through shared edge ids.
        std::map<std::uint64_t, std::vector<std::size_t>> incident;
        for (std::size_t s = 0; s < segments.size(); ++s) {
            incident[segments[s].first].push_back(s);
            incident[segments[s].second].push_back(s);
        }
        std::vector<bool> used(segments.size(), false);
        auto walk = [&](std::uint64_t start, std::size_t first_seg, std::vector<std::uint64_t>& ids) {
            std::uint64_t cur = start;
            std::size_t seg = first_seg;
            while (seg != npos && !used[seg]) {
                used[seg] = true;
                const std::uint64_t next = segments[seg].first == cur ? segments[seg].second : segments[seg].first;
                ids.push_back(next);
                cur = next;
                seg = npos;
                for (std::size_t cand : incident[cur])
                    if (!used[cand]) {
                        seg = cand;
                        break;
                    }
            }
        };
        // Open chains first (start at edge ids with a single incident segment), then loops.
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t s = 0; s < segments.size(); ++s) {
                if (used[s]) continue;
                std::uint64_t start = segments[s].first;
                if (pass == 0) {
                    if (incident[segments[s].first].size() == 1) start = segments[s].first;
                    else if (incident[segments[s].second].size() == 1) start = segments[s].second;
                    else continue;
                }
                std::vector<std::uint64_t> ids{start};
                walk(start, s, ids);
                Polyline line;
                line.kind = PolylineKind::Equipotential;
                line.tag = level;
                line.termination = ids.front() == ids.back() && ids.size() > 2 ? Termination::Closed : Termination::Open;
                for (auto id : ids) {
                    const Point p = crossing.at(id);
                    if (line.points.empty() || line.points.back() != p) line.points.push_back(p);
                }
                if (line.points.size() >= 2) out.push_back(std::move(line));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Flux integrals

/// Gauss-Legendre nodes and weights on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    if (n < 1) throw ArgumentError("gauss_legendre: n must be positive");
    std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // one more derivative evaluation at the converged node
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(n - 1 - i);
        x[a] = -z;
        x[b] = z;
        w[a] = w[b] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

/// Outward flux of grad u through the circle |z - center| = radius,
/// trapezoid rule on `nodes` equispaced points.
inline double circle_flux(const Expansion& e, Point center, double radius, int nodes = 512) {
    double sum = 0.0;
    for (int k = 0; k < nodes; ++k) {
        const Point n = std::polar(1.0, 2.0 * std::numbers::pi * k / nodes);
        const Point g = eval_gradient(e, center + radius * n);
        sum += (std::conj(g) * n).real();
    }
    return sum * radius * 2.0 * std::numbers::pi / nodes;
}

enum class SlitSide { Facing, Away };

/// Harmonic measure of one side of a slit: (1/2 pi) times the flux into the
/// side through the half-ellipse at distance delta from it (delta = 0
/// integrates on the slit itself). The contour is the image of |w| = rho,
/// parameterized by the preimage angle, so Gauss-Legendre nodes in the angle
/// cluster at the slit endpoints.
inline double slit_side_measure(const Solution& solution, std::size_t slit_index, SlitSide side, int nquad = 200,
                                std::optional<double> delta = std::nullopt) {
    const auto& comps = solution.problem.components();
    if (slit_index >= comps.size() || !comps[slit_index].is_slit())
        throw ArgumentError("slit_side_measure: component is not a slit");
    if (nquad < 1) throw ArgumentError("slit_side_measure: nquad must be positive");
    const auto& slit = comps[slit_index];
    const double len = std::abs(slit.halfspan);
    const double d = delta.value_or(1e-4 * len);
    if (d < 0.0) throw ArgumentError("slit_side_measure: negative offset");
    // semi-minor axis |r| (rho - 1/rho)/2 = d
    const double t = d / len;
    const double rho = t + std::sqrt(t * t + 1.0);

    // Side with Im((z - c)/r) > 0 is swept by preimage angles in (0, pi).
    bool positive_side = true;
    if (solution.problem.source()) {
        const double s = ((*solution.problem.source() - slit.center) / slit.halfspan).imag();
        positive_side = s >= 0.0;
    }
    if (side == SlitSide::Away) positive_side = !positive_side;
    const double a = positive_side ? 0.0 : std::numbers::pi;

    const auto [x, w] = gauss_legendre(nquad);
    double sum = 0.0;
    for (std::size_t q = 0; q < x.size(); ++q) {
        const double theta = a + 0.5 * std::numbers::pi * (x[q] + 1.0);
        const Point wp = std::polar(rho, theta);
        const Point z = joukowski_forward(slit.center, slit.halfspan, wp);
        const Point g = eval_gradient(solution.expansion, z, OnComponent{slit_index, wp});
        const Point dz_dtheta = joukowski_derivative(slit.halfspan, wp) * Point(0.0, 1.0) * wp;
        // flux toward the slit: normal i * tangent on a counterclockwise contour
        sum += w[q] * (std::conj(g) * Point(0.0, 1.0) * dz_dtheta).real();
    }
    return sum * 0.5 * std::numbers::pi / (2.0 * std::numbers::pi);
}

}  // namespace laplace
