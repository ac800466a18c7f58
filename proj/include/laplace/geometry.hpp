#pragma once

// Boundary components (disks and slits), the Joukowski map pair that carries
// the exterior of the unit circle onto the exterior of a slit, and boundary
// sampling.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "laplace/errors.hpp"

namespace laplace {

using Point = std::complex<double>;

enum class ComponentKind { Disk, Slit };
enum class Role { Inner, Outer };

inline bool is_finite(Point z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// A disk |z - center| = radius, or a slit center + halfspan * [-1, 1].
struct BoundaryComponent {
    ComponentKind kind = ComponentKind::Disk;
    Point center{};
    double radius = 0.0;   // Disk only
    Point halfspan{};      // Slit only
    Role role = Role::Inner;

    static BoundaryComponent disk(Point c, double r, Role role = Role::Inner) {
        if (!is_finite(c) || !std::isfinite(r) || !(r > 0.0))
            throw ArgumentError("disk radius must be positive and finite");
        return {ComponentKind::Disk, c, r, {}, role};
    }

    static BoundaryComponent slit(Point c, Point r) {
        if (!is_finite(c) || !is_finite(r) || r == Point{})
            throw ArgumentError("slit halfspan must be nonzero and finite");
        return {ComponentKind::Slit, c, 0.0, r, Role::Inner};
    }

    bool is_disk() const noexcept { return kind == ComponentKind::Disk; }
    bool is_slit() const noexcept { return kind == ComponentKind::Slit; }
    bool is_outer() const noexcept { return role == Role::Outer; }

    /// Characteristic size: radius for disks, |halfspan| for slits.
    double scale() const noexcept { return is_disk() ? radius : std::abs(halfspan); }

    Point endpoint_lo() const noexcept { return center - halfspan; }
    Point endpoint_hi() const noexcept { return center + halfspan; }

    bool operator==(const BoundaryComponent&) const = default;
};

// ---------------------------------------------------------------------------
// Joukowski map

/// z = c + r (w + 1/w) / 2
inline Point joukowski_forward(Point c, Point r, Point w) {
    if (w == Point{}) throw DomainError("joukowski_forward: w = 0");
    return c + r * (w + 1.0 / w) * 0.5;
}

/// dz/dw of the forward map; vanishes at w = +-1 (the slit endpoints).
inline Point joukowski_derivative(Point r, Point w) { return r * (1.0 - 1.0 / (w * w)) * 0.5; }

/// Inverse of the forward map onto |w| > 1. Undefined on the closed slit,
/// where the two sides of the slit give two preimages.
inline Point joukowski_inverse(Point c, Point r, Point z) {
    const Point zc = (z - c) / r;
    if (zc.imag() == 0.0 && std::abs(zc.real()) <= 1.0)
        throw DomainError("joukowski_inverse: point lies on the slit");
    // Branch of sqrt(zc^2 - 1) ~ zc at infinity, cut only on [-1, 1]; the
    // product form does not depend on signed zeros off the slit.
    return zc + std::sqrt(zc - 1.0) * std::sqrt(zc + 1.0);
}

// ---------------------------------------------------------------------------
// Distances and containment

inline double distance_to_segment(Point z, Point a, Point b) noexcept {
    const Point ab = b - a;
    const double len2 = std::norm(ab);
    double t = len2 > 0.0 ? ((z - a) * std::conj(ab)).real() / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(z - (a + t * ab));
}

/// Unsigned distance from z to the component's boundary curve.
inline double distance_to_boundary(const BoundaryComponent& comp, Point z) noexcept {
    if (comp.is_disk()) return std::abs(std::abs(z - comp.center) - comp.radius);
    return distance_to_segment(z, comp.endpoint_lo(), comp.endpoint_hi());
}

/// True when z is outside the region the component removes from the plane:
/// outside an inner disk, inside an outer disk, off a slit.
inline bool in_component_domain(const BoundaryComponent& comp, Point z) noexcept {
    if (comp.is_slit()) return distance_to_boundary(comp, z) > 0.0;
    const double rho = std::abs(z - comp.center);
    return comp.is_outer() ? rho < comp.radius : rho > comp.radius;
}

namespace detail {

inline double cross(Point a, Point b) noexcept { return a.real() * b.imag() - a.imag() * b.real(); }

inline bool segments_intersect(Point p1, Point p2, Point q1, Point q2) noexcept {
    const double d1 = cross(q2 - q1, p1 - q1);
    const double d2 = cross(q2 - q1, p2 - q1);
    const double d3 = cross(p2 - p1, q1 - p1);
    const double d4 = cross(p2 - p1, q2 - p1);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    return distance_to_segment(p1, q1, q2) == 0.0 || distance_to_segment(p2, q1, q2) == 0.0 ||
           distance_to_segment(q1, p1, p2) == 0.0 || distance_to_segment(q2, p1, p2) == 0.0;
}

}  // namespace detail

/// Minimum distance between the closed sets removed by two inner components
/// (0 when they touch or overlap).
inline double separation(const BoundaryComponent& a, const BoundaryComponent& b) noexcept {
    if (a.is_disk() && b.is_disk())
        return std::max(0.0, std::abs(a.center - b.center) - a.radius - b.radius);
    if (a.is_disk() != b.is_disk()) {
        const auto& d = a.is_disk() ? a : b;
        const auto& s = a.is_disk() ? b : a;
        return std::max(0.0, distance_to_segment(d.center, s.endpoint_lo(), s.endpoint_hi()) - d.radius);
    }
    const Point p1 = a.endpoint_lo(), p2 = a.endpoint_hi(), q1 = b.endpoint_lo(), q2 = b.endpoint_hi();
    if (detail::segments_intersect(p1, p2, q1, q2)) return 0.0;
    return std::min({distance_to_segment(p1, q1, q2), distance_to_segment(p2, q1, q2),
                     distance_to_segment(q1, p1, p2), distance_to_segment(q2, p1, p2)});
}

/// True when `inner` lies strictly inside the outer disk `outer`.
inline bool strictly_inside(const BoundaryComponent& inner, const BoundaryComponent& outer) noexcept {
    if (inner.is_disk()) return std::abs(inner.center - outer.center) + inner.radius < outer.radius;
    return std::abs(inner.endpoint_lo() - outer.center) < outer.radius &&
           std::abs(inner.endpoint_hi() - outer.center) < outer.radius;
}

// ---------------------------------------------------------------------------
// Sampling

struct BoundarySample {
    Point point;
    std::size_t component_index = 0;
    Point preimage;  // unit-circle point that generated `point`
};

/// npts samples at angles 2*pi*(k + phase)/npts on the unit circle, pushed
/// onto the component. Disks default to phase 0, slits to phase 1/2 so the
/// endpoints w = +-1 are never hit for even npts.
inline std::vector<BoundarySample> sample_boundary(const BoundaryComponent& comp, int npts,
                                                   std::size_t component_index, double phase) {
    if (npts <= 0) throw ArgumentError("sample_boundary: npts must be positive");
    std::vector<BoundarySample> out;
    out.reserve(static_cast<std::size_t>(npts));
    for (int k = 0; k < npts; ++k) {
        const double theta = 2.0 * std::numbers::pi * (k + phase) / npts;
        const Point w = std::polar(1.0, theta);
        const Point z = comp.is_disk() ? comp.center + comp.radius * w
                                       : joukowski_forward(comp.center, comp.halfspan, w);
        out.push_back({z, component_index, w});
    }
    return out;
}

inline std::vector<BoundarySample> sample_boundary(const BoundaryComponent& comp, int npts,
                                                   std::size_t component_index = 0) {
    return sample_boundary(comp, npts, component_index, comp.is_disk() ? 0.0 : 0.5);
}

inline std::string describe(const BoundaryComponent& comp) {
    auto fmt = [](Point z) {
        return "(" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")";
    };
    if (comp.is_disk())
        return std::string(comp.is_outer() ? "outer " : "") + "disk center " + fmt(comp.center) +
               " radius " + std::to_string(comp.radius);
    return "slit center " + fmt(comp.center) + " halfspan " + fmt(comp.halfspan);
}

}  // namespace laplace
