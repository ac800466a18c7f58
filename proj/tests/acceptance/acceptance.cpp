// Acceptance checks. `acceptance N` runs criterion N; no argument runs all.
// Each check prints one PASS/FAIL line followed by indented details.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "../problems.hpp"

using namespace laplace;
namespace tp = testing_problems;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

template <class... A>
void detail(const char* fmt, A... args) {
    std::printf("    ");
    std::printf(fmt, args...);
    std::printf("\n");
}

/// t significant digits: relative error at most 5 * 10^-t.
bool digits_ok(double approx, double exact, int t) {
    return std::abs(approx - exact) <= 5.0 * std::pow(10.0, -t) * std::abs(exact);
}

bool c1() {
    const Point c(3.0, 1.0), src(0.0, 0.0), z(2.0, 0.0);
    const double exact = tp::disk_green_exact(c, 1.0, src, z);
    const double quoted = -0.5893274981708;
    bool ok = std::abs(exact - quoted) <= 1e-13;
    detail("closed form u(2) = %.15f, quoted %.13f", exact, quoted);
    const auto p = tp::disk1();
    for (auto [n, t] : {std::pair{4, 4}, std::pair{8, 7}, std::pair{12, 10}}) {
        const auto t0 = Clock::now();
        const auto sol = tp::solve(p, n);
        const double u = eval_expansion(sol.expansion, z);
        const double dt = seconds_since(t0);
        const bool good = digits_ok(u, exact, t) && dt <= 0.1;
        detail("N=%2d u(2) = %.15f rel.err %.2e (need %d digits: <= %.0e) time %.4fs %s", n, u,
               std::abs(u - exact) / std::abs(exact), t, 5.0 * std::pow(10.0, -t), dt, good ? "ok" : "FAIL");
        ok = ok && good;
    }
    return ok;
}

bool c2() {
    const auto t0 = Clock::now();
    const auto p = Problem::green({BoundaryComponent::slit({3.0, 0.0}, {1.0, -0.5})});
    const auto sol = tp::solve(p, 10);
    const double facing = slit_side_measure(sol, 0, SlitSide::Facing);
    const double dt = seconds_since(t0);
    const bool ok = std::abs(facing - 0.582625) <= 1e-4 && dt <= 1.0;
    detail("c=3, halfspan 1-0.5i: facing side %.7f, target 0.582625, diff %.2e, time %.3fs", facing,
           std::abs(facing - 0.582625), dt);
    const auto shifted = tp::solve(tp::slit1(), 10);
    detail("c=3+i, halfspan 1-0.5i: facing side %.7f (reference)", slit_side_measure(shifted, 0, SlitSide::Facing));
    return ok;
}

bool c3() {
    const std::vector<std::vector<double>> table = {
        {0.5},
        {0.367776, 0.132224},
        {0.253289, 0.111676, 0.066706, 0.068329},
        {0.162063, 0.088794, 0.058116, 0.054538, 0.038156, 0.029363, 0.029460, 0.039509}};
    bool ok = true;
    for (int m = 1; m <= 4; ++m) {
        const auto got = cantor_measures(m, false);
        const auto& want = table[static_cast<std::size_t>(m - 1)];
        double worst = got.size() == want.size() ? 0.0 : 1.0;
        for (std::size_t i = 0; i < std::min(got.size(), want.size()); ++i)
            worst = std::max(worst, std::abs(got[i] - want[i]));
        const bool good = worst <= 1e-6;
        std::string line;
        for (double v : got) line += " " + std::to_string(v);
        detail("m=%d N=%d:%s  max diff %.2e %s", m, cantor_degree(m), line.c_str(), worst, good ? "ok" : "FAIL");
        ok = ok && good;
    }
    return ok;
}

bool c4() {
    const double want[] = {0.367776, 0.364965, 0.363512};
    bool ok = true;
    double total = 0.0;
    for (int m = 1; m <= 6; ++m) {
        const auto t0 = Clock::now();
        const auto measures = cantor_measures(m, false);
        total += seconds_since(t0);
        if (m < 4) continue;
        double sum = 0.0;
        for (std::size_t i = 0; i < measures.size() / 2; ++i) sum += measures[i];
        const double target = want[m - 4];
        const bool good = std::abs(sum - target) <= 1e-6;
        detail("m=%d inner-half sum %.7f target %.6f diff %.2e %s", m, sum, target, std::abs(sum - target),
               good ? "ok" : "FAIL");
        ok = ok && good;
    }
    for (int m = 2; m <= 3; ++m) detail("m=%d inner-half sum %.7f (reference)", m, cantor_inner_half_sum(m, false));
    detail("general-path time for m=1..6: %.2fs (limit 10s)", total);
    return ok && total <= 10.0;
}

/// Radius of a circle around component j that encloses nothing else.
double isolating_radius(const Problem& p, std::size_t j) {
    const auto& comps = p.components();
    const double own = comps[j].scale();
    double room = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < comps.size(); ++k) {
        if (k == j) continue;
        room = std::min(room, distance_to_boundary(comps[k], comps[j].center) - own);
    }
    if (p.source()) room = std::min(room, std::abs(*p.source() - comps[j].center) - own);
    return own + 0.4 * room;
}

bool c5() {
    std::vector<tp::Named> set = tp::exterior_set();
    for (int m = 1; m <= 6; ++m)
        set.push_back({"cantor m=" + std::to_string(m), Problem::green(cantor_components(m).slits), cantor_degree(m)});
    bool ok = true;
    for (const auto& [name, p, degree] : set) {
        const auto sol = tp::solve(p, degree);
        const auto meas = harmonic_measures(sol);
        const double sum_err = std::abs(meas.total - 1.0);
        double worst = 0.0;
        const auto& comps = p.components();
        for (std::size_t j = 0; j < comps.size(); ++j) {
            const double flux = circle_flux(sol.expansion, comps[j].center, isolating_radius(p, j), 1024);
            const double want = 2.0 * std::numbers::pi * sol.expansion.log_coeffs[j];
            worst = std::max(worst, std::abs(flux - want) / std::abs(want));
        }
        double near = std::numeric_limits<double>::infinity();
        for (const auto& c : comps) near = std::min(near, distance_to_boundary(c, *p.source()));
        const double sflux = circle_flux(sol.expansion, *p.source(), 0.4 * near, 1024);
        const double src_err = std::abs(sflux - 2.0 * std::numbers::pi) / (2.0 * std::numbers::pi);
        const bool good = sum_err <= 1e-9 && worst <= 1e-6 && src_err <= 1e-6;
        detail("%-12s |sum(-d)-1| %.1e  component flux rel.err %.1e  source flux rel.err %.1e %s", name.c_str(), sum_err,
               worst, src_err, good ? "ok" : "FAIL");
        ok = ok && good;
    }
    return ok;
}

bool c6() {
    std::mt19937_64 rng(20161);
    bool ok = true;
    for (const auto& [name, p, degree] : tp::exterior_set()) {
        const auto sol = tp::solve(p, degree);
        const Window w = default_window(p);
        std::uniform_real_distribution<double> ux(w.x0, w.x1), uy(w.y0, w.y1);
        double worst = 0.0;
        int taken = 0;
        while (taken < 100) {
            const Point z(ux(rng), uy(rng));
            if (!p.contains(z) || std::abs(z - *p.source()) < 0.05) continue;
            bool near = false;
            for (const auto& c : p.components()) near = near || distance_to_boundary(c, z) < 0.05;
            if (near) continue;
            const Point g = eval_gradient(sol.expansion, z);
            if (std::abs(g) < 1e-3) continue;  // relative error is meaningless at a stagnation point
            const double h = 1e-6;
            const auto& e = sol.expansion;
            const Point fd((eval_expansion(e, z + h) - eval_expansion(e, z - h)) / (2 * h),
                           (eval_expansion(e, z + Point(0, h)) - eval_expansion(e, z - Point(0, h))) / (2 * h));
            worst = std::max(worst, std::abs(fd - g) / std::abs(g));
            ++taken;
        }
        const bool good = worst <= 1e-6;
        detail("%-6s 100 points, max relative gradient mismatch %.2e %s", name.c_str(), worst, good ? "ok" : "FAIL");
        ok = ok && good;
    }
    return ok;
}

bool c7() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst = 0.0, min_modulus = std::numeric_limits<double>::infinity();
    int done = 0;
    while (done < 1000) {
        const Point c(-5.0 + 10.0 * u01(rng), -5.0 + 10.0 * u01(rng));
        const Point r = std::polar(0.1 + 2.9 * u01(rng), 2.0 * std::numbers::pi * u01(rng));
        const Point z = c + std::abs(r) * Point(-3.0 + 6.0 * u01(rng), -3.0 + 6.0 * u01(rng));
        if (distance_to_segment(z, c - r, c + r) < 1e-9 * std::abs(r)) continue;
        const Point w = joukowski_inverse(c, r, z);
        worst = std::max(worst, std::abs(joukowski_forward(c, r, w) - z));
        min_modulus = std::min(min_modulus, std::abs(w));
        ++done;
    }
    const bool ok = worst <= 1e-12 && min_modulus > 1.0;
    detail("1000 triples: max |forward(inverse(z)) - z| %.2e, min |w| - 1 = %.2e", worst, min_modulus - 1.0);
    return ok;
}

bool c8() {
    const auto p = Problem({BoundaryComponent::disk({}, 2.0, Role::Outer), BoundaryComponent::disk({}, 1.0)},
                           DomainKind::Bounded, std::nullopt, {BoundaryData(0.0), BoundaryData(1.0)});
    const auto sol = tp::solve(p, 10);
    const double u = eval_expansion(sol.expansion, {std::sqrt(2.0), 0.0});
    const double d = sol.expansion.log_coeffs[1];
    const double d_exact = -1.0 / std::log(2.0);
    const bool ok = std::abs(u - 0.5) <= 1e-8 && std::abs(d - d_exact) <= 1e-8;
    detail("u(sqrt 2) = %.15f (err %.1e); log coefficient %.15f vs %.15f (err %.1e); residual %.1e", u,
           std::abs(u - 0.5), d, d_exact, std::abs(d - d_exact), sol.residual);
    return ok;
}

bool c9() {
    const auto p = tp::disk1();
    const auto sol = tp::solve(p, 12);
    const auto fan = streamline_fan(sol, 256, 1e-2);
    int hits = 0, monotone = 0, proper = 0;
    for (const auto& line : fan) {
        bool up = true;
        double prev = -std::numeric_limits<double>::infinity();
        for (Point z : line.points) {
            const double u = eval_expansion(sol.expansion, z);
            up = up && u > prev;
            prev = u;
        }
        monotone += up;
        if (line.termination == Termination::HitBoundary) {
            ++hits;
            proper += distance_to_boundary(p.components()[0], line.points.back()) <= 1.001e-3;
        } else if (line.termination == Termination::LeftWindow) {
            proper += 1;
        }
    }
    const double measure = harmonic_measures(sol).measures[0];
    const double frac = hits / 256.0;
    const bool ok = monotone == 256 && proper == 256 && std::abs(frac - measure) <= 1.0 / 256.0;
    detail("monotone %d/256, correctly terminated %d/256, hit fraction %.6f vs measure %.6f (tol %.6f)", monotone,
           proper, frac, measure, 1.0 / 256.0);
    return ok;
}

bool c10() {
    const auto p = tp::disk1();
    std::vector<double> res;
    bool ok = true;
    for (int n = 2; n <= 14; n += 2) {
        res.push_back(tp::solve(p, n).residual);
        const bool step = res.size() < 2 || res.back() <= 0.1 * res[res.size() - 2];
        detail("N=%2d residual %.3e%s", n, res.back(),
               res.size() < 2 ? "" : (std::string(" gain ") + std::to_string(std::log10(res[res.size() - 2] / res.back())) +
                                      " digits" + (step ? "" : " FAIL")).c_str());
        ok = ok && step;
    }
    return ok;
}

struct Criterion {
    const char* title;
    std::function<bool()> run;
};

const std::vector<Criterion> criteria = {
    {"disk Green value u(2) to 4/7/10 digits at N=4/8/12", c1},
    {"slit side split 0.582625 for c=3, halfspan 1-0.5i", c2},
    {"Cantor measure tables m=1..4 to 1e-6", c3},
    {"Cantor inner-half sums m=4,5,6", c4},
    {"measure normalization and flux quantization", c5},
    {"gradient against central differences", c6},
    {"Joukowski round trip", c7},
    {"annulus analytic check", c8},
    {"streamline fan properties for disk1", c9},
    {"geometric residual decay for disk1", c10},
};

bool run(std::size_t i) {
    bool ok = false;
    std::printf("C%zu %s\n", i + 1, criteria[i].title);
    try {
        ok = criteria[i].run();
    } catch (const std::exception& e) {
        detail("exception: %s", e.what());
    }
    std::printf("%s C%zu %s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].title);
    std::fflush(stdout);
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) {
        const long n = std::strtol(argv[1], nullptr, 10);
        if (n < 1 || n > static_cast<long>(criteria.size())) {
            std::fprintf(stderr, "usage: acceptance [1..%zu]\n", criteria.size());
            return 2;
        }
        return run(static_cast<std::size_t>(n - 1)) ? 0 : 1;
    }
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) failed += !run(i);
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
