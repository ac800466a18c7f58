#pragma once

// CSV, SVG, and JSON report writers.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "json.hpp"
#include "laplace/field.hpp"
#include "laplace/solver.hpp"

namespace laplace {

/// x rounded to 13 significant digits.
inline double round_sig13(double x) {
    if (!std::isfinite(x) || x == 0.0) return x;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.13g", x);
    return std::strtod(buf, nullptr);
}

inline std::string format_sig13(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.13g", x);
    return buf;
}

/// `kind,level_or_seed,x,y` rows, one blank-line-separated block per polyline.
inline std::string polylines_csv(const std::vector<Polyline>& lines) {
    std::string out = "kind,level_or_seed,x,y\n";
    bool first = true;
    for (const auto& line : lines) {
        if (!first) out += "\n";
        first = false;
        const char* kind = line.kind == PolylineKind::Equipotential ? "equipotential" : "streamline";
        for (Point p : line.points) {
            out += kind;
            out += ',' + format_sig13(line.tag) + ',' + format_sig13(p.real()) + ',' + format_sig13(p.imag()) + '\n';
        }
    }
    return out;
}

/// Standalone SVG of the polylines and component outlines. Output is a pure
/// function of the inputs (fixed formatting, no timestamps).
inline std::string emit_svg(const std::vector<Polyline>& lines, const std::vector<BoundaryComponent>& comps,
                            const Window& window) {
    if (!window.valid()) throw ArgumentError("emit_svg: empty window");
    const double w = window.x1 - window.x0, h = window.y1 - window.y0;
    const double px = 800.0;
    char buf[256];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);
        return std::string(buf);
    };
    // SVG y grows downward; plane y is negated.
    auto xy = [&](Point p) { return num(p.real()) + " " + num(-p.imag()); };
    const double stroke = 0.002 * std::max(w, h);

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(px) + "\" height=\"" + num(px * h / w) +
           "\" viewBox=\"" + num(window.x0) + " " + num(-window.y1) + " " + num(w) + " " + num(h) +
           "\" preserveAspectRatio=\"xMidYMid meet\">\n";
    out += "<rect x=\"" + num(window.x0) + "\" y=\"" + num(-window.y1) + "\" width=\"" + num(w) + "\" height=\"" +
           num(h) + "\" fill=\"white\"/>\n";
    out += "<g fill=\"none\" stroke-width=\"" + num(stroke) + "\">\n";
    for (const auto& line : lines) {
        const char* color = line.kind == PolylineKind::Equipotential ? "#1f4e9c" : "#c0392b";
        out += "<path stroke=\"" + std::string(color) + "\" d=\"";
        for (std::size_t i = 0; i < line.points.size(); ++i) out += (i == 0 ? "M" : " L") + xy(line.points[i]);
        out += "\"/>\n";
    }
    out += "</g>\n";
    out += "<g fill=\"#bbbbbb\" stroke=\"black\" stroke-width=\"" + num(stroke) + "\">\n";
    for (const auto& c : comps) {
        if (c.is_disk()) {
            out += "<circle cx=\"" + num(c.center.real()) + "\" cy=\"" + num(-c.center.imag()) + "\" r=\"" +
                   num(c.radius) + "\"" + (c.is_outer() ? " fill=\"none\"" : "") + "/>\n";
        } else {
            const Point a = c.endpoint_lo(), b = c.endpoint_hi();
            out += "<line x1=\"" + num(a.real()) + "\" y1=\"" + num(-a.imag()) + "\" x2=\"" + num(b.real()) +
                   "\" y2=\"" + num(-b.imag()) + "\" stroke-width=\"" + num(2.0 * stroke) + "\"/>\n";
        }
    }
    out += "</g>\n</svg>\n";
    return out;
}

/// Coefficients, certificate, measures, and point values of a solution.
inline nlohmann::json solution_report(const Solution& sol, const std::vector<Point>& eval_points = {}) {
    using nlohmann::json;
    const auto& e = sol.expansion;
    json r;
    r["domain"] = sol.problem.is_exterior() ? "exterior" : "bounded";
    r["source"] = sol.problem.source() ? json::array({sol.problem.source()->real(), sol.problem.source()->imag()})
                                       : json(nullptr);
    r["constant"] = round_sig13(e.constant);
    r["residual"] = round_sig13(sol.residual);
    json comps = json::array();
    for (std::size_t j = 0; j < e.components.size(); ++j) {
        const auto& c = e.components[j];
        json o;
        o["kind"] = c.is_disk() ? "disk" : "slit";
        o["role"] = c.is_outer() ? "outer" : "inner";
        o["degree"] = sol.fit_report.degrees.at(j);
        o["npts"] = sol.fit_report.npts.at(j);
        json a = json::array(), b = json::array();
        if (c.is_outer()) {
            for (double v : e.outer_cos) a.push_back(round_sig13(v));
            for (double v : e.outer_sin) b.push_back(round_sig13(v));
        } else {
            o["d"] = round_sig13(e.log_coeffs[j]);
            for (double v : e.cos_coeffs[j]) a.push_back(round_sig13(v));
            for (double v : e.sin_coeffs[j]) b.push_back(round_sig13(v));
        }
        o["a"] = a;
        o["b"] = b;
        comps.push_back(o);
    }
    r["components"] = comps;
    const auto m = harmonic_measures(sol);
    json mv = json::array();
    for (double v : m.measures) mv.push_back(round_sig13(v));
    r["measures"] = {{"values", mv}, {"total", round_sig13(m.total)}, {"probabilistic", m.probabilistic}};
    r["fit"] = {{"rows", sol.fit_report.rows}, {"cols", sol.fit_report.cols}, {"rank", sol.fit_report.rank}};
    json ev = json::array();
    for (Point z : eval_points)
        ev.push_back({{"x", z.real()}, {"y", z.imag()}, {"u", round_sig13(eval_expansion(e, z))}});
    r["eval"] = ev;
    return r;
}

/// Twelve levels spread over the 5th..95th percentiles of u sampled on a
/// 64 x 64 lattice of the window. Deterministic in the inputs.
inline std::vector<double> automatic_levels(const Solution& sol, const Window& window, int count = 12) {
    std::vector<double> values;
    constexpr int n = 64;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Point z(window.x0 + (window.x1 - window.x0) * (i + 0.5) / n,
                          window.y0 + (window.y1 - window.y0) * (j + 0.5) / n);
            if (!sol.problem.contains(z) || detail::masked(sol.problem, z)) continue;
            try {
                const double u = eval_expansion(sol.expansion, z);
                if (std::isfinite(u)) values.push_back(u);
            } catch (const DomainError&) {
            }
        }
    if (values.size() < 2 || count < 1) return {};
    std::sort(values.begin(), values.end());
    auto quantile = [&](double q) { return values[static_cast<std::size_t>(q * static_cast<double>(values.size() - 1))]; };
    const double lo = quantile(0.05), hi = quantile(0.95);
    if (!(hi > lo)) return {lo};
    std::vector<double> out;
    for (int k = 0; k < count; ++k) out.push_back(round_sig13(lo + (hi - lo) * (k + 0.5) / count));
    return out;
}

/// Writes every file or none: contents go to temporaries beside the targets,
/// which are renamed only after all writes succeed. Throws std::runtime_error.
inline void write_files_atomically(const std::vector<std::pair<std::filesystem::path, std::string>>& files) {
    namespace fs = std::filesystem;
    std::vector<fs::path> temps;
    auto cleanup = [&] {
        std::error_code ec;
        for (const auto& t : temps) fs::remove(t, ec);
    };
    for (const auto& [path, text] : files)
        if (fs::is_directory(path)) throw std::runtime_error("cannot write " + path.string() + ": is a directory");
    try {
        for (const auto& [path, text] : files) {
            fs::path tmp = path;
            tmp += ".tmp";
            temps.push_back(tmp);
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw std::runtime_error("cannot write " + path.string());
            out << text;
            out.close();
            if (!out) throw std::runtime_error("write failed for " + path.string());
        }
        for (std::size_t i = 0; i < files.size(); ++i) {
            std::error_code ec;
            fs::rename(temps[i], files[i].first, ec);
            if (ec) throw std::runtime_error("cannot rename into " + files[i].first.string() + ": " + ec.message());
        }
    } catch (...) {
        cleanup();
        throw;
    }
}

}  // namespace laplace
