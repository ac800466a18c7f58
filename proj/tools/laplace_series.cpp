// laplace_series: solve Laplace problems bounded by disks and slits from a
// JSON configuration and write reports, CSV polylines, and SVG plots.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "laplace/laplace.hpp"

namespace fs = std::filesystem;
using namespace laplace;

namespace {

struct CommonOptions {
    std::string config;
    std::optional<int> degree;
    std::optional<int> npts;
    bool no_scale = false;
    std::string outdir;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config, "problem configuration (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--degree", o.degree, "series degree N for every component (resets npts to max(32, 8N))")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--npts", o.npts, "boundary samples per component");
    cmd->add_flag("--no-scale", o.no_scale, "use unscaled powers (z - c)^-k for disks");
    cmd->add_option("-o,--output-dir", o.outdir, "directory for output files");
}

ProblemConfig load_config(const CommonOptions& o) {
    std::ifstream in(o.config, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + o.config);
    std::ostringstream text;
    text << in.rdbuf();
    ProblemConfig cfg = parse_problem_config(text.str());
    const std::size_t n = cfg.components.size();
    if (o.degree) {
        cfg.degrees.assign(n, *o.degree);
        cfg.npts.assign(n, std::max(32, 8 * *o.degree));
    }
    if (o.npts) cfg.npts.assign(n, *o.npts);
    for (std::size_t j = 0; j < n; ++j)
        if (cfg.npts[j] < 2 * cfg.degrees[j] + 2)
            throw ConfigError("npts", "component " + std::to_string(j) + " needs at least 2N+2 samples");
    if (o.no_scale) cfg.scaled = false;
    return cfg;
}

Solution solve_config(const ProblemConfig& cfg) { return solve_problem(cfg.problem(), cfg.spec(), cfg.npts); }

/// Output location: `-o dir` wins, then the configured path, then the working directory.
fs::path output_path(const CommonOptions& o, const std::string& configured, const std::string& name) {
    if (!o.outdir.empty()) return fs::path(o.outdir) / name;
    if (!configured.empty()) return configured;
    return name;
}

void prepare_directory(const CommonOptions& o) {
    if (o.outdir.empty()) return;
    std::error_code ec;
    fs::create_directories(o.outdir, ec);
    if (ec || !fs::is_directory(o.outdir)) throw std::runtime_error("cannot create output directory " + o.outdir);
}

void print_certificate(const Solution& sol) {
    std::cout << "residual " << format_sig13(sol.residual) << "\n";
    const auto m = harmonic_measures(sol);
    if (!m.probabilistic) return;
    for (std::size_t j = 0, k = 0; j < sol.problem.components().size(); ++j) {
        if (sol.problem.components()[j].is_outer()) continue;
        std::cout << "measure " << j << " " << format_sig13(m.measures[k++]) << "\n";
    }
    std::cout << "measure total " << format_sig13(m.total) << "\n";
}

std::vector<Polyline> contours_for(const ProblemConfig& cfg, const Solution& sol) {
    const auto levels = cfg.levels ? *cfg.levels : automatic_levels(sol, cfg.window);
    return extract_contours(sol, levels, cfg.window, cfg.grid);
}

std::vector<Polyline> streamlines_for(const ProblemConfig& cfg, const Solution& sol) {
    if (!sol.problem.source()) return {};
    const StreamlineRequest req = cfg.streamlines.value_or(StreamlineRequest{32, 1e-2});
    if (req.count == 0) return {};
    StreamlineOptions opts;
    opts.window = cfg.window;
    return streamline_fan(sol, req.count, req.eps, opts);
}

std::vector<Polyline> concat(std::vector<Polyline> a, const std::vector<Polyline>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

int cmd_solve(const CommonOptions& o) {
    const auto cfg = load_config(o);
    const auto sol = solve_config(cfg);
    const auto eq = contours_for(cfg, sol);
    const auto st = streamlines_for(cfg, sol);
    const auto report = solution_report(sol, cfg.eval);
    print_certificate(sol);
    for (const auto& v : report["eval"])
        std::cout << "u(" << format_sig13(v["x"]) << ", " << format_sig13(v["y"]) << ") = " << format_sig13(v["u"])
                  << "\n";

    prepare_directory(o);
    std::vector<std::pair<fs::path, std::string>> files;
    files.emplace_back(output_path(o, cfg.outputs.report, "report.json"), report.dump(2) + "\n");
    if (o.outdir.empty() && !cfg.outputs.csv.empty()) {
        files.emplace_back(cfg.outputs.csv, polylines_csv(concat(eq, st)));
    } else {
        files.emplace_back(output_path(o, "", "equipotentials.csv"), polylines_csv(eq));
        files.emplace_back(output_path(o, "", "streamlines.csv"), polylines_csv(st));
    }
    files.emplace_back(output_path(o, cfg.outputs.svg, "field.svg"),
                       emit_svg(concat(eq, st), sol.problem.components(), cfg.window));
    write_files_atomically(files);
    return 0;
}

int cmd_contours(const CommonOptions& o) {
    const auto cfg = load_config(o);
    const auto sol = solve_config(cfg);
    const auto eq = contours_for(cfg, sol);
    std::cout << "residual " << format_sig13(sol.residual) << "\n" << "contours " << eq.size() << "\n";
    prepare_directory(o);
    write_files_atomically({{output_path(o, cfg.outputs.csv, "equipotentials.csv"), polylines_csv(eq)},
                            {output_path(o, cfg.outputs.svg, "equipotentials.svg"),
                             emit_svg(eq, sol.problem.components(), cfg.window)}});
    return 0;
}

int cmd_streamlines(const CommonOptions& o) {
    const auto cfg = load_config(o);
    if (!cfg.source) throw ConfigError("source", "streamlines require a source");
    const auto sol = solve_config(cfg);
    const auto st = streamlines_for(cfg, sol);
    std::size_t hits = 0;
    for (const auto& l : st) hits += l.termination == Termination::HitBoundary;
    std::cout << "residual " << format_sig13(sol.residual) << "\n"
              << "streamlines " << st.size() << " hit_boundary " << hits << "\n";
    prepare_directory(o);
    write_files_atomically({{output_path(o, cfg.outputs.csv, "streamlines.csv"), polylines_csv(st)},
                            {output_path(o, cfg.outputs.svg, "streamlines.svg"),
                             emit_svg(st, sol.problem.components(), cfg.window)}});
    return 0;
}

int cmd_eval(const CommonOptions& o, const std::vector<std::pair<double, double>>& at) {
    const auto cfg = load_config(o);
    const auto sol = solve_config(cfg);
    std::vector<Point> points;
    for (const auto& [x, y] : at) points.emplace_back(x, y);
    if (points.empty()) points = cfg.eval;
    if (points.empty()) throw ConfigError("eval", "no evaluation points (use --at x,y or the eval key)");
    std::cout << "residual " << format_sig13(sol.residual) << "\n";
    for (Point z : points) {
        if (!sol.problem.contains(z)) throw DomainError("point (" + format_sig13(z.real()) + ", " +
                                                        format_sig13(z.imag()) + ") is outside the domain");
        std::cout << "u(" << format_sig13(z.real()) << ", " << format_sig13(z.imag())
                  << ") = " << format_sig13(eval_expansion(sol.expansion, z)) << "\n";
    }
    return 0;
}

int cmd_cantor(int m, bool symmetry, const std::string& outdir) {
    const auto sol = cantor_solve(m, symmetry);
    const auto all = harmonic_measures(sol);
    const std::size_t half = all.measures.size() / 2;
    const std::vector<double> right(all.measures.begin() + static_cast<std::ptrdiff_t>(half), all.measures.end());

    nlohmann::json doc;
    doc["m"] = m;
    doc["degree"] = cantor_degree(m);
    doc["symmetry"] = symmetry;
    doc["residual"] = round_sig13(sol.residual);
    doc["constant"] = round_sig13(sol.expansion.constant);
    nlohmann::json rv = nlohmann::json::array(), av = nlohmann::json::array();
    for (double v : right) rv.push_back(round_sig13(v));
    for (double v : all.measures) av.push_back(round_sig13(v));
    doc["measures_right_inside_out"] = rv;
    doc["measures"] = av;
    doc["total"] = round_sig13(all.total);
    std::cout << "residual " << format_sig13(sol.residual) << "\n";
    std::cout << "measures";
    for (double v : right) std::cout << " " << format_sig13(v);
    std::cout << "\n";
    if (m >= 2) {
        double s = 0.0;
        for (std::size_t i = 0; i < right.size() / 2; ++i) s += right[i];
        doc["inner_half_sum"] = round_sig13(s);
        std::cout << "inner_half_sum " << format_sig13(s) << "\n";
    }

    const fs::path dir = outdir.empty() ? fs::path(".") : fs::path(outdir);
    if (!outdir.empty()) {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create output directory " + outdir);
    }
    write_files_atomically({{dir / ("cantor_m" + std::to_string(m) + ".json"), doc.dump(2) + "\n"}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Series-expansion Laplace solver for domains bounded by disks and slits"};
    app.require_subcommand(1);

    CommonOptions solve_opts, contour_opts, stream_opts, eval_opts;
    auto* solve = app.add_subcommand("solve", "solve and write report, CSV, and SVG");
    add_common(solve, solve_opts);
    auto* contours = app.add_subcommand("contours", "equipotential CSV and SVG");
    add_common(contours, contour_opts);
    auto* streams = app.add_subcommand("streamlines", "streamline fan CSV and SVG");
    add_common(streams, stream_opts);
    auto* eval = app.add_subcommand("eval", "print u at points");
    add_common(eval, eval_opts);
    std::vector<std::pair<double, double>> at;
    eval->add_option("--at", at, "evaluation point x,y (repeatable)")->delimiter(',')->allow_extra_args(false);

    int m = 0;
    bool symmetry = false;
    std::string cantor_dir;
    auto* cantor = app.add_subcommand("cantor", "harmonic measures of a middle-thirds Cantor level");
    cantor->add_option("-m", m, "level (1..12)")->required()->check(CLI::Range(1, 12));
    cantor->add_flag("--symmetry", symmetry, "use the reduced symmetric solve");
    cantor->add_option("-o,--output-dir", cantor_dir, "directory for the measures file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) return cmd_solve(solve_opts);
        if (*contours) return cmd_contours(contour_opts);
        if (*streams) return cmd_streamlines(stream_opts);
        if (*eval) return cmd_eval(eval_opts, at);
        if (*cantor) return cmd_cantor(m, symmetry, cantor_dir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
