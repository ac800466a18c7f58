#pragma once

// JSON problem configuration:
//
// {
//   "domain": "exterior" | "bounded",            default "exterior"
//   "source": [x, y] | null,                      default [0, 0] for exterior, null for bounded
//   "components": [ { "kind": "disk", "center": [x, y], "radius": r,
//                     "value": g, "role": "inner" | "outer" },
//                   { "kind": "slit", "center": [x, y], "halfspan": [x, y], "value": g } ],
//   "degree": N | [N_1, ..],                      default 10
//   "npts": K | [K_1, ..],                        default max(32, 8 N) per component
//   "scaled": bool,                               default true
//   "window": [x0, x1, y0, y1],                   default padded bounding box
//   "grid": n,                                    contour grid size, default 200
//   "levels": [..],                               default: automatic
//   "streamlines": { "count": n, "eps": e },      default 32 seeds for problems with a source
//   "outputs": { "report": path, "csv": path, "svg": path },
//   "eval": [[x, y], ..]
// }

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "laplace/errors.hpp"
#include "laplace/field.hpp"
#include "laplace/solver.hpp"

namespace laplace {

struct ComponentConfig {
    BoundaryComponent component;
    double value = 0.0;
    bool operator==(const ComponentConfig&) const = default;
};

struct StreamlineRequest {
    int count = 0;
    double eps = 0.0;
    bool operator==(const StreamlineRequest&) const = default;
};

struct OutputPaths {
    std::string report;
    std::string csv;
    std::string svg;
    bool operator==(const OutputPaths&) const = default;
};

struct ProblemConfig {
    DomainKind domain = DomainKind::ExteriorUnbounded;
    std::optional<Point> source;
    std::vector<ComponentConfig> components;
    std::vector<int> degrees;  // resolved, one per component
    std::vector<int> npts;     // resolved, one per component
    bool scaled = true;
    Window window;
    int grid = 200;
    std::optional<std::vector<double>> levels;
    std::optional<StreamlineRequest> streamlines;
    OutputPaths outputs;
    std::vector<Point> eval;

    bool operator==(const ProblemConfig&) const = default;

    Problem problem() const {
        std::vector<BoundaryComponent> comps;
        std::vector<BoundaryData> data;
        for (const auto& c : components) {
            comps.push_back(c.component);
            data.emplace_back(c.value);
        }
        return Problem(std::move(comps), domain, source, std::move(data));
    }

    ExpansionSpec spec() const {
        ExpansionSpec s;
        s.degrees = degrees;
        s.scaled = scaled;
        for (std::size_t j = 0; j < components.size(); ++j)
            if (components[j].component.is_outer()) s.outer_degree = degrees[j];
        return s;
    }
};

namespace detail {

using nlohmann::json;

inline void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(path, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items())
        if (!ok.count(key)) throw ConfigError(path.empty() ? key : path + "." + key, "unknown key '" + key + "'");
}

inline double get_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path, "expected a finite number");
    return d;
}

inline int get_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
    return v.get<int>();
}

inline Point get_point(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) throw ConfigError(path, "expected [x, y]");
    return {get_number(v[0], path + "[0]"), get_number(v[1], path + "[1]")};
}

inline const json& require(const json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key)) throw ConfigError(path + "." + key, "missing required field");
    return obj.at(key);
}

inline std::vector<int> per_component(const json& v, const std::string& path, std::size_t n) {
    if (v.is_array()) {
        if (v.size() != n) throw ConfigError(path, "expected one entry per component");
        std::vector<int> out;
        for (std::size_t i = 0; i < n; ++i) out.push_back(get_int(v[i], path + "[" + std::to_string(i) + "]"));
        return out;
    }
    return std::vector<int>(n, get_int(v, path));
}

}  // namespace detail

/// Parses and validates a configuration. Throws ConfigError naming the
/// offending field, or GeometryError naming the offending components.
inline ProblemConfig parse_problem_config(const std::string& text) {
    using nlohmann::json;
    using namespace detail;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
    check_keys(doc, "", {"domain", "source", "components", "degree", "npts", "scaled", "window", "grid", "levels",
                         "streamlines", "outputs", "eval"});
    ProblemConfig cfg;

    if (doc.contains("domain")) {
        const auto& d = doc["domain"];
        if (d == "exterior") cfg.domain = DomainKind::ExteriorUnbounded;
        else if (d == "bounded") cfg.domain = DomainKind::Bounded;
        else throw ConfigError("domain", "expected \"exterior\" or \"bounded\"");
    }

    const auto& comps = require(doc, "components", "");
    if (!comps.is_array() || comps.empty()) throw ConfigError("components", "expected a non-empty array");
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const std::string path = "components[" + std::to_string(i) + "]";
        const auto& c = comps[i];
        if (!c.is_object()) throw ConfigError(path, "expected an object");
        const auto& kind = require(c, "kind", path);
        ComponentConfig cc;
        if (kind == "disk") {
            check_keys(c, path, {"kind", "center", "radius", "value", "role"});
            const Point center = get_point(require(c, "center", path), path + ".center");
            const double r = get_number(require(c, "radius", path), path + ".radius");
            if (!(r > 0.0)) throw ConfigError(path + ".radius", "must be positive");
            Role role = Role::Inner;
            if (c.contains("role")) {
                if (c["role"] == "outer") role = Role::Outer;
                else if (c["role"] != "inner") throw ConfigError(path + ".role", "expected \"inner\" or \"outer\"");
            }
            cc.component = BoundaryComponent::disk(center, r, role);
        } else if (kind == "slit") {
            check_keys(c, path, {"kind", "center", "halfspan", "value", "role"});
            const Point center = get_point(require(c, "center", path), path + ".center");
            const Point h = get_point(require(c, "halfspan", path), path + ".halfspan");
            if (h == Point{}) throw ConfigError(path + ".halfspan", "must be nonzero");
            if (c.contains("role") && c["role"] != "inner") throw ConfigError(path + ".role", "slits must be inner");
            cc.component = BoundaryComponent::slit(center, h);
        } else {
            throw ConfigError(path + ".kind", "expected \"disk\" or \"slit\"");
        }
        if (c.contains("value")) cc.value = get_number(c["value"], path + ".value");
        cfg.components.push_back(cc);
    }
    const std::size_t n = cfg.components.size();

    if (!doc.contains("source")) {
        if (cfg.domain == DomainKind::ExteriorUnbounded) cfg.source = Point{};
    } else if (!doc["source"].is_null()) {
        cfg.source = get_point(doc["source"], "source");
    }

    cfg.degrees = doc.contains("degree") ? per_component(doc["degree"], "degree", n) : std::vector<int>(n, 10);
    for (std::size_t j = 0; j < n; ++j)
        if (cfg.degrees[j] < 0) throw ConfigError("degree", "must be non-negative");
    if (doc.contains("npts")) {
        cfg.npts = per_component(doc["npts"], "npts", n);
    } else {
        for (int d : cfg.degrees) cfg.npts.push_back(std::max(32, 8 * d));
    }
    for (std::size_t j = 0; j < n; ++j)
        if (cfg.npts[j] < 2 * cfg.degrees[j] + 2)
            throw ConfigError("npts", "component " + std::to_string(j) + " needs at least 2N+2 samples");

    if (doc.contains("scaled")) {
        if (!doc["scaled"].is_boolean()) throw ConfigError("scaled", "expected a boolean");
        cfg.scaled = doc["scaled"].get<bool>();
    }

    // Geometry is validated here so diagnostics name the components.
    const Problem problem = cfg.problem();

    if (doc.contains("window")) {
        const auto& w = doc["window"];
        if (!w.is_array() || w.size() != 4) throw ConfigError("window", "expected [x0, x1, y0, y1]");
        cfg.window = {get_number(w[0], "window[0]"), get_number(w[1], "window[1]"), get_number(w[2], "window[2]"),
                      get_number(w[3], "window[3]")};
        if (!cfg.window.valid()) throw ConfigError("window", "expected x0 < x1 and y0 < y1");
    } else {
        cfg.window = default_window(problem);
    }

    if (doc.contains("grid")) {
        cfg.grid = get_int(doc["grid"], "grid");
        if (cfg.grid < 2) throw ConfigError("grid", "must be at least 2");
    }

    if (doc.contains("levels")) {
        const auto& l = doc["levels"];
        if (!l.is_array()) throw ConfigError("levels", "expected an array of numbers");
        std::vector<double> levels;
        for (std::size_t i = 0; i < l.size(); ++i) levels.push_back(get_number(l[i], "levels[" + std::to_string(i) + "]"));
        cfg.levels = levels;
    }

    if (doc.contains("streamlines")) {
        const auto& s = doc["streamlines"];
        check_keys(s, "streamlines", {"count", "eps"});
        StreamlineRequest req;
        req.count = get_int(require(s, "count", "streamlines"), "streamlines.count");
        if (req.count < 0) throw ConfigError("streamlines.count", "must be non-negative");
        req.eps = s.contains("eps") ? get_number(s["eps"], "streamlines.eps") : 1e-2;
        if (!(req.eps > 0.0)) throw ConfigError("streamlines.eps", "must be positive");
        if (req.count > 0 && !cfg.source) throw ConfigError("streamlines", "streamlines require a source");
        cfg.streamlines = req;
    }

    if (doc.contains("outputs")) {
        const auto& o = doc["outputs"];
        check_keys(o, "outputs", {"report", "csv", "svg"});
        auto str = [&](const char* key) -> std::string {
            if (!o.contains(key)) return {};
            if (!o[key].is_string()) throw ConfigError(std::string("outputs.") + key, "expected a path string");
            return o[key].get<std::string>();
        };
        cfg.outputs = {str("report"), str("csv"), str("svg")};
    }

    if (doc.contains("eval")) {
        const auto& e = doc["eval"];
        if (!e.is_array()) throw ConfigError("eval", "expected an array of [x, y] points");
        for (std::size_t i = 0; i < e.size(); ++i) cfg.eval.push_back(get_point(e[i], "eval[" + std::to_string(i) + "]"));
    }
    return cfg;
}

/// Fully resolved JSON form of a configuration; parses back to an equal config.
inline nlohmann::json config_to_json(const ProblemConfig& cfg) {
    using nlohmann::json;
    auto pt = [](Point z) { return json::array({z.real(), z.imag()}); };
    json doc;
    doc["domain"] = cfg.domain == DomainKind::Bounded ? "bounded" : "exterior";
    doc["source"] = cfg.source ? pt(*cfg.source) : json(nullptr);
    json comps = json::array();
    for (const auto& c : cfg.components) {
        json o;
        o["kind"] = c.component.is_disk() ? "disk" : "slit";
        o["center"] = pt(c.component.center);
        if (c.component.is_disk()) {
            o["radius"] = c.component.radius;
            o["role"] = c.component.is_outer() ? "outer" : "inner";
        } else {
            o["halfspan"] = pt(c.component.halfspan);
        }
        o["value"] = c.value;
        comps.push_back(o);
    }
    doc["components"] = comps;
    doc["degree"] = cfg.degrees;
    doc["npts"] = cfg.npts;
    doc["scaled"] = cfg.scaled;
    doc["window"] = json::array({cfg.window.x0, cfg.window.x1, cfg.window.y0, cfg.window.y1});
    doc["grid"] = cfg.grid;
    if (cfg.levels) doc["levels"] = *cfg.levels;
    if (cfg.streamlines) doc["streamlines"] = {{"count", cfg.streamlines->count}, {"eps", cfg.streamlines->eps}};
    json out = json::object();
    if (!cfg.outputs.report.empty()) out["report"] = cfg.outputs.report;
    if (!cfg.outputs.csv.empty()) out["csv"] = cfg.outputs.csv;
    if (!cfg.outputs.svg.empty()) out["svg"] = cfg.outputs.svg;
    doc["outputs"] = out;
    json ev = json::array();
    for (Point z : cfg.eval) ev.push_back(pt(z));
    doc["eval"] = ev;
    return doc;
}

}  // namespace laplace
