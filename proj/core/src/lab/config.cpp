#include "bikelab/lab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bikelab/errors.hpp"
#include "bikelab/lab/csv.hpp"

namespace bikelab::lab {

using nlohmann::json;

namespace {

Polygon polygon_from_json_value(const json& arr) {
    if (!arr.is_array() || arr.size() < 3) {
        throw ConfigError("polygon must be a JSON array of at least 3 [x, y] pairs");
    }
    std::vector<Point2> vertices;
    vertices.reserve(arr.size());
    for (const json& v : arr) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            throw ConfigError("polygon vertex must be a [x, y] number pair");
        }
        vertices.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    try {
        return Polygon(std::move(vertices));
    } catch (const Error& e) {
        throw ConfigError(std::string("invalid polygon: ") + e.what());
    }
}

std::vector<std::array<double, 2>> seeds_from_json_value(const json& arr) {
    if (!arr.is_array()) throw ConfigError("seeds must be a JSON array of [alpha, beta] pairs");
    std::vector<std::array<double, 2>> seeds;
    for (const json& v : arr) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            throw ConfigError("seed must be an [alpha, beta] number pair");
        }
        seeds.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    return seeds;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("failed to parse " + path.string() + ": " + e.what());
    }
    return doc;
}

const std::set<std::string> kKinds = {"orbit",  "quad-orbit", "flow",    "phase-portrait",
                                      "domain", "period6",    "conics",  "verify"};

}  // namespace

double ExperimentConfig::resolve_t() const {
    if (t) {
        if (!(*t > 0.0)) throw ConfigError("t must be positive");
        return *t;
    }
    if (t_rel) {
        if (!polygon) throw ConfigError("t_rel needs a polygon to scale against");
        if (!(*t_rel > 0.0)) throw ConfigError("t_rel must be positive");
        return *t_rel * polygon->min_side();
    }
    throw ConfigError("config needs t or t_rel");
}

std::uint64_t ExperimentConfig::hash() const {
    std::ostringstream os;
    os << kind << '|' << steps << '|' << duration << '|' << iters << '|' << grid << '|'
       << max_steps << '|' << t_min << '|' << t_max << '|' << t_step << '|' << rng_seed << '|';
    if (t) os << "t=" << format_double(*t) << '|';
    if (t_rel) os << "tr=" << format_double(*t_rel) << '|';
    if (polygon) os << polygon_to_json(*polygon) << '|';
    for (const auto& s : shape_seeds) {
        os << format_double(s[0]) << ',' << format_double(s[1]) << ';';
    }
    os << format_double(tolerances.fixed_point_tol) << '|' << tolerances.fixed_point_max_iters
       << '|' << format_double(tolerances.newton_tol) << '|' << tolerances.newton_max_iters << '|'
       << format_double(tolerances.fd_step) << '|' << format_double(tolerances.ode_step);
    return fnv1a64(os.str());
}

ExperimentConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("failed to parse config: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");

    ExperimentConfig cfg;
    if (!doc.contains("kind") || !doc["kind"].is_string()) {
        throw ConfigError("config needs a string field 'kind'");
    }
    cfg.kind = doc["kind"].get<std::string>();
    if (!kKinds.count(cfg.kind)) throw ConfigError("unknown experiment kind '" + cfg.kind + "'");

    const auto get_num = [&](const char* key, double& out) {
        if (doc.contains(key)) {
            if (!doc[key].is_number()) throw ConfigError(std::string(key) + " must be a number");
            out = doc[key].get<double>();
        }
    };
    const auto get_int = [&](const char* key, int& out) {
        if (doc.contains(key)) {
            if (!doc[key].is_number_integer()) {
                throw ConfigError(std::string(key) + " must be an integer");
            }
            out = doc[key].get<int>();
        }
    };

    if (doc.contains("polygon")) cfg.polygon = polygon_from_json_value(doc["polygon"]);
    if (doc.contains("polygon_file")) {
        const auto path = base_dir / doc["polygon_file"].get<std::string>();
        cfg.polygon = polygon_from_json_value(read_json_file(path));
    }
    if (doc.contains("seeds")) cfg.shape_seeds = seeds_from_json_value(doc["seeds"]);
    if (doc.contains("seeds_file")) {
        const auto path = base_dir / doc["seeds_file"].get<std::string>();
        cfg.shape_seeds = seeds_from_json_value(read_json_file(path));
    }

    if (doc.contains("t")) {
        double v = 0;
        get_num("t", v);
        cfg.t = v;
    }
    if (doc.contains("t_rel")) {
        double v = 0;
        get_num("t_rel", v);
        cfg.t_rel = v;
    }
    get_int("steps", cfg.steps);
    get_num("duration", cfg.duration);
    get_int("iters", cfg.iters);
    get_int("grid", cfg.grid);
    get_int("max_steps", cfg.max_steps);
    get_num("t_min", cfg.t_min);
    get_num("t_max", cfg.t_max);
    get_num("t_step", cfg.t_step);

    if (doc.contains("rng_seed")) {
        if (!doc["rng_seed"].is_number_unsigned() && !doc["rng_seed"].is_number_integer()) {
            throw ConfigError("rng_seed must be an integer");
        }
        cfg.rng_seed = doc["rng_seed"].get<std::uint64_t>();
    }

    if (doc.contains("tolerances")) {
        const json& t = doc["tolerances"];
        if (!t.is_object()) throw ConfigError("tolerances must be an object");
        ToleranceConfig& tc = cfg.tolerances;
        if (t.contains("fixed_point_tol")) tc.fixed_point_tol = t["fixed_point_tol"].get<double>();
        if (t.contains("fixed_point_max_iters")) {
            tc.fixed_point_max_iters = t["fixed_point_max_iters"].get<int>();
        }
        if (t.contains("newton_tol")) tc.newton_tol = t["newton_tol"].get<double>();
        if (t.contains("newton_max_iters")) tc.newton_max_iters = t["newton_max_iters"].get<int>();
        if (t.contains("fd_step")) tc.fd_step = t["fd_step"].get<double>();
        if (t.contains("ode_step")) tc.ode_step = t["ode_step"].get<double>();
        if (tc.fixed_point_tol <= 0 || tc.newton_tol <= 0 || tc.fd_step <= 0 ||
            tc.ode_step <= 0 || tc.fixed_point_max_iters <= 0 || tc.newton_max_iters <= 0) {
            throw ConfigError("tolerances must be positive");
        }
    }

    // Input files resolve against the config's directory; output paths are
    // taken as given (relative to the working directory).
    if (doc.contains("output")) {
        const json& o = doc["output"];
        if (!o.is_object()) throw ConfigError("output must be an object");
        if (o.contains("csv")) cfg.out.csv = o["csv"].get<std::string>();
        if (o.contains("svg")) cfg.out.svg = o["svg"].get<std::string>();
        if (o.contains("json")) cfg.out.json = o["json"].get<std::string>();
    }

    if (doc.contains("figure")) {
        const json& f = doc["figure"];
        if (f.contains("width")) cfg.figure.width = f["width"].get<int>();
        if (f.contains("height")) cfg.figure.height = f["height"].get<int>();
        if (f.contains("point_radius")) cfg.figure.point_radius = f["point_radius"].get<double>();
        if (f.contains("colors")) {
            cfg.figure.color_cycle.clear();
            for (const json& c : f["colors"]) cfg.figure.color_cycle.push_back(c.get<std::string>());
        }
        cfg.figure.validate();
    }

    // Kind-specific requirements.
    if (cfg.kind == "orbit" || cfg.kind == "quad-orbit" || cfg.kind == "flow") {
        if (!cfg.polygon) throw ConfigError(cfg.kind + " needs a polygon");
    }
    if (cfg.kind == "quad-orbit" && cfg.polygon->size() % 2 != 0) {
        throw ConfigError("quad-orbit needs an even-gon");
    }
    if (cfg.kind == "orbit" || cfg.kind == "quad-orbit") {
        if (cfg.steps <= 0) throw ConfigError("steps must be positive");
        cfg.resolve_t();
    }
    if (cfg.kind == "phase-portrait") {
        if (cfg.shape_seeds.empty()) throw ConfigError("phase-portrait needs seeds");
        if (!cfg.t) throw ConfigError("phase-portrait needs an absolute t (unit-area scale)");
    }
    if (cfg.kind == "domain") {
        if (!cfg.t) throw ConfigError("domain needs an absolute t (unit-area scale)");
        if (cfg.grid < 2) throw ConfigError("grid must be at least 2");
        if (cfg.max_steps <= 0) throw ConfigError("max_steps must be positive");
    }
    if (cfg.kind == "period6") {
        if (!(cfg.t_step > 0.0) || !(cfg.t_max >= cfg.t_min)) {
            throw ConfigError("period6 needs t_min <= t_max and t_step > 0");
        }
    }
    if (cfg.kind == "conics") {
        if (!cfg.polygon) throw ConfigError("conics needs a triangle polygon");
        if (cfg.polygon->size() != 3) throw ConfigError("conics needs a 3-gon");
        cfg.resolve_t();
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path().empty() ? "." : path.parent_path());
}

std::string polygon_to_json(const Polygon& p) {
    std::string s = "[";
    for (int i = 0; i < p.size(); ++i) {
        if (i) s += ',';
        s += '[';
        s += format_double(p[i].x);
        s += ',';
        s += format_double(p[i].y);
        s += ']';
    }
    s += ']';
    return s;
}

Polygon polygon_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("failed to parse polygon: ") + e.what());
    }
    return polygon_from_json_value(doc);
}

}  // namespace bikelab::lab
