#include "kdv/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kdv/checks.hpp"

namespace kdv {

QuadratureSpectrum QuadratureConfig::spectrum() const {
    return QuadratureSpectrum::gauss(s_max, nodes, gaussian_density(amplitude, width));
}

namespace {

using json = nlohmann::json;

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    for (const auto& [key, value] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
    }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const json& field(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) throw ConfigError(join(path, key), "missing");
    return j.at(key);
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    return j.get<double>();
}

double positive(const json& j, const std::string& path) {
    const double v = number(j, path);
    if (!(v > 0.0)) throw ConfigError(path, "must be positive");
    return v;
}

int integer(const json& j, const std::string& path, int min) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    const auto v = j.get<long long>();
    if (v < min) throw ConfigError(path, "must be at least " + std::to_string(min));
    return static_cast<int>(v);
}

std::vector<double> numbers(const json& j, const std::string& path, bool require_positive) {
    if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        out.push_back(require_positive ? positive(j[i], p) : number(j[i], p));
    }
    return out;
}

template <class F>
auto validated(const std::string& path, F&& build) {
    try {
        return build();
    } catch (const ConfigError&) {
        throw;
    } catch (const InvalidArgument& e) {
        throw ConfigError(path, e.what());
    }
}

SolitonSpec parse_soliton(const json& j, const std::string& path) {
    only_keys(j, path, {"k", "b_abs", "c"});
    const auto k = numbers(field(j, path, "k"), join(path, "k"), true);
    if (j.contains("b_abs") == j.contains("c")) throw ConfigError(path, "give exactly one of b_abs and c");
    const bool by_c = j.contains("c");
    const std::string key = by_c ? "c" : "b_abs";
    const auto amp = numbers(j.at(key), join(path, key), true);
    if (amp.size() != k.size()) throw ConfigError(join(path, key), "length differs from k");
    return validated(path, [&] {
        if (by_c) return SolitonSpec::from_weights(k, amp);
        SolitonSpec s{k, std::vector<Complex>(amp.begin(), amp.end())};
        s.validate();
        return s;
    });
}

DiscreteSpectrum parse_discrete(const json& j, const std::string& path) {
    only_keys(j, path, {"k", "b_abs", "flavor", "period"});
    DiscreteSpectrum s;
    s.k = numbers(field(j, path, "k"), join(path, "k"), false);
    const auto b = numbers(field(j, path, "b_abs"), join(path, "b_abs"), false);
    for (std::size_t i = 0; i < b.size(); ++i)
        if (b[i] < 0.0) throw ConfigError(join(path, "b_abs") + "[" + std::to_string(i) + "]", "must be non-negative");
    if (b.size() != s.k.size()) throw ConfigError(join(path, "b_abs"), "length differs from k");
    s.b.assign(b.begin(), b.end());
    const std::string flavor = j.value("flavor", std::string("almost_periodic"));
    if (flavor == "periodic") {
        s.flavor = Periodic{positive(field(j, path, "period"), join(path, "period"))};
    } else if (flavor == "almost_periodic") {
        if (j.contains("period")) throw ConfigError(join(path, "period"), "only valid with flavor periodic");
    } else {
        throw ConfigError(join(path, "flavor"), "expected periodic or almost_periodic");
    }
    validated(path, [&] {
        s.validate();
        return 0;
    });
    return s;
}

QuadratureConfig parse_quadrature(const json& j, const std::string& path) {
    only_keys(j, path, {"s_max", "nodes", "density"});
    QuadratureConfig q;
    q.s_max = positive(field(j, path, "s_max"), join(path, "s_max"));
    q.nodes = integer(field(j, path, "nodes"), join(path, "nodes"), 1);
    const std::string dp = join(path, "density");
    const json& d = field(j, path, "density");
    only_keys(d, dp, {"type", "amplitude", "width"});
    if (field(d, dp, "type") != "gaussian") throw ConfigError(join(dp, "type"), "only gaussian is supported");
    q.amplitude = number(field(d, dp, "amplitude"), join(dp, "amplitude"));
    q.width = positive(field(d, dp, "width"), join(dp, "width"));
    return q;
}

EvolutionConfig parse_evolution(const json& j, const std::string& path) {
    only_keys(j, path, {"k0", "M", "p0", "t_end", "steps", "substeps", "enforce_conservation"});
    EvolutionConfig e;
    e.k0 = positive(field(j, path, "k0"), join(path, "k0"));
    e.M = integer(field(j, path, "M"), join(path, "M"), 1);
    e.p0 = numbers(field(j, path, "p0"), join(path, "p0"), false);
    if (e.p0.size() != static_cast<std::size_t>(2 * e.M))
        throw ConfigError(join(path, "p0"), "expected " + std::to_string(2 * e.M) + " entries ordered -M..-1, 1..M");
    for (std::size_t i = 0; i < e.p0.size(); ++i)
        if (e.p0[i] < 0.0) throw ConfigError(join(path, "p0") + "[" + std::to_string(i) + "]", "must be non-negative");
    e.t_end = positive(field(j, path, "t_end"), join(path, "t_end"));
    e.steps = integer(field(j, path, "steps"), join(path, "steps"), 1);
    if (j.contains("substeps")) e.substeps = integer(j.at("substeps"), join(path, "substeps"), 1);
    if (j.contains("enforce_conservation")) {
        if (!j.at("enforce_conservation").is_boolean())
            throw ConfigError(join(path, "enforce_conservation"), "expected a boolean");
        e.enforce_conservation = j.at("enforce_conservation").get<bool>();
    }
    return e;
}

Grid2D parse_grid(const json& j, const std::string& path) {
    only_keys(j, path, {"x_min", "x_max", "nx", "t_min", "t_max", "nt"});
    Grid2D g;
    g.x_min = number(field(j, path, "x_min"), join(path, "x_min"));
    g.x_max = number(field(j, path, "x_max"), join(path, "x_max"));
    g.nx = integer(field(j, path, "nx"), join(path, "nx"), 2);
    g.t_min = number(field(j, path, "t_min"), join(path, "t_min"));
    g.t_max = number(field(j, path, "t_max"), join(path, "t_max"));
    g.nt = integer(field(j, path, "nt"), join(path, "nt"), 1);
    if (!(g.x_max > g.x_min)) throw ConfigError(join(path, "x_max"), "must exceed x_min");
    if (g.nt > 1 && !(g.t_max > g.t_min)) throw ConfigError(join(path, "t_max"), "must exceed t_min");
    return g;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", e.what());
    }
    only_keys(root, "", {"vessel", "grid", "checks", "output", "seed"});
    RunConfig cfg;
    if (root.contains("vessel")) {
        const json& v = root.at("vessel");
        only_keys(v, "vessel", {"soliton", "discrete", "quadrature", "evolution"});
        if (v.size() != 1) throw ConfigError("vessel", "expected exactly one of soliton, discrete, quadrature, evolution");
        const auto& [kind, body] = *v.items().begin();
        const std::string path = "vessel." + kind;
        if (kind == "soliton") cfg.vessel = parse_soliton(body, path);
        else if (kind == "discrete") cfg.vessel = parse_discrete(body, path);
        else if (kind == "quadrature") cfg.vessel = parse_quadrature(body, path);
        else cfg.vessel = parse_evolution(body, path);
    }
    if (root.contains("grid")) cfg.grid = parse_grid(root.at("grid"), "grid");
    if (root.contains("checks")) {
        const json& c = root.at("checks");
        if (!c.is_array()) throw ConfigError("checks", "expected an array");
        const auto& known = check_names();
        for (std::size_t i = 0; i < c.size(); ++i) {
            const std::string path = "checks[" + std::to_string(i) + "]";
            only_keys(c[i], path, {"name", "tolerance"});
            const json& n = field(c[i], path, "name");
            if (!n.is_string()) throw ConfigError(join(path, "name"), "expected a string");
            CheckSelection sel{n.get<std::string>(), std::nullopt};
            if (std::find(known.begin(), known.end(), sel.name) == known.end())
                throw ConfigError(join(path, "name"), "unknown check '" + sel.name + "'");
            if (c[i].contains("tolerance")) sel.tolerance = positive(c[i].at("tolerance"), join(path, "tolerance"));
            cfg.checks.push_back(std::move(sel));
        }
    }
    if (root.contains("output")) {
        const json& o = root.at("output");
        only_keys(o, "output", {"path", "format"});
        if (o.contains("path")) {
            if (!o.at("path").is_string()) throw ConfigError("output.path", "expected a string");
            cfg.output_path = o.at("path").get<std::string>();
        }
        if (o.contains("format")) {
            const json& f = o.at("format");
            if (f != "csv" && f != "json") throw ConfigError("output.format", "expected csv or json");
            cfg.format = f.get<std::string>();
        }
    }
    if (root.contains("seed")) {
        const json& s = root.at("seed");
        if (!s.is_number_unsigned()) throw ConfigError("seed", "expected a non-negative integer");
        cfg.seed = s.get<std::uint64_t>();
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open configuration file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace kdv
