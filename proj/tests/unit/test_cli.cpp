#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kdv/checks.hpp"
#include "kdv/cli.hpp"
#include "kdv/config.hpp"

using namespace kdv;

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) { return fs::temp_directory_path() / ("kdvvessel_test_" + name); }

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(std::vector<std::string> args) {
    args.insert(args.begin(), "kdvvessel");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string config_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "";
}

}  // namespace

TEST_SUITE("cli") {
TEST_CASE("config parsing") {
    const RunConfig c = parse_config(R"({
        "vessel": {"soliton": {"k": [1, 2], "c": [1, 0.5]}},
        "grid": {"x_min": -1, "x_max": 1, "nx": 5, "t_min": 0, "t_max": 1, "nt": 3},
        "checks": [{"name": "kdv_residual", "tolerance": 1e-4}],
        "output": {"path": "out.csv", "format": "csv"},
        "seed": 9})");
    const auto& s = std::get<SolitonSpec>(c.vessel);
    CHECK(s.weight(1) == doctest::Approx(0.5));
    CHECK(c.grid->nx == 5);
    CHECK(c.checks.at(0).tolerance == 1e-4);
    CHECK(*c.seed == 9);

    const RunConfig d = parse_config(R"({"vessel": {"discrete": {"k": [1, 2], "b_abs": [1, 1], "flavor": "periodic", "period": 6.283185307179586}}})");
    CHECK(std::holds_alternative<Periodic>(std::get<DiscreteSpectrum>(d.vessel).flavor));
    const RunConfig q = parse_config(R"({"vessel": {"quadrature": {"s_max": 3, "nodes": 16, "density": {"type": "gaussian", "amplitude": 1, "width": 0.5}}}})");
    CHECK(std::get<QuadratureConfig>(q.vessel).spectrum().nodes.size() == 16);
    const RunConfig e = parse_config(R"({"vessel": {"evolution": {"k0": 1, "M": 2, "p0": [1, 1, 1, 1], "t_end": 0.5, "steps": 10}}})");
    CHECK(std::get<EvolutionConfig>(e.vessel).steps == 10);
}

TEST_CASE("config errors carry field paths") {
    CHECK(config_error(R"({"vessel": {"soliton": {"k": [1, -2], "b_abs": [1, 1]}}})") == "vessel.soliton.k[1]");
    CHECK(config_error(R"({"vessel": {"soliton": {"k": [1], "b_abs": [1], "x": 0}}})") == "vessel.soliton.x");
    CHECK(config_error(R"({"vessel": {"soliton": {"k": [1, 1], "b_abs": [1, 1]}}})") == "vessel.soliton");
    CHECK(config_error(R"({"bogus": 1})") == "bogus");
    CHECK(config_error(R"({"checks": [{"name": "nope"}]})") == "checks[0].name");
    CHECK(config_error(R"({"grid": {"x_min": 1, "x_max": 0, "nx": 5, "t_min": 0, "t_max": 1, "nt": 3}})") == "grid.x_max");
    CHECK(config_error(R"({"vessel": {"evolution": {"k0": 1, "M": 2, "p0": [1, 1], "t_end": 1, "steps": 1}}})") ==
          "vessel.evolution.p0");
    CHECK(config_error("{not json") == "<document>");
}

TEST_CASE("soliton field dump") {
    const auto out = scratch("soliton.csv");
    REQUIRE(run({"soliton", "--k", "1", "--b-abs", "1.4142135623730951", "--grid", "-1", "1", "3", "0", "0.5", "2",
                 "--out", out.string()}) == 0);
    const std::string text = read(out);
    std::istringstream lines(text);
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    CHECK(header == "x,t,tau,beta,q");
    CHECK(first.rfind("-1,0,", 0) == 0);
    CHECK(text.find('\r') == std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 7);

    // Deterministic output.
    const auto again = scratch("soliton2.csv");
    run({"soliton", "--k", "1", "--b-abs", "1.4142135623730951", "--grid", "-1", "1", "3", "0", "0.5", "2", "--out",
         again.string()});
    CHECK(read(again) == text);

    // Round-trip precision at the origin: q = -2.
    const auto origin = scratch("origin.csv");
    run({"soliton", "--k", "1", "--b-abs", "1.4142135623730951", "--grid", "0", "1", "2", "0", "0", "1", "--out",
         origin.string()});
    std::istringstream o(read(origin));
    std::string row;
    std::getline(o, row);
    std::getline(o, row);
    const double q = std::stod(row.substr(row.rfind(',') + 1));
    CHECK(q == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("exit codes") {
    const auto bad = scratch("bad.json");
    write(bad, R"({"vessel": {"soliton": {"k": [-1], "b_abs": [1]}}})");
    CHECK(run({"soliton", "--config", bad.string()}) == 2);
    CHECK(run({"unknown"}) == 2);
    CHECK(run({"soliton", "--grid", "0", "1"}) == 2);

    const auto evo = scratch("evo.json");
    write(evo, R"({"vessel": {"evolution": {"k0": 1, "M": 2, "p0": [1, 1, 1, 1], "t_end": 0.5, "steps": 50}}})");
    CHECK(run({"evolve", "--config", evo.string(), "--out", scratch("evo.csv").string()}) == 3);
    write(evo, R"({"vessel": {"evolution": {"k0": 1, "M": 2, "p0": [1, 1, 1, 1], "t_end": 0.5, "steps": 50, "enforce_conservation": false}}})");
    CHECK(run({"evolve", "--config", evo.string(), "--out", scratch("evo.csv").string()}) == 0);

    const auto report = scratch("report.json");
    CHECK(run({"verify", "--check", "moment_recursion", "--check", "gelfand_levitan", "--format", "json", "--seed", "5",
               "--out", report.string()}) == 0);
    const auto j = nlohmann::json::parse(read(report));
    CHECK(j["seed"] == 5);
    REQUIRE(j["checks"].size() == 2);
    for (const auto& c : j["checks"]) {
        CHECK(c.contains("check"));
        CHECK(c.contains("value"));
        CHECK(c.contains("tolerance"));
        CHECK(c["pass"] == true);
        CHECK(c.contains("runtime_ms"));
    }

    const auto tight = scratch("tight.json");
    write(tight, R"({"checks": [{"name": "moment_recursion", "tolerance": 1e-30}]})");
    CHECK(run({"verify", "--config", tight.string(), "--out", scratch("tight.txt").string()}) == 1);
}

TEST_CASE("other subcommands") {
    const auto cfg = scratch("disc.json");
    write(cfg, R"({"vessel": {"discrete": {"k": [1, 2], "b_abs": [1, 1]}},
                   "grid": {"x_min": 0, "x_max": 1, "nx": 5, "t_min": 0, "t_max": 0, "nt": 1}})");
    CHECK(run({"spectral", "--config", cfg.string(), "--out", scratch("spec.csv").string()}) == 0);
    CHECK(run({"transfer", "--config", cfg.string(), "--lambda-re", "2", "--lambda-im", "3", "--out",
               scratch("tr.csv").string()}) == 0);
    CHECK(run({"scatter", "--config", cfg.string(), "--format", "json", "--out", scratch("sc.json").string()}) == 0);
    const auto j = nlohmann::json::parse(read(scratch("sc.json")));
    CHECK(j["rows"].size() == 5);
    CHECK(run({"transfer", "--k", "1", "--b-abs", "1", "--lambda-re", "0", "--lambda-im", "-1", "--out",
               scratch("pole.csv").string()}) == 3);
}
}
