#include "kdv/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kdv/checks.hpp"
#include "kdv/config.hpp"
#include "kdv/evolution.hpp"
#include "kdv/soliton.hpp"
#include "kdv/spectral.hpp"
#include "kdv/transfer.hpp"

namespace kdv {

namespace {

struct Options {
    std::string config;
    std::string out;
    std::string format;
    std::uint64_t seed = 20240611;
    int threads = 1;
    std::string level = "full";
    std::vector<double> k;
    std::vector<double> b_abs;
    std::vector<double> grid;
    std::vector<std::string> checks;
    double lambda_re = 1.0;
    double lambda_im = 0.0;
    double x0 = 0.0;
    int nodes = 201;
};

// Columns of doubles written as CSV (17 significant digits) or JSON.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open output file " + path);
    f << text;
}

std::string render(const Table& t, const std::string& format) {
    if (format == "json") {
        nlohmann::json j;
        j["columns"] = t.columns;
        j["rows"] = t.rows;
        return j.dump(1) + "\n";
    }
    std::string s;
    for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
    s += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + format_double(row[i]);
        s += '\n';
    }
    return s;
}

struct Context {
    Options opt;
    RunConfig cfg;

    std::string format() const {
        if (!opt.format.empty()) return opt.format;
        return cfg.format.value_or("csv");
    }
    std::string out() const { return !opt.out.empty() ? opt.out : cfg.output_path.value_or(""); }
    std::uint64_t seed(bool flag_given) const { return flag_given ? opt.seed : cfg.seed.value_or(opt.seed); }

    Grid2D grid(const Grid2D& fallback) const {
        if (!opt.grid.empty()) {
            if (opt.grid.size() != 6) throw InvalidArgument("--grid expects x_min x_max nx t_min t_max nt");
            Grid2D g{opt.grid[0], opt.grid[1], static_cast<int>(opt.grid[2]), opt.grid[3], opt.grid[4],
                     static_cast<int>(opt.grid[5])};
            if (opt.grid[2] != g.nx || opt.grid[5] != g.nt || g.nx < 1 || g.nt < 1)
                throw InvalidArgument("--grid: nx and nt must be positive integers");
            if (g.nx > 1 && !(g.x_max > g.x_min)) throw InvalidArgument("--grid: x_max must exceed x_min");
            if (g.nt > 1 && !(g.t_max > g.t_min)) throw InvalidArgument("--grid: t_max must exceed t_min");
            return g;
        }
        return cfg.grid.value_or(fallback);
    }

    bool flag_vessel() const { return !opt.k.empty() || !opt.b_abs.empty(); }

    SolitonSpec soliton() const {
        if (flag_vessel()) {
            if (opt.k.size() != opt.b_abs.size()) throw InvalidArgument("--k and --b-abs must have equal length");
            SolitonSpec s{opt.k, std::vector<Complex>(opt.b_abs.begin(), opt.b_abs.end())};
            s.validate();
            return s;
        }
        if (const auto* s = std::get_if<SolitonSpec>(&cfg.vessel)) return *s;
        throw InvalidArgument("no soliton vessel: give --k/--b-abs or vessel.soliton in the config");
    }

    FiniteVessel vessel() const {
        if (flag_vessel()) return build_soliton(soliton());
        if (const auto* s = std::get_if<SolitonSpec>(&cfg.vessel)) return build_soliton(*s);
        if (const auto* d = std::get_if<DiscreteSpectrum>(&cfg.vessel)) return build_discrete_vessel(*d);
        if (const auto* q = std::get_if<QuadratureConfig>(&cfg.vessel)) return build_quadrature_vessel(q->spectrum());
        throw InvalidArgument("no vessel configured: give --k/--b-abs or vessel.{soliton,discrete,quadrature}");
    }
};

Grid2D default_grid() { return {-10.0, 10.0, 201, 0.0, 0.0, 1}; }

int cmd_soliton(const Context& c) {
    const SolitonSpec spec = c.soliton();
    build_soliton(spec);  // self-check
    const Grid2D g = c.grid(default_grid());
    Table t{{"x", "t", "tau", "beta", "q"}, {}};
    for (int j = 0; j < g.nt; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double x = g.x(i), tt = g.t(j);
            const TauValue tau{soliton_log_tau(spec, x, tt), 1};
            t.rows.push_back({x, tt, tau.value(), soliton_beta(spec, x, tt), q_soliton(spec, x, tt)});
        }
    write_text(render(t, c.format()), c.out());
    return 0;
}

int cmd_spectral(const Context& c) {
    FiniteVessel v = [&] {
        if (c.flag_vessel()) {
            if (c.opt.k.size() != c.opt.b_abs.size()) throw InvalidArgument("--k and --b-abs must have equal length");
            return build_discrete_vessel(
                DiscreteSpectrum{c.opt.k, std::vector<Complex>(c.opt.b_abs.begin(), c.opt.b_abs.end()), {}});
        }
        if (std::holds_alternative<SolitonSpec>(c.cfg.vessel) || std::holds_alternative<EvolutionConfig>(c.cfg.vessel))
            throw InvalidArgument("spectral expects vessel.discrete or vessel.quadrature");
        return c.vessel();
    }();
    const Grid2D g = c.grid(default_grid());
    Table t{{"x", "t", "tau", "beta", "q"}, {}};
    for (int j = 0; j < g.nt; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const EvaluatedState st = evaluate(v, g.x(i), g.t(j));
            t.rows.push_back({st.x, st.t, st.tau.value(), st.beta, q_from_linkage(st)});
        }
    write_text(render(t, c.format()), c.out());
    return 0;
}

int cmd_evolve(const Context& c) {
    const auto* e = std::get_if<EvolutionConfig>(&c.cfg.vessel);
    if (!e) throw InvalidArgument("evolve expects vessel.evolution in the config");
    const Lattice lattice = make_lattice(e->k0, e->M);
    std::vector<double> times;
    for (int s = 0; s <= e->steps; ++s) times.push_back(e->t_end * s / e->steps);
    IntegrationOptions io;
    io.substeps = e->substeps;
    io.enforce_conservation = e->enforce_conservation;
    const BTrajectory traj = integrate_b(lattice, e->p0, times, io);

    Table t;
    t.columns.push_back("t");
    for (std::size_t i = 0; i < lattice.size(); ++i) t.columns.push_back("p[" + std::to_string(lattice.member(i)) + "]");
    t.columns.push_back("conservation");
    t.columns.push_back("asymmetry");
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        std::vector<double> row{traj.times[s]};
        row.insert(row.end(), traj.p[s].begin(), traj.p[s].end());
        row.push_back(traj.conservation[s]);
        row.push_back(traj.asymmetry[s]);
        t.rows.push_back(std::move(row));
    }
    std::fprintf(stderr, "dropped pair fraction %.6g\n", lattice.dropped_fraction());
    write_text(render(t, c.format()), c.out());
    return 0;
}

int cmd_transfer(const Context& c) {
    const FiniteVessel v = c.vessel();
    const Complex lambda(c.opt.lambda_re, c.opt.lambda_im);
    const Grid2D g = c.grid({-2.0, 2.0, 41, 0.0, 0.0, 1});
    Table t{{"x", "t", "S11_re", "S11_im", "S12_re", "S12_im", "S21_re", "S21_im", "S22_re", "S22_im", "symmetry"}, {}};
    const Matrix2c& s1 = sl_parameters().sigma1;
    for (int j = 0; j < g.nt; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const TransferFunction S(v, g.x(i), g.t(j));
            const Matrix2c s = S(lambda);
            const double sym = (S(-std::conj(lambda)).adjoint() * s1 * s - s1).norm();
            t.rows.push_back({g.x(i), g.t(j), s(0, 0).real(), s(0, 0).imag(), s(0, 1).real(), s(0, 1).imag(),
                              s(1, 0).real(), s(1, 0).imag(), s(1, 1).real(), s(1, 1).imag(), sym});
        }
    write_text(render(t, c.format()), c.out());
    return 0;
}

// Kernel diagonal, both sign candidates for the potential, and the
// Gelfand-Levitan residual at y = (x + x0)/2. NaN for x <= x0.
int cmd_scatter(const Context& c) {
    const FiniteVessel v = c.vessel();
    const Grid2D g = c.grid({-2.0, 2.0, 41, 0.0, 0.0, 1});
    const double t = g.t(0);
    Table tab{{"x", "K_xx", "q_plus", "q_minus", "q_reference", "sign", "gl_residual"}, {}};
    for (int i = 0; i < g.nx; ++i) {
        const double x = g.x(i);
        const KDiagPotential k = q_from_K_diag(v, x, 1e-3, t);
        const double y = 0.5 * (x + c.opt.x0);
        const double gl = x > y ? gl_residual(v, c.opt.x0, x, y, c.opt.nodes, t)
                                : std::numeric_limits<double>::quiet_NaN();
        tab.rows.push_back({x, gl_kernels(v, x, x, x, t).K.real(), k.plus, k.minus, k.reference,
                            static_cast<double>(k.sign), gl});
    }
    write_text(render(tab, c.format()), c.out());
    return 0;
}

int report(const std::vector<CheckResult>& results, const CheckOptions& o, const Context& c) {
    const std::string level = o.level == Level::full ? "full" : "quick";
    if (c.format() == "json") {
        nlohmann::json j;
        j["seed"] = o.seed;
        j["level"] = level;
        j["checks"] = nlohmann::json::array();
        for (const auto& r : results)
            j["checks"].push_back({{"check", r.name},
                                   {"value", r.value},
                                   {"tolerance", r.tolerance},
                                   {"pass", r.pass},
                                   {"runtime_ms", r.runtime_ms},
                                   {"notes", r.notes}});
        write_text(j.dump(2) + "\n", c.out());
    } else {
        std::ostringstream s;
        s << "seed " << o.seed << " level " << level << "\n";
        for (const auto& r : results) {
            char buf[256];
            std::snprintf(buf, sizeof buf, "%-4s %-22s value=%-10.3g tol=%-8.1g %9.1f ms  ", r.pass ? "PASS" : "FAIL",
                          r.name.c_str(), r.value, r.tolerance, r.runtime_ms);
            s << buf << r.notes << "\n";
        }
        write_text(s.str(), c.out());
    }
    bool errored = false, failed = false;
    for (const auto& r : results) {
        errored = errored || r.errored;
        failed = failed || !r.pass;
    }
    return errored ? 3 : failed ? 1 : 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Finite-dimensional KdV vessels: construction and verification"};
    app.fallthrough();
    app.require_subcommand(1);
    Context c;
    Options& o = c.opt;
    app.add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", o.out, "output file (stdout when omitted)");
    app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    auto* seed_opt = app.add_option("--seed", o.seed, "random seed");
    app.add_option("--threads", o.threads, "worker threads for grid sweeps")->check(CLI::PositiveNumber);
    app.add_option("--level", o.level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
    app.add_option("--k", o.k, "wavenumbers");
    app.add_option("--b-abs", o.b_abs, "amplitudes |b|");
    app.add_option("--grid", o.grid, "x_min x_max nx t_min t_max nt")->expected(6);
    app.add_option("--check", o.checks, "check names (verify)");
    app.add_option("--lambda-re", o.lambda_re, "spectral parameter, real part (transfer)");
    app.add_option("--lambda-im", o.lambda_im, "spectral parameter, imaginary part (transfer)");
    app.add_option("--x0", o.x0, "reference point (scatter)");
    app.add_option("--nodes", o.nodes, "Simpson nodes (scatter)");

    auto* soliton = app.add_subcommand("soliton", "n-soliton field dump: x,t,tau,beta,q");
    auto* spectral = app.add_subcommand("spectral", "discrete or quadrature vessel field dump");
    auto* evolve = app.add_subcommand("evolve", "integrate the lattice coefficient system");
    auto* transfer = app.add_subcommand("transfer", "transfer function samples and symmetry residual");
    auto* scatter = app.add_subcommand("scatter", "Gelfand-Levitan kernels and the potential from K(x,x)");
    auto* verify = app.add_subcommand("verify", "run the checks named in the config or by --check");
    auto* suite = app.add_subcommand("suite", "run every acceptance check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!o.config.empty()) c.cfg = load_config(o.config);
        if (soliton->parsed()) return cmd_soliton(c);
        if (spectral->parsed()) return cmd_spectral(c);
        if (evolve->parsed()) return cmd_evolve(c);
        if (transfer->parsed()) return cmd_transfer(c);
        if (scatter->parsed()) return cmd_scatter(c);

        CheckOptions co;
        co.level = o.level == "quick" ? Level::quick : Level::full;
        co.seed = c.seed(seed_opt->count() > 0);
        co.threads = o.threads;
        std::vector<std::string> names;
        if (verify->parsed()) {
            names = o.checks;
            for (const auto& sel : c.cfg.checks) {
                if (o.checks.empty()) names.push_back(sel.name);
                if (sel.tolerance) co.tolerance[sel.name] = *sel.tolerance;
            }
            if (names.empty()) throw InvalidArgument("verify: no checks given (config checks or --check)");
            for (const auto& n : names)
                if (std::find(check_names().begin(), check_names().end(), n) == check_names().end())
                    throw InvalidArgument("unknown check '" + n + "'");
        } else {
            for (const auto& sel : c.cfg.checks)
                if (sel.tolerance) co.tolerance[sel.name] = *sel.tolerance;
        }
        (void)suite;
        return report(run_suite(co, names), co, c);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace kdv
