#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdg/sdg.hpp"

namespace {

struct CommonOpts {
    std::string scheme = "imsdg";
    int p = 3;
    int K = 6;
    double theta = 1.0;
    std::string init = "euler-march";
    double newton_tol = 1e-12;
    int newton_max_iter = 25;
    unsigned jobs = 0;
    std::string config_file;
};

struct ProblemOpts {
    std::string name = "dahlquist";
    double lambda = -1.0;
    double eps = 0.1;
    int ncells = 160;
    double tend = 0.0;  // 0 keeps the problem default
};

sdg::Variant parse_variant(const std::string& s) {
    if (s == "exdg") return sdg::Variant::ExDG;
    if (s == "exsdg") return sdg::Variant::ExSDG;
    if (s == "imsdg") return sdg::Variant::ImSDG;
    if (s == "sisdg") return sdg::Variant::SISDG;
    if (s == "imsdg-theta") return sdg::Variant::ImSDGTheta;
    throw CLI::ValidationError("--scheme", "unknown scheme '" + s + "'");
}

sdg::SchemeConfig make_scheme(const CommonOpts& o) {
    sdg::SchemeConfig cfg;
    cfg.variant = parse_variant(o.scheme);
    cfg.degree = o.p;
    cfg.iterations = o.K;
    cfg.theta = o.theta;
    if (o.init == "constant")
        cfg.init = sdg::InitMode::Constant;
    else if (o.init == "euler-march")
        cfg.init = sdg::InitMode::EulerMarch;
    else
        throw CLI::ValidationError("--init", "unknown init mode '" + o.init + "'");
    cfg.newton.tol = o.newton_tol;
    cfg.newton.max_iter = o.newton_max_iter;
    return cfg;
}

sdg::IvpProblem<double> make_problem(const ProblemOpts& o) {
    sdg::IvpProblem<double> p;
    if (o.name == "dahlquist")
        p = sdg::make_dahlquist<double>(o.lambda);
    else if (o.name == "vanderpol")
        p = sdg::make_vanderpol(o.eps);
    else if (o.name == "bad")
        p = sdg::make_bad_example();
    else if (o.name == "advection")
        p = sdg::make_advection(o.ncells);
    else
        throw CLI::ValidationError("--problem", "unknown problem '" + o.name + "'");
    if (o.tend > 0.0) p.t_end = o.tend;
    return p;
}

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--scheme", o.scheme, "exdg|exsdg|imsdg|sisdg|imsdg-theta");
    cmd->add_option("--p", o.p, "polynomial degree")->check(CLI::Range(0, 30));
    cmd->add_option("--K", o.K, "sweep count")->check(CLI::NonNegativeNumber);
    cmd->add_option("--theta", o.theta, "final-sweep damping (imsdg-theta)");
    cmd->add_option("--init", o.init, "euler-march|constant");
    cmd->add_option("--newton-tol", o.newton_tol, "node solve tolerance");
    cmd->add_option("--newton-max-iter", o.newton_max_iter, "node solve iteration cap");
    cmd->add_option("--jobs", o.jobs, "worker threads (0 = all cores)");
    cmd->add_option("--config", o.config_file, "key=value configuration file");
}

void add_problem(CLI::App* cmd, ProblemOpts& o) {
    cmd->add_option("--problem", o.name, "dahlquist|vanderpol|bad|advection");
    cmd->add_option("--lambda", o.lambda, "dahlquist coefficient");
    cmd->add_option("--eps", o.eps, "van der Pol stiffness");
    cmd->add_option("--ncells", o.ncells, "advection grid cells");
    cmd->add_option("--tend", o.tend, "override final time");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Parse a key=value configuration file against the subcommand's options,
/// rejecting unknown keys with the offending line. Keys already given as
/// explicit flags are skipped so that flags take precedence.
std::vector<std::string> config_file_tokens(const CLI::App* cmd, const std::string& path,
                                            const std::set<std::string>& flag_keys) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--config", "cannot open '" + path + "'");
    std::set<std::string> keys;
    for (const auto* opt : cmd->get_options())
        for (const auto& n : opt->get_lnames()) keys.insert(n);
    std::vector<std::string> tokens;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = line;
        t.erase(0, t.find_first_not_of(" \t"));
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        std::string key = eq == std::string::npos ? t : t.substr(0, eq);
        key.erase(key.find_last_not_of(" \t") + 1);
        if (eq == std::string::npos || !keys.count(key)) {
            std::ostringstream os;
            os << "unknown key in " << path << " line " << lineno << ": '" << line << "'";
            throw CLI::ValidationError("--config", os.str());
        }
        if (flag_keys.count(key)) continue;
        std::string value = t.substr(eq + 1);
        value.erase(0, value.find_first_not_of(" \t"));
        value.erase(value.find_last_not_of(" \t") + 1);
        tokens.push_back("--" + key);
        tokens.push_back(value);
    }
    return tokens;
}

class Output {
  public:
    explicit Output(const std::string& path) {
        if (path != "-") {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

int cmd_solve(const CommonOpts& c, const ProblemOpts& po, int steps, const std::string& out_path) {
    const auto problem = make_problem(po);
    const auto cfg = make_scheme(c);
    const auto traj = sdg::integrate(problem, cfg, steps);
    Output out(out_path);
    auto& os = out.stream();
    os << "# solve problem=" << po.name << " scheme=" << c.scheme << " p=" << c.p << " K=" << c.K
       << " steps=" << steps << " tend=" << fmt(problem.t_end) << "\n";
    os << "t";
    for (int i = 0; i < problem.dimension; ++i) os << ",comp" << i;
    os << "\n";
    for (std::size_t r = 1; r < traj.states.size(); ++r) {
        os << fmt(traj.times[r]);
        for (int i = 0; i < problem.dimension; ++i) os << "," << fmt(traj.states[r][i]);
        os << "\n";
    }
    return 0;
}

int cmd_converge(const CommonOpts& c, const ProblemOpts& po, std::vector<double> dts,
                 const std::string& ref_mode, int ref_p, double ref_dt,
                 const std::string& out_path) {
    const auto problem = make_problem(po);
    const auto cfg = make_scheme(c);
    sdg::Reference ref;
    if (ref_mode == "exact" || (ref_mode == "auto" && problem.has_exact()))
        ref = sdg::exact_reference(problem);
    else
        ref = sdg::numeric_reference(problem, ref_p, ref_dt);
    const auto table = sdg::run_convergence(problem, cfg, dts, ref, c.jobs);
    Output out(out_path);
    auto& os = out.stream();
    os << "# converge problem=" << po.name << " scheme=" << c.scheme << " p=" << c.p
       << " K=" << c.K << " reference=" << table.reference << "\n";
    os << "dt";
    for (int i = 0; i < problem.dimension; ++i) os << ",err_comp" << i << ",order_comp" << i;
    os << "\n";
    for (const auto& row : table.rows) {
        os << fmt(row.dt);
        for (std::size_t i = 0; i < row.error.size(); ++i) {
            os << "," << fmt(row.error[i]) << ",";
            if (std::isfinite(row.order[i])) os << fmt(row.order[i]);
        }
        os << "\n";
    }
    return 0;
}

int cmd_stability(const CommonOpts& c, double re_min, double re_max, double im_min, double im_max,
                  int nx, int ny, const std::string& csv_path, const std::string& pgm_path) {
    const auto cfg = make_scheme(c);
    const auto scan = sdg::region_scan(cfg, re_min, re_max, im_min, im_max, nx, ny, c.jobs);
    const auto probe = sdg::a_stability_probe(cfg, sdg::default_probe_samples(), c.jobs);

    {
        std::ofstream csv(csv_path);
        if (!csv) throw std::runtime_error("cannot open '" + csv_path + "'");
        csv << "# stability scheme=" << c.scheme << " p=" << c.p << " K=" << c.K << " window=["
            << fmt(re_min) << "," << fmt(re_max) << "]x[" << fmt(im_min) << "," << fmt(im_max)
            << "] resolution=" << nx << "x" << ny << "\n";
        csv << "re,im,abs_am\n";
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix)
                csv << fmt(scan.re_at(ix)) << "," << fmt(scan.im_at(iy)) << ","
                    << fmt(scan.value(ix, iy)) << "\n";
    }
    {
        std::ofstream pgm(pgm_path);
        if (!pgm) throw std::runtime_error("cannot open '" + pgm_path + "'");
        pgm << "P2\n";
        pgm << "# stability scheme=" << c.scheme << " p=" << c.p << " K=" << c.K
            << " 0=stable 255=unstable\n";
        pgm << nx << " " << ny << "\n255\n";
        for (int iy = ny - 1; iy >= 0; --iy) {
            for (int ix = 0; ix < nx; ++ix) pgm << (scan.stable(ix, iy) ? 0 : 255) << (ix + 1 < nx ? " " : "");
            pgm << "\n";
        }
    }
    std::cout << "stable_cells=" << scan.stable_cells() << " total=" << scan.values.size()
              << " probe=" << (probe.pass ? "PASS" : "FAIL") << " max_abs=" << fmt(probe.max_abs)
              << " worst_re=" << fmt(probe.worst.real()) << " worst_im=" << fmt(probe.worst.imag())
              << "\n";
    return 0;
}

int cmd_mlrun(const CommonOpts& c, double lambda, std::vector<int> levels, double dt, int iters,
              const std::string& out_path) {
    if (levels.empty()) throw CLI::ValidationError("--levels", "need at least one level degree");
    const int p = levels.front();
    const auto problem = sdg::make_dahlquist<double>(lambda);
    sdg::SchemeConfig cfg = make_scheme(c);
    cfg.degree = p;
    cfg.iterations = 0;

    const auto& ops = sdg::operators(p);
    const auto U_dg = sdg::dg_solve_linear<double>(ops, lambda, 1.0, dt);
    auto gap = [&](const sdg::SweepState<double>& s) {
        double g = 0.0;
        for (int m = 0; m < ops.size(); ++m) g = std::max(g, std::abs(s.U[m][0] - U_dg[m]));
        return g;
    };
    auto fresh = [&]() {
        sdg::SweepState<double> s;
        s.inflow = problem.initial_value;
        s.t_start = 0.0;
        s.dt = dt;
        sdg::init_predictor(problem, cfg, ops, s);
        return s;
    };

    auto one = fresh();
    auto ml = fresh();
    const auto hierarchy = sdg::build_hierarchy(levels);
    std::vector<std::pair<double, double>> errs;
    errs.emplace_back(gap(one), gap(ml));
    for (int k = 0; k < iters; ++k) {
        sdg::apply_sweep(one, ops, problem, cfg, 0);
        sdg::ml_cycle(hierarchy, problem, cfg, ml);
        errs.emplace_back(gap(one), gap(ml));
    }

    Output out(out_path);
    auto& os = out.stream();
    os << "# mlrun lambda=" << fmt(lambda) << " dt=" << fmt(dt) << " scheme=" << c.scheme
       << " levels=";
    for (std::size_t i = 0; i < levels.size(); ++i) os << (i ? "," : "") << levels[i];
    os << "\n";
    os << "iter,err_1level,err_mlevel\n";
    for (std::size_t k = 0; k < errs.size(); ++k)
        os << k << "," << fmt(errs[k].first) << "," << fmt(errs[k].second) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Iterative DG (SDG) time integration toolbox"};
    app.require_subcommand(1);

    CommonOpts c_solve, c_conv, c_stab, c_ml;
    ProblemOpts p_solve, p_conv;

    auto* solve = app.add_subcommand("solve", "integrate a problem and emit a trajectory CSV");
    int steps = 10;
    std::string solve_out = "-";
    add_common(solve, c_solve);
    add_problem(solve, p_solve);
    solve->add_option("--steps", steps, "number of uniform steps")->check(CLI::PositiveNumber);
    solve->add_option("--out", solve_out, "output CSV path ('-' = stdout)");

    auto* conv = app.add_subcommand("converge", "run a convergence study and emit a table CSV");
    std::vector<double> dts{0.2, 0.1, 0.05};
    std::string ref_mode = "auto", conv_out = "-";
    int ref_p = 9;
    double ref_dt = 1e-3;
    add_common(conv, c_conv);
    add_problem(conv, p_conv);
    conv->add_option("--dts", dts, "step sizes, strictly decreasing")->delimiter(',');
    conv->add_option("--ref", ref_mode, "auto|exact|numeric");
    conv->add_option("--ref-p", ref_p, "numeric reference degree");
    conv->add_option("--ref-dt", ref_dt, "numeric reference step size");
    conv->add_option("--out", conv_out, "output CSV path ('-' = stdout)");

    auto* stab = app.add_subcommand("stability", "rasterize a stability region and probe A-stability");
    double re_min = -15, re_max = 5, im_min = -15, im_max = 15;
    int nx = 600, ny = 600;
    std::string csv_path = "stability.csv", pgm_path = "stability.pgm";
    add_common(stab, c_stab);
    stab->add_option("--re-min", re_min);
    stab->add_option("--re-max", re_max);
    stab->add_option("--im-min", im_min);
    stab->add_option("--im-max", im_max);
    stab->add_option("--nx", nx)->check(CLI::Range(2, 100000));
    stab->add_option("--ny", ny)->check(CLI::Range(2, 100000));
    stab->add_option("--csv", csv_path, "per-point CSV output path");
    stab->add_option("--pgm", pgm_path, "raster PGM output path");

    auto* ml = app.add_subcommand("mlrun", "compare one-level sweeps against multilevel cycles");
    double ml_lambda = -10.0, ml_dt = 0.2;
    int ml_iters = 30;
    std::vector<int> ml_levels{6, 3};
    std::string ml_out = "-";
    add_common(ml, c_ml);
    ml->add_option("--lambda", ml_lambda, "dahlquist coefficient");
    ml->add_option("--levels", ml_levels, "level degrees, finest first")->delimiter(',');
    ml->add_option("--dt", ml_dt, "interval length");
    ml->add_option("--iters", ml_iters, "iteration/cycle count");
    ml->add_option("--out", ml_out, "output CSV path ('-' = stdout)");

    try {
        // expand any config file into option tokens; explicit flags win
        std::vector<std::string> args(argv + 1, argv + argc);
        if (argc > 2) {
            for (auto* sub : {solve, conv, stab, ml}) {
                if (sub->get_name() != args[0]) continue;
                std::string config_path;
                std::set<std::string> flag_keys;
                for (std::size_t i = 1; i < args.size(); ++i) {
                    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
                    if (args[i].rfind("--", 0) == 0) {
                        std::string key = args[i].substr(2);
                        const auto eq = key.find('=');
                        if (eq != std::string::npos) key.resize(eq);
                        if (key != "config") flag_keys.insert(key);
                    }
                }
                if (!config_path.empty()) {
                    const auto tokens = config_file_tokens(sub, config_path, flag_keys);
                    args.insert(args.begin() + 1, tokens.begin(), tokens.end());
                }
            }
        }
        std::vector<const char*> cargs;
        cargs.push_back(argv[0]);
        for (const auto& a : args) cargs.push_back(a.c_str());
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (solve->parsed()) return cmd_solve(c_solve, p_solve, steps, solve_out);
        if (conv->parsed())
            return cmd_converge(c_conv, p_conv, dts, ref_mode, ref_p, ref_dt, conv_out);
        if (stab->parsed())
            return cmd_stability(c_stab, re_min, re_max, im_min, im_max, nx, ny, csv_path, pgm_path);
        if (ml->parsed()) return cmd_mlrun(c_ml, ml_lambda, ml_levels, ml_dt, ml_iters, ml_out);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
