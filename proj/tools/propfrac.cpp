// Command-line front end: evaluate one operator over a grid (eval),
// run the built-in verification suites (verify), or batch-evaluate a
// file of operator specs (table).
//
// Exit codes: 0 success, 1 verification failures, 2 invalid input,
// 3 numerical failure during evaluation.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "propfrac/propfrac.hpp"

namespace {

struct QuadFlags {
    int base_nodes = 32;
    int max_nodes = 512;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;

    void attach(CLI::App* cmd) {
        cmd->add_option("--quad-base-nodes", base_nodes,
                        "starting quadrature node count")
            ->capture_default_str();
        cmd->add_option("--quad-max-nodes", max_nodes,
                        "node-doubling ceiling")
            ->capture_default_str();
        cmd->add_option("--rel-tol", rel_tol,
                        "relative convergence tolerance")
            ->envname("PROPFRAC_REL_TOL")
            ->capture_default_str();
        cmd->add_option("--abs-tol", abs_tol,
                        "absolute convergence tolerance")
            ->capture_default_str();
    }

    propfrac::QuadConfig config() const {
        propfrac::QuadConfig cfg{base_nodes, max_nodes, rel_tol, abs_tol};
        cfg.validate();
        return cfg;
    }
};

int run_eval(const propfrac::OperatorSpec& spec_in, const std::string& grid_s,
             const QuadFlags& qf, const std::string& out_path, int threads) {
    propfrac::OperatorSpec spec = spec_in;
    propfrac::EvalTable table;
    try {
        spec.resolve();
        propfrac::Grid grid = propfrac::Grid::parse(grid_s);
        table = propfrac::eval_spec_grid(spec, grid, qf.config(), threads);
    } catch (const propfrac::eval_error& e) {
        std::fprintf(stderr, "propfrac: evaluation failed at t=%.17g: %s\n",
                     e.t(), e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "propfrac: %s\n", e.what());
        return 2;
    }
    std::string csv = propfrac::csv_string(table);
    if (out_path.empty()) {
        std::fwrite(csv.data(), 1, csv.size(), stdout);
        return 0;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) {
        std::fprintf(stderr, "propfrac: cannot open '%s'\n",
                     out_path.c_str());
        return 2;
    }
    os.write(csv.data(), (std::streamsize)csv.size());
    return os ? 0 : 2;
}

int run_verify(const std::string& suite, double tol_scale) {
    propfrac::SuiteReport rep;
    try {
        rep = propfrac::run_suite(suite, tol_scale);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "propfrac: %s\n", e.what());
        return 2;
    }
    for (const propfrac::CheckResult& c : rep.checks)
        std::printf("%s  %s  computed=% .10e expected=% .10e err=%.3e\n",
                    c.pass ? "PASS" : "FAIL", c.label.c_str(), c.computed,
                    c.expected, c.err);
    int fails = rep.fail_count();
    std::printf("suite %s: %zu cases, %d failed\n", rep.name.c_str(),
                rep.checks.size(), fails);
    return fails == 0 ? 0 : 1;
}

int run_table(const std::string& path, const std::string& out_dir,
              const QuadFlags& qf, int threads) {
    std::ifstream is(path);
    if (!is) {
        std::fprintf(stderr, "propfrac: cannot read '%s'\n", path.c_str());
        return 2;
    }
    propfrac::QuadConfig base_cfg;
    try {
        base_cfg = qf.config();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "propfrac: %s\n", e.what());
        return 2;
    }
    int line_no = 0;
    int failures = 0;
    std::string line;
    while (std::getline(is, line)) {
        ++line_no;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        try {
            propfrac::TableLine tl =
                propfrac::parse_table_line(line, base_cfg);
            propfrac::EvalTable table =
                propfrac::eval_spec_grid(tl.spec, tl.grid, tl.cfg, threads);
            std::string out_path = out_dir + "/" + tl.file_name();
            std::ofstream os(out_path, std::ios::binary);
            if (!os) throw propfrac::domain_error("cannot open " + out_path);
            std::string csv = propfrac::csv_string(table);
            os.write(csv.data(), (std::streamsize)csv.size());
            if (!os) throw propfrac::domain_error("write failed: " + out_path);
            std::printf("line %d -> %s\n", line_no, tl.file_name().c_str());
        } catch (const std::exception& e) {
            std::fprintf(stderr, "propfrac: line %d: %s\n", line_no,
                         e.what());
            ++failures;
        }
    }
    return failures == 0 ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Fractional integrals and derivatives weighted by a monotone "
        "kernel, with a proportional lower-order term"};
    app.require_subcommand(1);

    // eval
    auto* eval = app.add_subcommand(
        "eval", "evaluate one operator over a grid, emit CSV");
    std::string op_name, kernel = "identity", f_text, grid_s, out_path;
    double alpha = 0.0, rho = 1.0, a_anchor = 0.0, b_anchor = 0.0;
    int threads = 1;
    QuadFlags eval_qf;
    eval->add_option("--op", op_name, "operator")
        ->required()
        ->check(CLI::IsMember({"left-int", "right-int", "left-rl", "right-rl",
                               "left-caputo", "right-caputo", "prop-deriv",
                               "prop-int"}));
    auto* alpha_opt = eval->add_option(
        "--alpha", alpha,
        "order (iteration count 1..4 for prop-deriv, default 1)");
    eval->add_option("--rho", rho, "proportion in (0,1] ([0,1] for prop-deriv)")
        ->capture_default_str();
    eval->add_option("--kernel", kernel,
                     "identity | log | power:MU | shifted-power:MU:A | "
                     "expr:EXPRESSION")
        ->capture_default_str();
    auto* a_opt = eval->add_option("--a", a_anchor,
                                   "left anchor (left-sided operators)");
    auto* b_opt = eval->add_option("--b", b_anchor,
                                   "right anchor (right-sided operators)");
    eval->add_option("--f", f_text, "operand expression in x")->required();
    eval->add_option("--grid", grid_s, "evaluation grid start:end:steps")
        ->required();
    eval->add_option("--out", out_path, "output CSV path (default: stdout)");
    eval->add_option("--threads", threads, "worker threads for grid points")
        ->capture_default_str();
    eval_qf.attach(eval);

    // verify
    auto* verify = app.add_subcommand(
        "verify", "run a built-in verification suite");
    std::string suite;
    double tol_scale = 1.0;
    verify->add_option("--suite", suite, "suite name or 'all'")
        ->required()
        ->check(CLI::IsMember({"oracles", "semigroup", "inverse",
                               "reductions", "annihilation", "all"}));
    verify->add_option("--tol-scale", tol_scale,
                       "multiply every suite tolerance")
        ->capture_default_str();

    // table
    auto* tab = app.add_subcommand(
        "table", "evaluate a file of operator specs, one CSV each");
    std::string table_path, out_dir = ".";
    int tab_threads = 1;
    QuadFlags tab_qf;
    tab->add_option("file", table_path, "spec file, one key=value line each")
        ->required();
    tab->add_option("--out-dir", out_dir, "directory for the CSV files")
        ->capture_default_str();
    tab->add_option("--threads", tab_threads, "worker threads per grid")
        ->capture_default_str();
    tab_qf.attach(tab);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (eval->parsed()) {
        propfrac::OperatorSpec spec;
        try {
            spec.op = propfrac::parse_operator_kind(op_name);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "propfrac: %s\n", e.what());
            return 2;
        }
        spec.has_alpha = alpha_opt->count() > 0;
        spec.alpha = alpha;
        spec.rho = rho;
        spec.kernel_text = kernel;
        spec.f_text = f_text;
        bool right = propfrac::is_right_sided(spec.op);
        if (propfrac::needs_anchor(spec.op)) {
            if (right && a_opt->count() > 0) {
                std::fprintf(stderr,
                             "propfrac: right-sided operators take --b\n");
                return 2;
            }
            if (!right && b_opt->count() > 0) {
                std::fprintf(stderr,
                             "propfrac: left-sided operators take --a\n");
                return 2;
            }
            spec.has_anchor = right ? b_opt->count() > 0 : a_opt->count() > 0;
            spec.anchor = right ? b_anchor : a_anchor;
        }
        return run_eval(spec, grid_s, eval_qf, out_path, threads);
    }
    if (verify->parsed()) return run_verify(suite, tol_scale);
    if (tab->parsed()) return run_table(table_path, out_dir, tab_qf,
                                        tab_threads);
    return 2;
}
