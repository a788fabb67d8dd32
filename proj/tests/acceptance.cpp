// Acceptance gate: one line per criterion, exit 0 iff every line passes.
// Criteria with a runtime budget fail when they blow it, not just when a
// case misses its tolerance.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "propfrac/verify.hpp"

using propfrac::CheckResult;

namespace {

bool g_all_pass = true;

void report(int crit, const char* label, bool pass, std::size_t cases,
            int fails, double seconds) {
    std::printf("%s  criterion %2d: %s  (cases=%zu fails=%d time=%.2fs)\n",
                pass ? "PASS" : "FAIL", crit, label, cases, fails, seconds);
    if (!pass) g_all_pass = false;
}

void run_criterion(int crit, const char* label, double budget_s,
                   const std::function<std::vector<CheckResult>()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<CheckResult> checks;
    int fails = 0;
    bool threw = false;
    try {
        checks = fn();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "criterion %d raised: %s\n", crit, e.what());
        threw = true;
    }
    double dt = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    for (const auto& c : checks) {
        if (!c.pass) {
            ++fails;
            if (fails <= 5)
                std::fprintf(stderr,
                             "  miss: %s computed=%.10e expected=%.10e "
                             "err=%.3e tol=%.3e\n",
                             c.label.c_str(), c.computed, c.expected, c.err,
                             c.tol);
        }
    }
    bool pass = !threw && !checks.empty() && fails == 0 &&
                (budget_s <= 0.0 || dt < budget_s);
    report(crit, label, pass, checks.size(), fails, dt);
}

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Criterion 10 shells out to the CLI binary: `verify` over every suite
// must exit 0, and an identical grid evaluation twice must produce
// byte-identical CSV.
void run_cli_criterion() {
    auto t0 = std::chrono::steady_clock::now();
#ifdef PROPFRAC_CLI_PATH
    const char* bin = PROPFRAC_CLI_PATH;
#else
    const char* bin = std::getenv("PROPFRAC_CLI_PATH");
#endif
    bool pass = false;
    int fails = 0;
    std::size_t cases = 0;
    if (!bin) {
        std::fprintf(stderr, "PROPFRAC_CLI_PATH is not set\n");
    } else {
        std::string base = "/tmp/propfrac_accept_" + std::to_string(::getpid());
        auto shell = [](const std::string& cmd) {
            int rc = std::system(cmd.c_str());
            return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
        };
        int verify_rc = shell("\"" + std::string(bin) +
                              "\" verify --suite all >" + base + ".log 2>&1");
        ++cases;
        if (verify_rc != 0) {
            ++fails;
            std::fprintf(stderr, "verify --suite all exited %d\n", verify_rc);
        }
        std::string eval_cmd =
            "\"" + std::string(bin) +
            "\" eval --op left-rl --alpha 1.5 --rho 0.8 --kernel log "
            "--a 1 --f \"cos(x)\" --grid 1.5:3.5:7 --out ";
        int rc1 = shell(eval_cmd + base + "_1.csv");
        int rc2 = shell(eval_cmd + base + "_2.csv");
        ++cases;
        std::string csv1 = slurp(base + "_1.csv");
        if (rc1 != 0 || rc2 != 0 || csv1.empty() ||
            csv1 != slurp(base + "_2.csv")) {
            ++fails;
            std::fprintf(stderr, "eval rerun mismatch (rc %d/%d)\n", rc1, rc2);
        }
        pass = fails == 0;
    }
    double dt = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    report(10, "CLI verify-all and byte-identical reruns", pass, cases, fails,
           dt);
}

} // namespace

int main() {
    using namespace propfrac;

    run_criterion(1, "left/right integral closed-form oracles", 10.0,
                  [] { return oracle_integral_checks(); });
    run_criterion(2, "integral-type derivative closed-form oracles", 30.0,
                  [] { return oracle_deriv_checks(); });
    run_criterion(3, "Caputo-type closed forms and annihilation", 20.0, [] {
        auto cs = oracle_caputo_checks();
        auto an = annihilation_checks();
        cs.insert(cs.end(), an.begin(), an.end());
        return cs;
    });
    run_criterion(4, "integral semigroup and order commutativity", 60.0,
                  [] { return semigroup_checks(); });
    run_criterion(5, "derivative inverts the integral", 0.0,
                  [] { return inverse_checks(); });
    run_criterion(6, "derivative-integral order reduction", 0.0,
                  [] { return order_reduction_checks(); });
    run_criterion(7, "classical reductions by kernel substitution", 0.0,
                  [] { return classical_reduction_checks(); });
    run_criterion(8, "jet derivatives vs finite differences", 0.0,
                  [] { return jet_fd_checks(); });
    run_criterion(9, "gamma recurrence and reflection", 0.0,
                  [] { return gamma_checks(); });
    run_cli_criterion();

    return g_all_pass ? 0 : 1;
}
