#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "propfrac/fracderiv.hpp"
#include "propfrac/oracles.hpp"
#include "propfrac/quadrature.hpp"

using namespace propfrac;

namespace {

const KernelFunction kId = KernelFunction::identity();
const KernelFunction kLog = KernelFunction::log_kernel();

double rel_gap(double got, double want) {
    return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

} // namespace

TEST_CASE("order splitting") {
    CHECK(n_from_alpha(0.0) == 1);
    CHECK(n_from_alpha(0.3) == 1);
    CHECK(n_from_alpha(1.0) == 2);
    CHECK(n_from_alpha(1.5) == 2);
    CHECK(n_from_alpha(2.5) == 3);
    CHECK(n_from_alpha(3.2) == 4);
    CHECK_THROWS_AS(n_from_alpha(4.0), domain_error);
    CHECK_THROWS_AS(n_from_alpha(-0.1), domain_error);
}

TEST_CASE("integral-type derivative, hand values") {
    // f = x, alpha = 0.5, classical setting: Gamma(2)/Gamma(1.5) sqrt(t)
    auto x = ExprAst::parse("x");
    auto r = left_rl_deriv(x, kId, 0.5, 1.0, 0.0, 1.0);
    REQUIRE(r.converged);
    CHECK(std::fabs(r.value - 1.1283791670955126) < 1e-6);
    CHECK(r.error_estimate >= 0.0);

    // alpha = 0 reproduces f itself (inner order 1, one derivative)
    auto f = ExprAst::parse("cos(x)");
    auto r0 = left_rl_deriv(f, kId, 0.0, 0.7, 0.0, 1.2);
    CHECK(std::fabs(r0.value - std::cos(1.2)) < 1e-6);
    auto r0l = left_rl_deriv(f, kLog, 0.0, 1.0, 1.0, 2.0);
    CHECK(std::fabs(r0l.value - std::cos(2.0)) < 1e-6);
}

TEST_CASE("right integral-type derivative, classical form") {
    // f = (b-x)^{beta-1} with beta = 2.5:
    // value is Gamma(2.5)/Gamma(2) (b-t)^{beta-1-alpha} at alpha = 0.5
    auto f = ExprAst::parse("(2 - x)^1.5");
    const double t = 0.8, b = 2.0;
    auto r = right_rl_deriv(f, kId, 0.5, 1.0, b, t);
    REQUIRE(r.converged);
    double want = gamma_fn(2.5) / gamma_fn(2.0) * (b - t);
    CHECK(rel_gap(r.value, want) < 1e-6);

    auto g = ExprAst::parse("cos(x)");
    auto r0 = right_rl_deriv(g, kId, 0.0, 0.6, 2.0, 0.9);
    CHECK(std::fabs(r0.value - std::cos(0.9)) < 1e-6);
}

TEST_CASE("power-exponential inputs match the derivative closed form") {
    struct Case {
        const KernelFunction* g;
        double a, t, alpha, beta, rho;
    };
    const Case cases[] = {
        {&kId, 0.0, 1.2, 0.5, 2.0, 0.5},
        {&kLog, 1.0, 2.2, 1.5, 2.7, 1.0},
    };
    for (const auto& c : cases) {
        auto f = power_exp_left_input(*c.g, c.beta, c.rho, c.a);
        auto got = left_rl_deriv(f, *c.g, c.alpha, c.rho, c.a, c.t);
        double want = cf_left_rl_deriv(c.alpha, c.beta, c.rho, *c.g, c.a, c.t);
        CHECK(rel_gap(got.value, want) < 1e-4);

        double bb = c.t + 0.8;
        auto fr = power_exp_right_input(*c.g, c.beta, c.rho, bb);
        auto gotr = right_rl_deriv(fr, *c.g, c.alpha, c.rho, bb, c.t);
        double wantr = cf_right_rl_deriv(c.alpha, c.beta, c.rho, *c.g, bb, c.t);
        CHECK(rel_gap(gotr.value, wantr) < 1e-4);
    }
}

TEST_CASE("Caputo-type derivative, hand values") {
    // f = x^2, alpha = 0.5, classical: Gamma(3)/Gamma(2.5) t^{1.5}.
    // Independent oracle: (1/Gamma(0.5)) integral_0^1 (1-tau)^{-1/2} 2 tau
    // dtau, evaluated here by a raw 64-node rule after z = 1 - tau.
    const auto& rule = jacobi_nodes(0.5, 64);
    double brute = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i)
        brute += rule.weights[i] * 2.0 * (1.0 - rule.nodes[i]);
    brute /= gamma_fn(0.5);
    CHECK(std::fabs(brute - 1.5045055561273502) < 1e-13);

    auto sq = ExprAst::parse("x^2");
    auto r = left_caputo(sq, kId, 0.5, 1.0, 0.0, 1.0);
    REQUIRE(r.converged);
    CHECK(std::fabs(r.value - brute) < 1e-10);
    CHECK(std::fabs(r.value - 8.0 / (3.0 * std::sqrt(std::numbers::pi))) <
          1e-10);

    // integer alpha still splits as n = alpha+1 inner derivatives under
    // one smoothing integral; at rho = 1 that telescopes to
    // f'(t) - f'(a) for alpha = 1
    auto r1 = left_caputo(sq, kId, 1.0, 1.0, 0.0, 1.7);
    CHECK(std::fabs(r1.value - 2.0 * 1.7) < 1e-11);
    // and alpha = 2 takes three derivatives, so x^2 is annihilated
    auto r2 = left_caputo(sq, kId, 2.0, 1.0, 0.0, 1.7);
    CHECK(std::fabs(r2.value) < 1e-12);
    auto cu17 = ExprAst::parse("x^3");
    auto r2b = left_caputo(cu17, kId, 2.0, 1.0, 0.0, 1.7);
    CHECK(std::fabs(r2b.value - 6.0 * 1.7) < 1e-10);

    // three inner derivatives: f = x^3, alpha = 2.5 -> 6 sqrt(t)/Gamma(1.5)
    auto cu = ExprAst::parse("x^3");
    auto r3 = left_caputo(cu, kId, 2.5, 1.0, 0.0, 1.0);
    REQUIRE(r3.converged);
    CHECK(rel_gap(r3.value, 6.770275002573076) < 1e-8);
}

TEST_CASE("right Caputo-type derivative, hand value") {
    // f = (b-x)^2, alpha = 0.5: Gamma(3)/Gamma(2.5) (b-t)^{1.5}
    auto f = ExprAst::parse("(2 - x)^2");
    auto r = right_caputo(f, kId, 0.5, 1.0, 2.0, 1.0);
    REQUIRE(r.converged);
    CHECK(std::fabs(r.value - 1.5045055561273502) < 1e-9);

    auto r2 = right_caputo(f, kId, 0.5, 1.0, 2.0, 0.5);
    CHECK(rel_gap(r2.value, 1.5045055561273502 * std::pow(1.5, 1.5)) < 1e-9);
}

TEST_CASE("Caputo power-exponential closed form and annihilation") {
    // beta > n: same closed form as the integral-type derivative
    struct Case {
        const KernelFunction* g;
        double a, t, alpha, beta, rho;
    };
    const Case cases[] = {
        {&kId, 0.0, 1.3, 0.5, 2.7, 0.4},
        {&kLog, 1.0, 2.6, 1.5, 3.5, 0.8},
    };
    for (const auto& c : cases) {
        auto f = power_exp_left_input(*c.g, c.beta, c.rho, c.a);
        auto got = left_caputo(f, *c.g, c.alpha, c.rho, c.a, c.t);
        double want = cf_left_caputo(c.alpha, c.beta, c.rho, *c.g, c.a, c.t);
        CHECK(rel_gap(got.value, want) < 1e-7);

        double bb = c.t + 0.9;
        auto fr = power_exp_right_input(*c.g, c.beta, c.rho, bb);
        auto gotr = right_caputo(fr, *c.g, c.alpha, c.rho, bb, c.t);
        double wantr = cf_right_caputo(c.alpha, c.beta, c.rho, *c.g, bb, c.t);
        CHECK(rel_gap(gotr.value, wantr) < 1e-7);
    }

    // k = 0..n-1 powers of (g - g(a)) under the same exponential tilt
    // vanish identically
    for (double alpha : {0.5, 1.5}) {
        int n = n_from_alpha(alpha);
        for (int k = 0; k < n; ++k) {
            auto f = power_exp_left_input(kId, k + 1.0, 0.4, 0.0);
            auto got = left_caputo(f, kId, alpha, 0.4, 0.0, 1.4);
            CHECK(std::fabs(got.value) < 1e-8);
        }
    }
}

TEST_CASE("Caputo and integral-type forms agree on tilted powers") {
    // For inputs whose low-order terms vanish at the anchor (beta > n)
    // the two derivative types provide the same function.
    auto f = power_exp_left_input(kId, 3.5, 0.8, 0.0);
    const double alpha = 1.5, rho = 0.8, t = 1.6;
    auto cap = left_caputo(f, kId, alpha, rho, 0.0, t);
    auto rl = left_rl_deriv(f, kId, alpha, rho, 0.0, t);
    CHECK(rel_gap(cap.value, rl.value) < 1e-4);
    double want = cf_left_caputo(alpha, 3.5, rho, kId, 0.0, t);
    CHECK(rel_gap(cap.value, want) < 1e-7);
    CHECK(rel_gap(rl.value, want) < 1e-4);
}

TEST_CASE("stencils near the anchor") {
    // F is cubic in g - g(a) for this input, so both the shrunken central
    // stencil and the one-sided fallback differentiate it exactly up to
    // roundoff.
    auto f = power_exp_left_input(kId, 3.5, 1.0, 0.0);

    // central stencil shrunk to fit (t - a on the order of the base step)
    double t1 = 2e-5;
    auto r1 = left_rl_deriv(f, kId, 0.5, 1.0, 0.0, t1);
    double want1 = cf_left_rl_deriv(0.5, 3.5, 1.0, kId, 0.0, t1);
    CHECK(std::isfinite(r1.value));
    CHECK(std::fabs(r1.value - want1) < 1e-9);

    // too close for any central stencil: one-sided differences
    double t2 = 5e-8;
    auto r2 = left_rl_deriv(f, kId, 0.5, 1.0, 0.0, t2);
    CHECK(std::isfinite(r2.value));
    CHECK(std::fabs(r2.value) < 1e-6);
}

TEST_CASE("derivative argument validation") {
    auto f = ExprAst::parse("x");
    CHECK_THROWS_AS(left_rl_deriv(f, kId, 0.5, 1.0, 1.0, 1.0), domain_error);
    CHECK_THROWS_AS(left_rl_deriv(f, kId, 0.5, 0.0, 0.0, 1.0), domain_error);
    CHECK_THROWS_AS(left_rl_deriv(f, kId, 4.0, 1.0, 0.0, 1.0), domain_error);
    CHECK_THROWS_AS(right_rl_deriv(f, kId, 0.5, 1.0, 1.0, 1.5), domain_error);
    CHECK_THROWS_AS(left_caputo(f, kId, 0.0, 1.0, 0.0, 1.0), domain_error);
    CHECK_THROWS_AS(left_caputo(f, kId, -1.0, 1.0, 0.0, 1.0), domain_error);
}
