#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "propfrac/fracint.hpp"
#include "propfrac/kernels.hpp"
#include "propfrac/propderiv.hpp"

using namespace propfrac;

namespace {

const KernelFunction kId = KernelFunction::identity();
const KernelFunction kLog = KernelFunction::log_kernel();

bool bitcast_eq(double a, double b) {
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}

const char* const kCorpus[] = {"x",        "2*x^2 + sin(x)", "sin(x)*exp(x)",
                               "exp(-x^2)", "ln(1+x^2)",      "1/(1+x)"};

} // namespace

TEST_CASE("first-order values") {
    // (1-rho) f + rho f'/g'
    auto x = ExprAst::parse("x");
    CHECK(std::fabs(prop_deriv(x, kId, 0.5, 2.0) - 1.5) < 1e-15);

    auto c7 = ExprAst::parse("7");
    CHECK(std::fabs(prop_deriv(c7, kId, 0.25, 3.1) - 5.25) < 1e-15);

    // rho = 1 collapses to f'/g'
    auto sq = ExprAst::parse("x^2");
    CHECK(std::fabs(prop_deriv(sq, kId, 1.0, 3.0) - 6.0) < 1e-14);
    // w.r.t. log kernel: t f'(t)
    CHECK(std::fabs(prop_deriv(sq, kLog, 1.0, 3.0) - 18.0) < 1e-13);

    // rho = 0 is the identity map
    auto f = ExprAst::parse("sin(x)*exp(x)");
    CHECK(bitcast_eq(prop_deriv(f, kId, 0.0, 1.3), f.eval(1.3)));
}

TEST_CASE("exponential eigenfunctions") {
    // With c = (rho-1)/rho, the factor e^{c g(t)} turns the operator into
    // a pure scaled derivative: D[e^{c g} h] = rho (h'/g') e^{c g},
    // because (1-rho) + rho c = 0 kills the zeroth-order term.
    const double rho = 0.5; // c = -1

    // h = 1: annihilated outright
    auto h1 = ExprAst::parse("exp(-x)");
    for (double t : {0.3, 1.0, 2.2})
        CHECK(std::fabs(prop_deriv(h1, kId, rho, t)) < 1e-15);

    // h = x at t = 1: rho * h'(1) * e^{-1}
    auto hx = ExprAst::parse("exp(-x)*x");
    CHECK(std::fabs(prop_deriv(hx, kId, rho, 1.0) - 0.5 * std::exp(-1.0)) <
          1e-15);

    // generic exponent scales instead: D[e^{k g}] = ((1-rho) + rho k) e^{k g}
    auto e2 = ExprAst::parse("exp(2*x)");
    double t = 0.7;
    double want = ((1.0 - rho) + rho * 2.0) * std::exp(2.0 * t);
    CHECK(std::fabs(prop_deriv(e2, kId, rho, t) - want) < 1e-12);
}

TEST_CASE("eigen-identity holds across the corpus") {
    // D[e^{c g} h] = rho (h'/g') e^{c g} for both kernel choices,
    // comparing against jet-computed h'.
    struct Setup {
        const KernelFunction* g;
        const char* wrap; // e^{c g(x)} as an expression, c = -1 (rho = 0.5)
        std::vector<double> ts;
    };
    const Setup setups[] = {
        {&kId, "exp(-x)", {0.4, 1.1, 2.3}},
        {&kLog, "exp(-ln(x))", {0.6, 1.4, 2.8}},
    };
    const double rho = 0.5;
    for (const auto& su : setups) {
        for (const char* hsrc : kCorpus) {
            auto f = ExprAst::parse(std::string(su.wrap) + "*(" + hsrc + ")");
            auto h = ExprAst::parse(hsrc);
            for (double t : su.ts) {
                double hp = h.eval_jet(t, 1).derivative(1);
                double c = (rho - 1.0) / rho;
                double expect = rho * hp / su.g->prime(t) *
                                std::exp(c * su.g->eval(t));
                double got = prop_deriv(f, *su.g, rho, t);
                double scale = std::max(1.0, std::fabs(expect));
                CHECK(std::fabs(got - expect) < 1e-9 * scale);
            }
        }
    }
}

TEST_CASE("limits in rho across the corpus") {
    for (const char* src : kCorpus) {
        auto f = ExprAst::parse(src);
        for (double t : {0.35, 0.9, 1.7}) {
            // rho -> 0+ recovers f itself
            CHECK(std::fabs(prop_deriv(f, kId, 1e-6, t) - f.eval(t)) < 1e-4);
            CHECK(std::fabs(prop_deriv(f, kLog, 1e-6, t) - f.eval(t)) < 1e-4);
            // rho = 1 is f'/g'
            double fp = f.eval_jet(t, 1).derivative(1);
            double scale = std::max(1.0, std::fabs(fp));
            CHECK(std::fabs(prop_deriv(f, kId, 1.0, t) - fp) < 1e-10 * scale);
            double fl = fp * t; // /g' with g' = 1/t
            double sl = std::max(1.0, std::fabs(fl));
            CHECK(std::fabs(prop_deriv(f, kLog, 1.0, t) - fl) < 1e-10 * sl);
        }
    }
}

TEST_CASE("iterated operator") {
    auto sq = ExprAst::parse("x^2");
    // rho=1: plain second derivative
    CHECK(std::fabs(prop_deriv_n(sq, kId, 1.0, 2, 3.0) - 2.0) < 1e-13);

    // rho=0.5 twice on exp(x): D[e^x] = e^x, so D^2 e^x at 0 is 1
    auto ex = ExprAst::parse("exp(x)");
    CHECK(std::fabs(prop_deriv_n(ex, kId, 0.5, 2, 0.0) - 1.0) < 1e-14);

    // n=1 must agree with the single-application form bit for bit
    auto f = ExprAst::parse("cos(2*x)*x^2");
    for (double t : {0.4, 1.1, 2.6})
        CHECK(bitcast_eq(prop_deriv_n(f, kId, 0.7, 1, t),
                         prop_deriv(f, kId, 0.7, t)));

    // n-fold on a constant: (1-rho)^n k
    auto c3 = ExprAst::parse("3");
    for (int n = 1; n <= 4; ++n)
        CHECK(std::fabs(prop_deriv_n(c3, kId, 0.25, n, 1.0) -
                        3.0 * std::pow(0.75, n)) < 1e-14);

    // manual double application on a generic function:
    // D^2 f = (1-r)^2 f + 2 r (1-r) f'/g' + r^2 (f'/g')'/g'
    auto s = ExprAst::parse("sin(x)");
    const double r = 0.6, t = 1.3;
    double f0 = std::sin(t), f1 = std::cos(t), f2 = -std::sin(t);
    double manual = (1 - r) * (1 - r) * f0 + 2 * r * (1 - r) * f1 + r * r * f2;
    CHECK(std::fabs(prop_deriv_n(s, kId, r, 2, t) - manual) < 1e-13);
}

TEST_CASE("reversed operator") {
    // (1-rho) f - rho f'/g'
    auto x = ExprAst::parse("x");
    CHECK(std::fabs(prop_deriv_reverse(x, kId, 0.5, 2.0) - 0.5) < 1e-15);

    auto sq = ExprAst::parse("x^2");
    CHECK(std::fabs(prop_deriv_reverse(sq, kId, 1.0, 1.0) + 2.0) < 1e-14);

    // mirrored eigenfunction e^{-c g} h: reversed operator leaves
    // -rho (h'/g') e^{-c g}; at h = x, t = 0 that is -0.5
    auto hx = ExprAst::parse("exp(x)*x");
    CHECK(std::fabs(prop_deriv_reverse(hx, kId, 0.5, 0.0) + 0.5) < 1e-15);
    auto h1 = ExprAst::parse("exp(x)");
    CHECK(std::fabs(prop_deriv_reverse(h1, kId, 0.5, 0.0)) < 1e-15);

    // n=1 shorthand agreement
    auto f = ExprAst::parse("sin(x)*exp(x)");
    CHECK(bitcast_eq(prop_deriv_reverse_n(f, kLog, 0.6, 1, 2.0),
                     prop_deriv_reverse(f, kLog, 0.6, 2.0)));
}

TEST_CASE("parameter validation") {
    auto f = ExprAst::parse("x");
    CHECK_THROWS_AS(prop_deriv(f, kId, -0.1, 1.0), domain_error);
    CHECK_THROWS_AS(prop_deriv(f, kId, 1.1, 1.0), domain_error);
    CHECK_THROWS_AS(prop_deriv_n(f, kId, 0.5, 0, 1.0), domain_error);
    CHECK_THROWS_AS(prop_deriv_n(f, kId, 0.5, 5, 1.0), domain_error);
    CHECK_THROWS_AS(prop_integral_1(f, kId, 0.0, 0.0, 1.0), domain_error);
    CHECK_THROWS_AS(prop_integral_1(f, kId, 0.5, 1.0, 0.5), domain_error);
}

TEST_CASE("order-1 integral values") {
    auto one = ExprAst::parse("1");
    // rho=1, identity kernel: plain length of [0,2]
    auto r = prop_integral_1(one, kId, 1.0, 0.0, 2.0);
    CHECK(r.converged);
    CHECK(std::fabs(r.value - 2.0) < 1e-12);

    // rho=1, log kernel over [1,e]: integral of ds/s = 1
    auto rl = prop_integral_1(one, kLog, 1.0, 1.0, std::exp(1.0));
    CHECK(std::fabs(rl.value - 1.0) < 1e-12);

    // rho=0.5, identity, [0,1]: antiderivative gives 2 (1 - e^{-1})
    auto rh = prop_integral_1(one, kId, 0.5, 0.0, 1.0);
    CHECK(std::fabs(rh.value - 2.0 * (1.0 - std::exp(-1.0))) < 1e-12);

    // degenerate interval
    auto r0 = prop_integral_1(one, kId, 0.5, 1.0, 1.0);
    CHECK(r0.value == 0.0);
    CHECK(r0.converged);
}

TEST_CASE("derivative inverts the order-1 integral") {
    // F = I^1 f must satisfy D F = f. D needs F', which is estimated by
    // central differencing of the quadrature values, so the check mixes
    // quadrature and stencil error; tight tolerances keep both small.
    QuadConfig cfg;
    cfg.rel_tol = 1e-13;
    cfg.abs_tol = 1e-14;
    struct Setup { const KernelFunction* g; double a; double t; };
    const Setup setups[] = {{&kId, 0.0, 1.7}, {&kLog, 1.0, 2.6}};
    for (const auto& su : setups) {
        for (const char* fsrc : {"1", "x", "cos(x)", "exp(-x^2)"}) {
            auto f = ExprAst::parse(fsrc);
            for (double rho : {0.4, 1.0}) {
                auto F = [&](double u) {
                    return prop_integral_1(f, *su.g, rho, su.a, u, cfg).value;
                };
                double t = su.t, h = 1e-5;
                double Fp = (F(t + h) - F(t - h)) / (2.0 * h);
                double lhs = (1.0 - rho) * F(t) + rho * Fp / su.g->prime(t);
                CHECK(std::fabs(lhs - f.eval(t)) < 1e-7);
            }
        }
    }
}

TEST_CASE("iterating the order-1 integral matches the order-n transform") {
    QuadConfig cfg;
    cfg.rel_tol = 1e-12;
    auto f = ExprAst::parse("cos(x)");
    const double rho = 0.6, a = 0.0, t = 1.4;

    auto I1 = [&](auto&& fn, double u) {
        return prop_integral_1_fn(fn, kId, rho, a, u, cfg).value;
    };
    auto inner = [&](double u) { return f.eval(u); };
    auto once = [&](double u) { return I1(inner, u); };
    auto twice = [&](double u) { return I1(once, u); };

    for (int n : {2, 3}) {
        double iter = (n == 2) ? I1(once, t) : I1(twice, t);
        auto direct = left_integral(f, kId, (double)n, rho, a, t, cfg);
        REQUIRE(direct.converged);
        double scale = std::max(1.0, std::fabs(direct.value));
        CHECK(std::fabs(iter - direct.value) < 1e-7 * scale);
    }
}
