#pragma once

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "propfrac/expr.hpp"
#include "propfrac/fracderiv.hpp"
#include "propfrac/fracint.hpp"
#include "propfrac/gamma.hpp"
#include "propfrac/kernels.hpp"
#include "propfrac/oracles.hpp"
#include "propfrac/propderiv.hpp"
#include "propfrac/quadrature.hpp"

namespace propfrac {

/// One verification case: a computed value against its reference.
/// err is relative when the reference is meaningfully nonzero, absolute
/// otherwise (abs_below is the switch point).
struct CheckResult {
    std::string label;
    double computed = 0.0;
    double expected = 0.0;
    double err = 0.0;
    double tol = 0.0;
    bool pass = false;
};

namespace vdetail {

template <class... A>
std::string fmt(const char* f, A... a) {
    char buf[192];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

inline CheckResult make_check(std::string label, double computed,
                              double expected, double tol,
                              double abs_below = 1e-8) {
    CheckResult c;
    c.label = std::move(label);
    c.computed = computed;
    c.expected = expected;
    c.err = std::fabs(computed - expected);
    if (std::fabs(expected) > abs_below) c.err /= std::fabs(expected);
    c.tol = tol;
    c.pass = c.err <= tol;
    return c;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> p;
    p.reserve(n);
    if (n == 1) {
        p.push_back(lo);
        return p;
    }
    double h = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i)
        p.push_back(i == n - 1 ? hi : lo + i * h);
    return p;
}

/// First `want` candidates whose reference value keeps a relative
/// comparison meaningful.
template <class Ref>
std::vector<double> well_conditioned(const std::vector<double>& candidates,
                                     Ref&& ref, double min_abs, int want) {
    std::vector<double> out;
    for (double t : candidates) {
        if (std::fabs(ref(t)) < min_abs) continue;
        out.push_back(t);
        if ((int)out.size() == want) break;
    }
    return out;
}

struct KernelSetup {
    const char* name;
    KernelFunction g;
    double a;
    double b;
    double t_left[2];
    double t_right[2];
};

inline const std::vector<KernelSetup>& oracle_kernels() {
    static const std::vector<KernelSetup> ks = {
        {"identity", KernelFunction::identity(), 0.0, 2.0, {0.7, 1.6},
         {0.6, 1.3}},
        {"log", KernelFunction::log_kernel(), 1.0, 4.0, {1.8, 3.2},
         {1.5, 2.8}},
        {"power:2", KernelFunction::power(2.0), 0.5, 2.5, {1.2, 2.1},
         {0.9, 1.7}},
        // anchored exactly at the kernel's lower endpoint on purpose
        {"shifted-power:2:0.25", KernelFunction::shifted_power(2.0, 0.25),
         0.25, 2.25, {1.0, 1.9}, {0.8, 1.6}},
    };
    return ks;
}

inline const QuadConfig& fixed128() {
    static const QuadConfig cfg{128, 128, 1e-10, 1e-12};
    return cfg;
}

} // namespace vdetail

/// Left/right integrals of the exponential-power family against their
/// closed forms, over all four kernel families.
inline std::vector<CheckResult> oracle_integral_checks(double scale = 1.0) {
    using namespace vdetail;
    std::vector<CheckResult> out;
    const QuadConfig cfg{};
    const double betas[] = {1.0, 1.5, 2.0, 2.7};
    const double alphas[] = {0.3, 0.5, 0.9, 1.5};
    const double rhos[] = {0.4, 0.8, 1.0};
    for (const KernelSetup& ks : oracle_kernels())
        for (double be : betas)
            for (double al : alphas)
                for (double rho : rhos) {
                    ExprAst fl = power_exp_left_input(ks.g, be, rho, ks.a);
                    for (double t : ks.t_left) {
                        double v =
                            left_integral(fl, ks.g, al, rho, ks.a, t, cfg)
                                .value;
                        double e =
                            cf_left_integral(al, be, rho, ks.g, ks.a, t);
                        out.push_back(make_check(
                            fmt("left-int  g=%-19s beta=%.2g alpha=%.2g "
                                "rho=%.2g t=%.3g",
                                ks.name, be, al, rho, t),
                            v, e, 1e-7 * scale));
                    }
                    ExprAst fr = power_exp_right_input(ks.g, be, rho, ks.b);
                    for (double t : ks.t_right) {
                        double v =
                            right_integral(fr, ks.g, al, rho, ks.b, t, cfg)
                                .value;
                        double e =
                            cf_right_integral(al, be, rho, ks.g, ks.b, t);
                        out.push_back(make_check(
                            fmt("right-int g=%-19s beta=%.2g alpha=%.2g "
                                "rho=%.2g t=%.3g",
                                ks.name, be, al, rho, t),
                            v, e, 1e-7 * scale));
                    }
                }
    return out;
}

/// Derivatives of the integral type on the same input family. The
/// reference vanishes when the order gap hits a pole of the coefficient;
/// those cases are compared absolutely.
inline std::vector<CheckResult> oracle_deriv_checks(double scale = 1.0) {
    using namespace vdetail;
    std::vector<CheckResult> out;
    const QuadConfig cfg{};
    const double betas[] = {1.5, 2.0, 2.7};
    const double alphas[] = {0.3, 0.5, 1.5};
    const double rhos[] = {0.5, 1.0};
    for (const KernelSetup& ks : oracle_kernels()) {
        if (ks.g.family() != KernelFamily::Identity &&
            ks.g.family() != KernelFamily::Log)
            continue;
        bool ident = ks.g.family() == KernelFamily::Identity;
        double tl = ident ? 1.2 : 2.2;
        double tr = ident ? 0.9 : 1.6;
        for (double be : betas)
            for (double al : alphas)
                for (double rho : rhos) {
                    ExprAst fl = power_exp_left_input(ks.g, be, rho, ks.a);
                    double v =
                        left_rl_deriv(fl, ks.g, al, rho, ks.a, tl, cfg).value;
                    double e = cf_left_rl_deriv(al, be, rho, ks.g, ks.a, tl);
                    out.push_back(make_check(
                        fmt("left-rl  g=%-8s beta=%.2g alpha=%.2g rho=%.2g "
                            "t=%.3g",
                            ks.name, be, al, rho, tl),
                        v, e, 1e-4 * scale));
                    ExprAst fr = power_exp_right_input(ks.g, be, rho, ks.b);
                    v = right_rl_deriv(fr, ks.g, al, rho, ks.b, tr, cfg).value;
                    e = cf_right_rl_deriv(al, be, rho, ks.g, ks.b, tr);
                    out.push_back(make_check(
                        fmt("right-rl g=%-8s beta=%.2g alpha=%.2g rho=%.2g "
                            "t=%.3g",
                            ks.name, be, al, rho, tr),
                        v, e, 1e-4 * scale));
                }
    }
    return out;
}

/// Derivatives of the Caputo type on inputs smooth enough for the closed
/// form (exponent above the derivative count).
inline std::vector<CheckResult> oracle_caputo_checks(double scale = 1.0) {
    using namespace vdetail;
    std::vector<CheckResult> out;
    const QuadConfig cfg{};
    const double deltas[] = {1.8, 2.0, 2.7, 3.5};
    const double alphas[] = {0.5, 1.5, 2.5};
    const double rhos[] = {0.4, 0.8, 1.0};
    for (const KernelSetup& ks : oracle_kernels())
        for (double al : alphas) {
            int n = n_from_alpha(al);
            for (double de : deltas)
                for (double rho : rhos) {
                    double be = n + de;
                    double tl = ks.t_left[0];
                    ExprAst fl = power_exp_left_input(ks.g, be, rho, ks.a);
                    double v =
                        left_caputo(fl, ks.g, al, rho, ks.a, tl, cfg).value;
                    double e = cf_left_caputo(al, be, rho, ks.g, ks.a, tl);
                    out.push_back(make_check(
                        fmt("left-cap  g=%-19s beta=%.2g alpha=%.2g rho=%.2g "
                            "t=%.3g",
                            ks.name, be, al, rho, tl),
                        v, e, 1e-7 * scale));
                    double tr = ks.t_right[0];
                    ExprAst fr = power_exp_right_input(ks.g, be, rho, ks.b);
                    v = right_caputo(fr, ks.g, al, rho, ks.b, tr, cfg).value;
                    e = cf_right_caputo(al, be, rho, ks.g, ks.b, tr);
                    out.push_back(make_check(
                        fmt("right-cap g=%-19s beta=%.2g alpha=%.2g rho=%.2g "
                            "t=%.3g",
                            ks.name, be, al, rho, tr),
                        v, e, 1e-7 * scale));
                }
        }
    return out;
}

/// Caputo derivatives annihilate the low-degree members of the input
/// family: exponent k below the derivative count gives exactly zero.
inline std::vector<CheckResult> annihilation_checks(double scale = 1.0) {
    using namespace vdetail;
    std::vector<CheckResult> out;
    const QuadConfig cfg{};
    const double alphas[] = {0.5, 1.5};
    const double rhos[] = {0.4, 1.0};
    for (const KernelSetup& ks : oracle_kernels())
        for (double al : alphas) {
            int n = n_from_alpha(al);
            for (int k = 0; k < n; ++k)
                for (double rho : rhos) {
                    double be = k + 1.0;
                    double tl = ks.t_left[1];
                    ExprAst fl = power_exp_left_input(ks.g, be, rho, ks.a);
                    double v =
                        left_caputo(fl, ks.g, al, rho, ks.a, tl, cfg).value;
                    out.push_back(make_check(
                        fmt("left-cap  g=%-19s k=%d alpha=%.2g rho=%.2g",
                            ks.name, k, al, rho),
                        v, 0.0, 1e-8 * scale));
                    double tr = ks.t_right[1];
                    ExprAst fr = power_exp_right_input(ks.g, be, rho, ks.b);
                    v = right_caputo(fr, ks.g, al, rho, ks.b, tr, cfg).value;
                    out.push_back(make_check(
                        fmt("right-cap g=%-19s k=%d alpha=%.2g rho=%.2g",
                            ks.name, k, al, rho),
                        v, 0.0, 1e-8 * scale));
                }
        }
    return out;
}

/// Composing two integrals equals the single integral of the summed
/// order, and the composition order does not matter. The outer integral
/// absorbs the inner result's vanishing rate at the anchor into the
/// quadrature weight, which keeps the composition spectrally accurate.
inline std::vector<CheckResult> semigroup_checks(double scale = 1.0) {
    using namespace vdetail;
    std::vector<CheckResult> out;
    const QuadConfig cfg{};
    struct Pair {
        double alpha, beta;
    };
    const Pair pairs[] = {{0.3, 0.4}, {0.5, 0.5}, {1.2, 0.6}};
    const double rhos[] = {0.5, 1.0};
    const char* fs[] = {"1", "x", "cos(x)"};
    struct Setup {
        const char* name;
        KernelFunction g;
        double a, b;
        double lo_l, hi_l, lo_r, hi_r;
    };
    const Setup setups[] = {
        {"identity", KernelFunction::identity(), 0.0, 2.0, 0.25, 1.6, 0.35,
         1.75},
        {"log", KernelFunction::log_kernel(), 1.0, 4.0, 1.3, 3.4, 1.5, 3.6},
        {"power:2", KernelFunction::power(2.0), 0.4, 2.4, 0.9, 2.2, 0.8,
         2.1},
    };
    for (const Setup& s : setups)
        for (const Pair& pr : pairs)
            for (double rho : rhos)
                for (const char* ftxt : fs) {
                    ExprAst f = ExprAst::parse(ftxt);
                    auto fe = [&](double x) { return f.eval(x); };
                    // left side
                    auto Ga = [&](double x) {
                        return left_integral(f, s.g, pr.alpha, rho, s.a, x,
                                             cfg)
                            .value;
                    };
                    auto Gb = [&](double x) {
                        return left_integral(f, s.g, pr.beta, rho, s.a, x,
                                             cfg)
                            .value;
                    };
                    for (double t : linspace(s.lo_l, s.hi_l, 10)) {
                        double ab = left_integral_fn(Gb, s.g, pr.alpha, rho,
                                                     s.a, t, cfg, pr.beta)
                                        .value;
                        double ba = left_integral_fn(Ga, s.g, pr.beta, rho,
                                                     s.a, t, cfg, pr.alpha)
                                        .value;
                        double direct =
                            left_integral_fn(fe, s.g, pr.alpha + pr.beta, rho,
                                             s.a, t, cfg)
                                .value;
                        out.push_back(make_check(
                            fmt("semigroup-l g=%-8s a=%.2g b=%.2g rho=%.2g "
                                "f=%-6s t=%.3g",
                                s.name, pr.alpha, pr.beta, rho, ftxt, t),
                            ab, direct, 1e-7 * scale, 1e-3));
                        out.push_back(make_check(
                            fmt("commute-l   g=%-8s a=%.2g b=%.2g rho=%.2g "
                                "f=%-6s t=%.3g",
                                s.name, pr.alpha, pr.beta, rho, ftxt, t),
                            ab, ba, 1e-8 * scale, 1e-3));
                    }
                    // right side
                    auto Har = [&](double x) {
                        return right_integral(f, s.g, pr.alpha, rho, s.b, x,
                                              cfg)
                            .value;
                    };
                    auto Hbr = [&](double x) {
                        return right_integral(f, s.g, pr.beta, rho, s.b, x,
                                              cfg)
                            .value;
                    };
                    for (double t : linspace(s.lo_r, s.hi_r, 10)) {
                        double ab = right_integral_fn(Hbr, s.g, pr.alpha, rho,
                                                      s.b, t, cfg, pr.beta)
                                        .value;
                        double ba = right_integral_fn(Har, s.g, pr.beta, rho,
                                                      s.b, t, cfg, pr.alpha)
                                        .value;
                        double direct =
                            right_integral_fn(fe, s.g, pr.alpha + pr.beta,
                                              rho, s.b, t, cfg)
                                .value;
                        out.push_back(make_check(
                            fmt("semigroup-r g=%-8s a=%.2g b=%.2g rho=%.2g "
                                "f=%-6s t=%.3g",
                                s.name, pr.alpha, pr.beta, rho, ftxt, t),
                            ab, direct, 1e-7 * scale, 1e-3));
                        out.push_back(make_check(
                            fmt("commute-r   g=%-8s a=%.2g b=%.2g rho=%.2g "
                                "f=%-6s t=%.3g",
                                s.name, pr.alpha, pr.beta, rho, ftxt, t),
                            ab, ba, 1e-8 * scale, 1e-3));
                    }
                }
    return out;
}

/// Derivative of the integral type applied to the matching integral
/// recovers the operand. Both quadrature levels run with fixed node
/// counts so the differencing stencil sees a smooth function.
inline std::vector<CheckResult> inverse_checks(double scale = 1.0) {
    using namespace vdetail;
    std::vector<CheckResult> out;
    const QuadConfig& fixed = fixed128();
    const double alphas[] = {0.3, 0.5, 1.5};
    const double rhos[] = {0.5, 1.0};
    const char* fs[] = {"1", "cos(x)"};
    struct Setup {
        const char* name;
        KernelFunction g;
        double a, b;
        double lo_l, hi_l, lo_r, hi_r;
    };
    const Setup setups[] = {
        {"identity", KernelFunction::identity(), 0.0, 2.0, 0.2, 1.4, 0.5,
         1.4},
        {"log", KernelFunction::log_kernel(), 1.0, 4.0, 1.15, 3.3, 1.9, 3.7},
    };
    for (const Setup& s : setups)
        for (double al : alphas) {
            int n = n_from_alpha(al);
            double inner = n - al;
            for (double rho : rhos)
                for (const char* ftxt : fs) {
                    ExprAst f = ExprAst::parse(ftxt);
                    auto fe = [&](double x) { return f.eval(x); };
                    auto G = [&](double x) {
                        return left_integral_fn(fe, s.g, al, rho, s.a, x,
                                                fixed)
                            .value;
                    };
                    auto F = [&](double x) {
                        return left_integral_fn(G, s.g, inner, rho, s.a, x,
                                                fixed, al)
                            .value;
                    };
                    auto pts = well_conditioned(linspace(s.lo_l, s.hi_l, 14),
                                                fe, 0.2, 10);
                    for (double t : pts) {
                        double v = detail::stencil_prop_deriv_n(
                                       F, s.g, rho, n, t - s.a,
                                       s.g.domain_hi() - t, t, false)
                                       .value;
                        out.push_back(make_check(
                            fmt("inverse-l g=%-8s alpha=%.2g rho=%.2g f=%-6s "
                                "t=%.4g",
                                s.name, al, rho, ftxt, t),
                            v, f.eval(t), 1e-4 * scale, 1e-2));
                    }
                    // right-side mirror (one order per setup keeps it light)
                    if (al != 0.5 || std::string(ftxt) != "cos(x)") continue;
                    auto Gr = [&](double x) {
                        return right_integral_fn(fe, s.g, al, rho, s.b, x,
                                                 fixed)
                            .value;
                    };
                    auto Fr = [&](double x) {
                        return right_integral_fn(Gr, s.g, inner, rho, s.b, x,
                                                 fixed, al)
                            .value;
                    };
                    auto rpts = well_conditioned(
                        linspace(s.lo_r, s.hi_r, 14), fe, 0.2, 10);
                    for (double t : rpts) {
                        double v = detail::stencil_prop_deriv_n(
                                       Fr, s.g, rho, n, t - s.g.domain_lo(),
                                       s.b - t, t, true)
                                       .value;
                        out.push_back(make_check(
                            fmt("inverse-r g=%-8s alpha=%.2g rho=%.2g f=%-6s "
                                "t=%.4g",
                                s.name, al, rho, ftxt, t),
                            v, f.eval(t), 1e-4 * scale, 1e-2));
                    }
                }
        }
    return out;
}

/// A derivative of lower order applied to an integral of higher order
/// reduces to the integral of the difference order.
inline std::vector<CheckResult> order_reduction_checks(double scale = 1.0) {
    using namespace vdetail;
    std::vector<CheckResult> out;
    const QuadConfig cfg{};
    const QuadConfig& fixed = fixed128();
    struct Pair {
        double beta, alpha;
    };
    const Pair pairs[] = {{0.4, 1.1}, {0.5, 0.8}};
    const double rhos[] = {0.5, 1.0};
    const char* fs[] = {"1", "cos(x)"};
    struct Setup {
        const char* name;
        KernelFunction g;
        double a;
        double lo, hi;
    };
    const Setup setups[] = {
        {"identity", KernelFunction::identity(), 0.0, 0.25, 1.5},
        {"log", KernelFunction::log_kernel(), 1.0, 1.2, 3.4},
    };
    for (const Setup& s : setups)
        for (const Pair& pr : pairs)
            for (double rho : rhos)
                for (const char* ftxt : fs) {
                    ExprAst f = ExprAst::parse(ftxt);
                    auto fe = [&](double x) { return f.eval(x); };
                    auto G = [&](double x) {
                        return left_integral_fn(fe, s.g, pr.alpha, rho, s.a,
                                                x, fixed)
                            .value;
                    };
                    auto F = [&](double x) {
                        return left_integral_fn(G, s.g, 1.0 - pr.beta, rho,
                                                s.a, x, fixed, pr.alpha)
                            .value;
                    };
                    auto rhs = [&](double t) {
                        return left_integral_fn(fe, s.g, pr.alpha - pr.beta,
                                                rho, s.a, t, cfg)
                            .value;
                    };
                    auto pts = well_conditioned(linspace(s.lo, s.hi, 10),
                                                rhs, 0.05, 5);
                    for (double t : pts) {
                        double v = detail::stencil_prop_deriv_n(
                                       F, s.g, rho, 1, t - s.a,
                                       s.g.domain_hi() - t, t, false)
                                       .value;
                        out.push_back(make_check(
                            fmt("reduce-order g=%-8s b=%.2g a=%.2g rho=%.2g "
                                "f=%-6s t=%.4g",
                                s.name, pr.beta, pr.alpha, rho, ftxt, t),
                            v, rhs(t), 1e-4 * scale, 1e-2));
                    }
                }
    return out;
}

/// With rate 1 and the plain kernel the integral is the classical
/// fractional integral; with the logarithmic and power kernels it must
/// agree with the classical form after the matching change of variables.
inline std::vector<CheckResult> classical_reduction_checks(
    double scale = 1.0) {
    using namespace vdetail;
    std::vector<CheckResult> out;
    const QuadConfig cfg{};
    const KernelFunction id = KernelFunction::identity();

    const double alphas[] = {0.5, 1.5};
    const char* powers[] = {"1", "x", "x^2"};
    for (double al : alphas)
        for (int p = 0; p < 3; ++p) {
            ExprAst f = ExprAst::parse(powers[p]);
            for (double t : {0.5, 1.0, 2.0}) {
                double v = left_integral(f, id, al, 1.0, 0.0, t, cfg).value;
                double e = cf_classical_rl_power((double)p, al, t);
                out.push_back(make_check(
                    fmt("classical p=%d alpha=%.2g t=%.3g", p, al, t), v, e,
                    1e-8 * scale));
            }
        }

    // change-of-variables agreement: evaluate with the kernel directly,
    // then as a plain-kernel integral of the substituted operand
    struct Subst {
        const char* name;
        KernelFunction g;
        double a;
        double ts[2];
        const char* comp[2];  // operand composed with the kernel inverse
    };
    const char* fs[] = {"x^2+1", "cos(x)"};
    const Subst substs[] = {
        {"log", KernelFunction::log_kernel(), 1.0, {2.0, 3.5},
         {"exp(x)^2+1", "cos(exp(x))"}},
        {"power:2", KernelFunction::power(2.0), 0.5, {1.3, 2.2},
         {"sqrt(2*x)^2+1", "cos(sqrt(2*x))"}},
        {"shifted-power:2:0.25", KernelFunction::shifted_power(2.0, 0.25),
         0.25, {1.2, 2.0},
         {"(0.25+sqrt(2*x))^2+1", "cos(0.25+sqrt(2*x))"}},
    };
    const double alphas2[] = {0.5, 1.2};
    for (const Subst& s : substs)
        for (int fi = 0; fi < 2; ++fi) {
            ExprAst f = ExprAst::parse(fs[fi]);
            ExprAst comp = ExprAst::parse(s.comp[fi]);
            for (double al : alphas2)
                for (double t : s.ts) {
                    double lhs =
                        left_integral(f, s.g, al, 1.0, s.a, t, cfg).value;
                    double rhs = left_integral(comp, id, al, 1.0,
                                               s.g.eval(s.a), s.g.eval(t),
                                               cfg)
                                     .value;
                    out.push_back(make_check(
                        fmt("substitute g=%-19s f=%-6s alpha=%.2g t=%.3g",
                            s.name, fs[fi], al, t),
                        lhs, rhs, 1e-9 * scale, 1e-3));
                }
        }
    return out;
}

/// Taylor-jet derivatives of a small expression corpus against
/// Richardson-extrapolated central differences.
inline std::vector<CheckResult> jet_fd_checks(double scale = 1.0) {
    using namespace vdetail;
    std::vector<CheckResult> out;
    const char* corpus[] = {
        "x^3 - 2*x",     "sin(x)*exp(x)", "exp(-x^2)", "ln(1+x^2)",
        "sqrt(1+x^2)",   "1/(1+x)",       "x^2.5",     "cos(2*x)*x^2",
    };
    const double xs[] = {0.3, 0.7, 1.2, 1.9};
    const double hs[] = {0.0, 1e-4, 1e-3, 5e-3};  // per derivative order
    for (const char* txt : corpus) {
        ExprAst f = ExprAst::parse(txt);
        for (double x : xs) {
            Jet j = f.eval_jet(x, 3);
            for (int k = 1; k <= 3; ++k) {
                double h = hs[k] * std::max(1.0, std::fabs(x));
                auto fd = [&](double step) {
                    switch (k) {
                    case 1:
                        return (f.eval(x + step) - f.eval(x - step)) /
                               (2 * step);
                    case 2:
                        return (f.eval(x + step) - 2 * f.eval(x) +
                                f.eval(x - step)) /
                               (step * step);
                    default:
                        return (f.eval(x + 2 * step) - 2 * f.eval(x + step) +
                                2 * f.eval(x - step) - f.eval(x - 2 * step)) /
                               (2 * step * step * step);
                    }
                };
                double rich = (4.0 * fd(0.5 * h) - fd(h)) / 3.0;
                if (std::fabs(rich) <= 1e-8) continue;  // no stable reference
                out.push_back(make_check(
                    fmt("jet f=%-13s x=%.2g order=%d", txt, x, k),
                    j.derivative(k), rich, 1e-6 * scale, 1e-6));
            }
        }
    }
    return out;
}

/// Gamma implementation invariants: the recurrence on a positive range
/// and the reflection identity on the unit interval.
inline std::vector<CheckResult> gamma_checks(double scale = 1.0) {
    using namespace vdetail;
    std::vector<CheckResult> out;
    for (double x : linspace(0.5, 29.5, 200)) {
        double lhs = gamma_fn(x + 1.0);
        double rhs = x * gamma_fn(x);
        out.push_back(make_check(fmt("recurrence x=%.6g", x), rhs, lhs,
                                 1e-12 * scale));
    }
    for (int i = 1; i <= 19; ++i) {
        double x = 0.05 * i;
        double lhs = gamma_fn(x) * gamma_fn(1.0 - x);
        double rhs = std::numbers::pi / std::sin(std::numbers::pi * x);
        out.push_back(
            make_check(fmt("reflection x=%.3g", x), lhs, rhs, 1e-11 * scale));
    }
    return out;
}

struct SuiteReport {
    std::string name;
    std::vector<CheckResult> checks;

    bool all_pass() const {
        for (const CheckResult& c : checks)
            if (!c.pass) return false;
        return true;
    }
    int fail_count() const {
        int n = 0;
        for (const CheckResult& c : checks) n += !c.pass;
        return n;
    }
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "oracles", "semigroup", "inverse", "reductions", "annihilation"};
    return names;
}

/// Runs one named suite ("all" chains every suite). scale multiplies
/// every tolerance; 1 is the shipped gate.
inline SuiteReport run_suite(const std::string& name, double scale = 1.0) {
    auto append = [](std::vector<CheckResult>& dst,
                     std::vector<CheckResult> src) {
        for (auto& c : src) dst.push_back(std::move(c));
    };
    SuiteReport rep;
    rep.name = name;
    if (name == "oracles" || name == "all") {
        append(rep.checks, oracle_integral_checks(scale));
        append(rep.checks, oracle_deriv_checks(scale));
        append(rep.checks, oracle_caputo_checks(scale));
    }
    if (name == "semigroup" || name == "all")
        append(rep.checks, semigroup_checks(scale));
    if (name == "inverse" || name == "all") {
        append(rep.checks, inverse_checks(scale));
        append(rep.checks, order_reduction_checks(scale));
    }
    if (name == "reductions" || name == "all")
        append(rep.checks, classical_reduction_checks(scale));
    if (name == "annihilation" || name == "all")
        append(rep.checks, annihilation_checks(scale));
    if (rep.checks.empty() && name != "all")
        throw domain_error("unknown suite '" + name + "'");
    return rep;
}

} // namespace propfrac
