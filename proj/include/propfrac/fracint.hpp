#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "propfrac/errors.hpp"
#include "propfrac/expr.hpp"
#include "propfrac/gamma.hpp"
#include "propfrac/kernels.hpp"
#include "propfrac/propderiv.hpp"
#include "propfrac/quadrature.hpp"

namespace propfrac {

/// Grid of operator values with per-point error estimates.
struct EvalRow {
    double t = 0.0;
    double value = 0.0;
    double error_estimate = 0.0;
};

struct EvalTable {
    std::vector<EvalRow> rows;   // t strictly increasing
    std::string meta;            // canonical description of the operator
};

namespace detail {

inline void require_alpha_positive(double alpha) {
    if (!(alpha > 0.0)) throw domain_error("integral order must be > 0");
}

// Compensated accumulator. The node sums feed numerical differentiation
// with steps near 1e-5, which amplifies summation roundoff by ~1e10; plain
// accumulation over 512 terms would eat most of the derivative tolerance.
struct KahanSum {
    double acc = 0.0;
    double comp = 0.0;
    void add(double x) {
        double y = x - comp;
        double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
};

} // namespace detail

/// Left fractional proportional integral of a callable f:
/// (1/(rho^alpha Gamma(alpha))) * integral_a^t
///   exp(((rho-1)/rho)(g(t)-g(tau))) (g(t)-g(tau))^{alpha-1} f(tau) g'(tau) dtau
/// evaluated after the substitution z = (g(t)-g(tau))/(g(t)-g(a)), whose
/// weight z^{alpha-1} the quadrature rule integrates exactly.
///
/// `end_exponent` declares a known (1-z)^sigma factor of the transformed
/// integrand (f vanishing at the anchor like (g-g(a))^sigma); the rule then
/// absorbs that endpoint too. Compositions of integrals use this; plain
/// evaluations leave it 0.
template <class Func>
QuadResult left_integral_fn(Func&& fv, const KernelFunction& g, double alpha,
                            double rho, double a, double t,
                            const QuadConfig& cfg, double end_exponent = 0.0) {
    detail::require_alpha_positive(alpha);
    detail::require_rho_positive(rho);
    cfg.validate();
    if (t == a) return {0.0, 0.0, true, 0};
    if (!(t > a)) throw domain_error("t must be >= anchor a");
    const double ga = g.eval(a);
    const double gt = g.eval(t);
    const double delta = gt - ga;
    const double lam = (rho - 1.0) / rho * delta;
    const double pref =
        std::pow(delta, alpha) / (std::pow(rho, alpha) * gamma_fn(alpha));
    auto apply = [&](const JacobiRule& r) {
        detail::KahanSum acc;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            double z = r.nodes[i];
            double tau = g.inverse(gt - z * delta, a, t);
            double u = std::exp(lam * z) * fv(tau);
            if (end_exponent != 0.0) u /= std::pow(1.0 - z, end_exponent);
            acc.add(r.weights[i] * u);
        }
        return acc.acc;
    };
    QuadResult res = refine_doubling(end_exponent, alpha, cfg, apply);
    res.value *= pref;
    res.error_estimate *= std::fabs(pref);
    return res;
}

/// Right fractional proportional integral of a callable f:
/// (1/(rho^alpha Gamma(alpha))) * integral_t^b
///   exp(((rho-1)/rho)(g(tau)-g(t))) (g(tau)-g(t))^{alpha-1} f(tau) g'(tau) dtau
/// with the mirror substitution z = (g(tau)-g(t))/(g(b)-g(t)).
template <class Func>
QuadResult right_integral_fn(Func&& fv, const KernelFunction& g, double alpha,
                             double rho, double b, double t,
                             const QuadConfig& cfg, double end_exponent = 0.0) {
    detail::require_alpha_positive(alpha);
    detail::require_rho_positive(rho);
    cfg.validate();
    if (t == b) return {0.0, 0.0, true, 0};
    if (!(t < b)) throw domain_error("t must be <= anchor b");
    const double gb = g.eval(b);
    const double gt = g.eval(t);
    const double delta = gb - gt;
    const double lam = (rho - 1.0) / rho * delta;
    const double pref =
        std::pow(delta, alpha) / (std::pow(rho, alpha) * gamma_fn(alpha));
    auto apply = [&](const JacobiRule& r) {
        detail::KahanSum acc;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            double z = r.nodes[i];
            double tau = g.inverse(gt + z * delta, t, b);
            double u = std::exp(lam * z) * fv(tau);
            if (end_exponent != 0.0) u /= std::pow(1.0 - z, end_exponent);
            acc.add(r.weights[i] * u);
        }
        return acc.acc;
    };
    QuadResult res = refine_doubling(end_exponent, alpha, cfg, apply);
    res.value *= pref;
    res.error_estimate *= std::fabs(pref);
    return res;
}

inline QuadResult left_integral(const ExprAst& f, const KernelFunction& g,
                                double alpha, double rho, double a, double t,
                                const QuadConfig& cfg = {}) {
    return left_integral_fn([&](double tau) { return f.eval(tau); }, g, alpha,
                            rho, a, t, cfg);
}

inline QuadResult right_integral(const ExprAst& f, const KernelFunction& g,
                                 double alpha, double rho, double b, double t,
                                 const QuadConfig& cfg = {}) {
    return right_integral_fn([&](double tau) { return f.eval(tau); }, g,
                             alpha, rho, b, t, cfg);
}

} // namespace propfrac
