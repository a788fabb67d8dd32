#pragma once

#include <cmath>
#include <utility>

#include "propfrac/errors.hpp"
#include "propfrac/expr.hpp"
#include "propfrac/jet.hpp"
#include "propfrac/kernels.hpp"
#include "propfrac/quadrature.hpp"

namespace propfrac {

namespace detail {

inline void require_rho_closed(double rho) {
    if (!(rho >= 0.0 && rho <= 1.0))
        throw domain_error("proportion must lie in [0,1]");
}

inline void require_rho_positive(double rho) {
    if (!(rho > 0.0 && rho <= 1.0))
        throw domain_error("proportion must lie in (0,1]");
}

inline void require_order_n(int n) {
    if (n < 1 || n > Jet::max_order)
        throw domain_error("derivative iteration count must be in [1, 4]");
}

// Value of the n-fold operator ((1-rho) +/- rho*(d/dt)/g')^n applied to
// the function carried by fj, where fj and gj are jets of order n at the
// same point. Each application lowers the jet order by one.
inline double prop_chain(const Jet& fj, const Jet& gj, double rho, int n,
                         bool reversed) {
    Jet u = fj;
    Jet gp = gj.derivative_jet();
    double r = reversed ? -rho : rho;
    for (int k = 0; k < n; ++k)
        u = (1.0 - rho) * u + r * (u.derivative_jet() / gp);
    return u.value();
}

} // namespace detail

/// n-fold local proportional derivative at t:
/// one application maps f to (1-rho)*f + rho*f'/g'.
inline double prop_deriv_n(const ExprAst& f, const KernelFunction& g,
                           double rho, int n, double t) {
    detail::require_rho_closed(rho);
    detail::require_order_n(n);
    if (rho == 0.0) return f.eval(t);
    return detail::prop_chain(f.eval_jet(t, n), g.jet(t, n), rho, n, false);
}

inline double prop_deriv(const ExprAst& f, const KernelFunction& g,
                         double rho, double t) {
    return prop_deriv_n(f, g, rho, 1, t);
}

/// Reversed operator, used by all right-sided compositions:
/// one application maps f to (1-rho)*f - rho*f'/g'.
inline double prop_deriv_reverse_n(const ExprAst& f, const KernelFunction& g,
                                   double rho, int n, double t) {
    detail::require_rho_closed(rho);
    detail::require_order_n(n);
    if (rho == 0.0) return f.eval(t);
    return detail::prop_chain(f.eval_jet(t, n), g.jet(t, n), rho, n, true);
}

inline double prop_deriv_reverse(const ExprAst& f, const KernelFunction& g,
                                 double rho, double t) {
    return prop_deriv_reverse_n(f, g, rho, 1, t);
}

/// Order-1 proportional integral
/// (1/rho) * integral_a^t exp(((rho-1)/rho)(g(t)-g(s))) f(s) g'(s) ds
/// for any callable f; the integrand is smooth, so a doubling
/// Gauss-Legendre rule on the normalized interval is used.
template <class Func>
QuadResult prop_integral_1_fn(Func&& fv, const KernelFunction& g, double rho,
                              double a, double t, const QuadConfig& cfg) {
    detail::require_rho_positive(rho);
    cfg.validate();
    if (t == a) return {0.0, 0.0, true, 0};
    if (!(t > a)) throw domain_error("upper limit must be >= anchor");
    double gt = g.eval(t);
    double lam = (rho - 1.0) / rho;
    double len = t - a;
    auto apply = [&](const JacobiRule& r) {
        double acc = 0.0;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            double s = a + r.nodes[i] * len;
            acc += r.weights[i] * std::exp(lam * (gt - g.eval(s))) * fv(s) *
                   g.prime(s);
        }
        return acc * (len / rho);
    };
    return refine_doubling(0.0, 1.0, cfg, apply);
}

inline QuadResult prop_integral_1(const ExprAst& f, const KernelFunction& g,
                                  double rho, double a, double t,
                                  const QuadConfig& cfg = {}) {
    return prop_integral_1_fn([&](double s) { return f.eval(s); }, g, rho, a,
                              t, cfg);
}

} // namespace propfrac
