#pragma once

#include <cmath>
#include <string>

#include "propfrac/errors.hpp"
#include "propfrac/expr.hpp"
#include "propfrac/fracderiv.hpp"
#include "propfrac/gamma.hpp"
#include "propfrac/kernels.hpp"

namespace propfrac {

enum class OpKind {
    LeftIntegral,
    RightIntegral,
    LeftRL,
    RightRL,
    LeftCaputo,
    RightCaputo,
};

/// One reference-value binding: operator, parameters, evaluation point,
/// and the closed-form expected value.
struct OracleCase {
    OpKind kind = OpKind::LeftIntegral;
    double alpha = 0.0;
    double beta = 0.0;
    double rho = 1.0;
    KernelFunction g = KernelFunction::identity();
    double anchor = 0.0;  // a for left operators, b for right ones
    double t = 0.0;
    double expected = 0.0;
    std::string label;
};

/// The kernel as an expression in x (used to assemble test functions that
/// depend on g).
inline ExprAst kernel_ast(const KernelFunction& g) {
    switch (g.family()) {
    case KernelFamily::Identity:
        return expr_var();
    case KernelFamily::Log:
        return expr_call(FuncId::Ln, expr_var());
    case KernelFamily::Power:
        return pow_expr(expr_var(), expr_const(g.mu())) / expr_const(g.mu());
    case KernelFamily::ShiftedPower:
        return pow_expr(expr_var() - expr_const(g.shift()),
                        expr_const(g.mu())) /
               expr_const(g.mu());
    case KernelFamily::Custom:
        return g.expr();
    }
    throw domain_error("corrupt kernel");
}

/// exp(((rho-1)/rho) g(x)) * (g(x)-g(a))^{beta-1}: the function whose
/// left-sided transforms all have closed forms.
inline ExprAst power_exp_left_input(const KernelFunction& g, double beta,
                                    double rho, double a) {
    ExprAst gx = kernel_ast(g);
    double c = (rho - 1.0) / rho;
    ExprAst factor = expr_call(FuncId::Exp, expr_const(c) * gx);
    return factor * pow_expr(gx - expr_const(g.eval(a)),
                             expr_const(beta - 1.0));
}

/// exp(-((rho-1)/rho) g(x)) * (g(b)-g(x))^{beta-1}: right-sided mirror.
inline ExprAst power_exp_right_input(const KernelFunction& g, double beta,
                                     double rho, double b) {
    ExprAst gx = kernel_ast(g);
    double c = (rho - 1.0) / rho;
    ExprAst factor = expr_call(FuncId::Exp, expr_const(-c) * gx);
    return factor * pow_expr(expr_const(g.eval(b)) - gx,
                             expr_const(beta - 1.0));
}

/// Left integral of power_exp_left_input:
/// Gamma(beta)/(Gamma(beta+alpha) rho^alpha)
///   * exp(((rho-1)/rho) g(t)) (g(t)-g(a))^{alpha+beta-1}.
inline double cf_left_integral(double alpha, double beta, double rho,
                               const KernelFunction& g, double a, double t) {
    if (!(alpha > 0.0)) throw domain_error("closed form needs alpha > 0");
    if (!(beta > 0.0)) throw domain_error("closed form needs beta > 0");
    detail::require_rho_positive(rho);
    double gt = g.eval(t);
    double ga = g.eval(a);
    return gamma_fn(beta) /
           (gamma_fn(beta + alpha) * std::pow(rho, alpha)) *
           std::exp((rho - 1.0) / rho * gt) *
           std::pow(gt - ga, alpha + beta - 1.0);
}

/// Right integral of power_exp_right_input (mirror formula).
inline double cf_right_integral(double alpha, double beta, double rho,
                                const KernelFunction& g, double b, double t) {
    if (!(alpha > 0.0)) throw domain_error("closed form needs alpha > 0");
    if (!(beta > 0.0)) throw domain_error("closed form needs beta > 0");
    detail::require_rho_positive(rho);
    double gt = g.eval(t);
    double gb = g.eval(b);
    return gamma_fn(beta) /
           (gamma_fn(beta + alpha) * std::pow(rho, alpha)) *
           std::exp(-(rho - 1.0) / rho * gt) *
           std::pow(gb - gt, alpha + beta - 1.0);
}

/// Left derivative (integral type) of power_exp_left_input:
/// rho^alpha Gamma(beta)/Gamma(beta-alpha)
///   * exp(((rho-1)/rho) g(t)) (g(t)-g(a))^{beta-1-alpha},
/// exactly 0 when beta-alpha hits a pole of Gamma.
inline double cf_left_rl_deriv(double alpha, double beta, double rho,
                               const KernelFunction& g, double a, double t) {
    if (!(alpha >= 0.0)) throw domain_error("closed form needs alpha >= 0");
    if (!(beta > 0.0)) throw domain_error("closed form needs beta > 0");
    detail::require_rho_positive(rho);
    double rg = reciprocal_gamma(beta - alpha);
    if (rg == 0.0) return 0.0;
    double gt = g.eval(t);
    double ga = g.eval(a);
    return std::pow(rho, alpha) * gamma_fn(beta) * rg *
           std::exp((rho - 1.0) / rho * gt) *
           std::pow(gt - ga, beta - 1.0 - alpha);
}

inline double cf_right_rl_deriv(double alpha, double beta, double rho,
                                const KernelFunction& g, double b, double t) {
    if (!(alpha >= 0.0)) throw domain_error("closed form needs alpha >= 0");
    if (!(beta > 0.0)) throw domain_error("closed form needs beta > 0");
    detail::require_rho_positive(rho);
    double rg = reciprocal_gamma(beta - alpha);
    if (rg == 0.0) return 0.0;
    double gt = g.eval(t);
    double gb = g.eval(b);
    return std::pow(rho, alpha) * gamma_fn(beta) * rg *
           std::exp(-(rho - 1.0) / rho * gt) *
           std::pow(gb - gt, beta - 1.0 - alpha);
}

namespace detail {

inline bool is_annihilated_exponent(double beta, int n) {
    // input exponent k = beta-1 is an integer in {0..n-1}
    double k = beta - 1.0;
    return std::floor(k) == k && k >= 0.0 && k <= n - 1.0;
}

} // namespace detail

/// Caputo-type left derivative of power_exp_left_input. Requires either
/// beta > n (closed-form branch, same formula as the integral-type
/// derivative) or integer exponent beta-1 in {0..n-1} (annihilated: 0).
inline double cf_left_caputo(double alpha, double beta, double rho,
                             const KernelFunction& g, double a, double t) {
    if (!(alpha > 0.0)) throw domain_error("closed form needs alpha > 0");
    int n = n_from_alpha(alpha);
    if (beta > (double)n) return cf_left_rl_deriv(alpha, beta, rho, g, a, t);
    if (detail::is_annihilated_exponent(beta, n)) return 0.0;
    throw domain_error("caputo closed form needs beta > n or integer "
                       "exponent below n");
}

inline double cf_right_caputo(double alpha, double beta, double rho,
                              const KernelFunction& g, double b, double t) {
    if (!(alpha > 0.0)) throw domain_error("closed form needs alpha > 0");
    int n = n_from_alpha(alpha);
    if (beta > (double)n) return cf_right_rl_deriv(alpha, beta, rho, g, b, t);
    if (detail::is_annihilated_exponent(beta, n)) return 0.0;
    throw domain_error("caputo closed form needs beta > n or integer "
                       "exponent below n");
}

/// Classical left integral of x^p anchored at 0 (kernel g = t, rho = 1):
/// Gamma(p+1)/Gamma(p+1+alpha) * t^{p+alpha}.
inline double cf_classical_rl_power(double p, double alpha, double t) {
    if (!(p > -1.0)) throw domain_error("closed form needs p > -1");
    if (!(alpha > 0.0)) throw domain_error("closed form needs alpha > 0");
    if (!(t > 0.0)) throw domain_error("closed form needs t > 0");
    return gamma_fn(p + 1.0) / gamma_fn(p + 1.0 + alpha) *
           std::pow(t, p + alpha);
}

} // namespace propfrac
