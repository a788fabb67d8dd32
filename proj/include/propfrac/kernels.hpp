#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>

#include "propfrac/errors.hpp"
#include "propfrac/expr.hpp"
#include "propfrac/jet.hpp"

namespace propfrac {

enum class KernelFamily { Identity, Log, Power, ShiftedPower, Custom };

/// Result of sampling-based monotonicity validation.
struct KernelCheck {
    bool ok = true;
    double t = 0.0;       // location of the first violation
    double g_prime = 0.0; // observed derivative there (0 when evaluation failed)
    std::string message;
};

/// Strictly increasing kernel g with evaluators for g, g', g^{-1}.
///
/// Built-in families: Identity (g=t), Log (g=ln t), Power (g=t^mu/mu),
/// ShiftedPower (g=(t-a)^mu/mu), plus Custom expression kernels.
/// The domain is an open interval; the two power families additionally
/// accept the left endpoint in eval/inverse, where g extends continuously
/// to 0 (so an anchor placed at the shift is usable).
class KernelFunction {
public:
    static KernelFunction identity() {
        return KernelFunction(KernelFamily::Identity, -inf(), inf());
    }
    static KernelFunction log_kernel() {
        return KernelFunction(KernelFamily::Log, 0.0, inf());
    }
    static KernelFunction power(double mu) {
        require_mu(mu);
        KernelFunction k(KernelFamily::Power, 0.0, inf());
        k.mu_ = mu;
        return k;
    }
    static KernelFunction shifted_power(double mu, double shift) {
        require_mu(mu);
        KernelFunction k(KernelFamily::ShiftedPower, shift, inf());
        k.mu_ = mu;
        k.shift_ = shift;
        return k;
    }
    static KernelFunction custom(ExprAst expr,
                                 double lo = -inf(), double hi = inf()) {
        if (!expr) throw kernel_error("custom kernel needs an expression");
        if (!(lo < hi)) throw kernel_error("custom kernel domain is empty");
        KernelFunction k(KernelFamily::Custom, lo, hi);
        k.expr_ = std::move(expr);
        return k;
    }

    KernelFamily family() const { return family_; }
    double mu() const { return mu_; }
    double shift() const { return shift_; }
    double domain_lo() const { return lo_; }
    double domain_hi() const { return hi_; }
    const ExprAst& expr() const { return expr_; }

    bool interior(double t) const { return t > lo_ && t < hi_; }

    /// True where eval() is defined: the open domain, plus the left
    /// endpoint for the power families.
    bool evaluable(double t) const {
        if (interior(t)) return true;
        return t == lo_ && extends_to_lo();
    }

    double eval(double t) const {
        switch (family_) {
        case KernelFamily::Identity:
            return t;
        case KernelFamily::Log:
            if (!(t > 0.0)) throw domain_error("log kernel needs t > 0");
            return std::log(t);
        case KernelFamily::Power:
            if (!(t >= 0.0)) throw domain_error("power kernel needs t >= 0");
            return t == 0.0 ? 0.0 : std::pow(t, mu_) / mu_;
        case KernelFamily::ShiftedPower:
            if (!(t >= shift_))
                throw domain_error("shifted power kernel needs t >= shift");
            return t == shift_ ? 0.0 : std::pow(t - shift_, mu_) / mu_;
        case KernelFamily::Custom:
            if (!interior(t))
                throw domain_error("custom kernel: t outside declared domain");
            return expr_.eval(t);
        }
        throw domain_error("corrupt kernel");
    }

    double prime(double t) const {
        switch (family_) {
        case KernelFamily::Identity:
            return 1.0;
        case KernelFamily::Log:
            if (!(t > 0.0)) throw domain_error("log kernel needs t > 0");
            return 1.0 / t;
        case KernelFamily::Power:
            if (!(t > 0.0)) throw domain_error("power kernel derivative needs t > 0");
            return std::pow(t, mu_ - 1.0);
        case KernelFamily::ShiftedPower:
            if (!(t > shift_))
                throw domain_error("shifted power kernel derivative needs t > shift");
            return std::pow(t - shift_, mu_ - 1.0);
        case KernelFamily::Custom: {
            if (!interior(t))
                throw domain_error("custom kernel: t outside declared domain");
            double d = expr_.eval_jet(t, 1).derivative(1);
            if (!(d > 0.0))
                throw kernel_error("custom kernel derivative is not positive");
            return d;
        }
        }
        throw domain_error("corrupt kernel");
    }

    /// g and its derivatives through `order` at t, as a jet. Interior only.
    Jet jet(double t, int order) const {
        Jet x = Jet::variable(t, order);
        switch (family_) {
        case KernelFamily::Identity:
            return x;
        case KernelFamily::Log:
            if (!(t > 0.0)) throw domain_error("log kernel needs t > 0");
            return log(x);
        case KernelFamily::Power:
            if (!(t > 0.0)) throw domain_error("power kernel needs t > 0");
            return pow(x, mu_) / mu_;
        case KernelFamily::ShiftedPower:
            if (!(t > shift_))
                throw domain_error("shifted power kernel needs t > shift");
            return pow(x - shift_, mu_) / mu_;
        case KernelFamily::Custom: {
            if (!interior(t))
                throw domain_error("custom kernel: t outside declared domain");
            Jet j = expr_.eval_jet(t, order);
            if (!(j.derivative(1) > 0.0))
                throw kernel_error("custom kernel derivative is not positive");
            return j;
        }
        }
        throw domain_error("corrupt kernel");
    }

    /// Inverse of g. Analytic for built-ins; safeguarded Newton for Custom.
    double inverse(double s) const {
        switch (family_) {
        case KernelFamily::Identity:
            return s;
        case KernelFamily::Log:
            return std::exp(s);
        case KernelFamily::Power:
            if (!(s >= 0.0))
                throw domain_error("power kernel inverse needs s >= 0");
            return s == 0.0 ? 0.0 : std::pow(mu_ * s, 1.0 / mu_);
        case KernelFamily::ShiftedPower:
            if (!(s >= 0.0))
                throw domain_error("shifted power kernel inverse needs s >= 0");
            return s == 0.0 ? shift_ : shift_ + std::pow(mu_ * s, 1.0 / mu_);
        case KernelFamily::Custom:
            return invert_custom(s);
        }
        throw domain_error("corrupt kernel");
    }

    /// Inverse with a caller-supplied bracket [x_lo, x_hi] known to
    /// contain the solution. Used by the quadrature substitution, where
    /// the bracket is the integration interval.
    double inverse(double s, double x_lo, double x_hi) const {
        if (family_ != KernelFamily::Custom) return inverse(s);
        return newton_in_bracket(s, x_lo, x_hi);
    }

    /// Canonical selection-syntax form of this kernel.
    std::string spec_string() const {
        switch (family_) {
        case KernelFamily::Identity: return "identity";
        case KernelFamily::Log:      return "log";
        case KernelFamily::Power:    return "power:" + num(mu_);
        case KernelFamily::ShiftedPower:
            return "shifted-power:" + num(mu_) + ":" + num(shift_);
        case KernelFamily::Custom:   return "expr:" + expr_.str();
        }
        return "?";
    }

private:
    KernelFunction(KernelFamily f, double lo, double hi)
        : family_(f), lo_(lo), hi_(hi) {}

    static constexpr double inf() { return std::numeric_limits<double>::infinity(); }

    static void require_mu(double mu) {
        if (!(mu > 0.0)) throw kernel_error("power kernel exponent must be > 0");
    }

    bool extends_to_lo() const {
        return family_ == KernelFamily::Power ||
               family_ == KernelFamily::ShiftedPower;
    }

    static std::string num(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    bool try_eval(double x, double& out) const {
        try {
            out = expr_.eval(x);
            return true;
        } catch (const domain_error&) {
            return false;
        }
    }

    // Expands a probe interval until g brackets s, halving back toward the
    // last good point when evaluation leaves the expression's own domain.
    double invert_custom(double s) const {
        double x0 = 0.0;
        bool found = false;
        double gx0 = 0.0;
        if (std::isfinite(lo_) && std::isfinite(hi_)) {
            x0 = 0.5 * (lo_ + hi_);
            found = try_eval(x0, gx0);
        } else if (std::isfinite(lo_)) {
            for (double d = 1.0; d > 1e-12 && !found; d /= 2.0)
                found = try_eval(x0 = lo_ + d, gx0);
        } else if (std::isfinite(hi_)) {
            for (double d = 1.0; d > 1e-12 && !found; d /= 2.0)
                found = try_eval(x0 = hi_ - d, gx0);
        } else {
            found = try_eval(x0 = 0.0, gx0);
            for (double d = 1.0; d < 1e13 && !found; d *= 2.0) {
                found = try_eval(x0 = d, gx0);
                if (!found) found = try_eval(x0 = -d, gx0);
            }
        }
        if (!found)
            throw kernel_error("custom kernel inverse: no evaluable start point");

        double xl = x0, xh = x0;
        double gl = gx0, gh = gx0;
        for (double step = 1.0; gh < s; step *= 2.0) {
            if (step > 1e60)
                throw kernel_error("custom kernel inverse: target above range");
            double cand = xh + step;
            if (cand >= hi_) cand = xh + 0.5 * (hi_ - xh);
            double v;
            if (try_eval(cand, v)) {
                if (v < gh)
                    throw kernel_error("custom kernel is not increasing");
                xh = cand; gh = v;
            } else {
                step /= 4.0;
                if (step < 1e-14)
                    throw kernel_error("custom kernel inverse: target above range");
            }
            if (hi_ - xh < 1e-300 * (std::fabs(xh) + 1.0))
                throw kernel_error("custom kernel inverse: target above range");
        }
        for (double step = 1.0; gl > s; step *= 2.0) {
            if (step > 1e60)
                throw kernel_error("custom kernel inverse: target below range");
            double cand = xl - step;
            if (cand <= lo_) cand = xl - 0.5 * (xl - lo_);
            double v;
            if (try_eval(cand, v)) {
                if (v > gl)
                    throw kernel_error("custom kernel is not increasing");
                xl = cand; gl = v;
            } else {
                step /= 4.0;
                if (step < 1e-14)
                    throw kernel_error("custom kernel inverse: target below range");
            }
        }
        return newton_in_bracket(s, xl, xh);
    }

    // Newton with bisection safeguard on a bracket with g(xl) <= s <= g(xh).
    double newton_in_bracket(double s, double xl, double xh) const {
        double tol = 1e-13 * std::max(1.0, std::fabs(s));
        double x = 0.5 * (xl + xh);
        for (int it = 0; it < 100; ++it) {
            double gx, dgx;
            try {
                Jet j = expr_.eval_jet(x, 1);
                gx = j.value();
                dgx = j.derivative(1);
            } catch (const domain_error&) {
                x = 0.5 * (xl + xh);
                continue;
            }
            if (std::fabs(gx - s) <= tol) return x;
            if (gx < s) xl = x; else xh = x;
            double step = (gx - s) / dgx;
            double cand = x - step;
            if (!(dgx > 0.0) || !(cand > xl) || !(cand < xh))
                cand = 0.5 * (xl + xh);
            if (cand == x) return x;  // interval exhausted at roundoff
            x = cand;
        }
        throw kernel_error("custom kernel inverse did not converge");
    }

    KernelFamily family_;
    double lo_, hi_;
    double mu_ = 1.0;
    double shift_ = 0.0;
    ExprAst expr_;
};

inline double g_eval(const KernelFunction& k, double t) { return k.eval(t); }
inline double g_prime(const KernelFunction& k, double t) { return k.prime(t); }
inline double g_inverse(const KernelFunction& k, double s) { return k.inverse(s); }

/// Samples g' at 1001 Chebyshev-distributed interior points of [lo, hi]
/// and reports the first point (in increasing t) where it is not positive
/// or where evaluation fails.
inline KernelCheck validate_kernel(const KernelFunction& k,
                                   double lo, double hi) {
    KernelCheck r;
    if (!(lo < hi)) {
        r.ok = false;
        r.message = "validation interval is empty";
        return r;
    }
    const int n = 1001;
    double mid = 0.5 * (lo + hi);
    double rad = 0.5 * (hi - lo);
    for (int j = n - 1; j >= 0; --j) {
        double theta = std::numbers::pi * (2.0 * j + 1.0) / (2.0 * n);
        double t = mid + rad * std::cos(theta);
        double d;
        try {
            d = k.prime(t);
        } catch (const std::exception& e) {
            r.ok = false;
            r.t = t;
            r.g_prime = 0.0;
            r.message = std::string("derivative evaluation failed at t=") +
                        std::to_string(t) + ": " + e.what();
            return r;
        }
        if (!(d > 0.0)) {
            r.ok = false;
            r.t = t;
            r.g_prime = d;
            r.message = "non-positive derivative at t=" + std::to_string(t);
            return r;
        }
    }
    return r;
}

/// Parses the kernel selection syntax:
/// `identity`, `log`, `power:MU`, `shifted-power:MU:A`, `expr:<expression>`.
inline KernelFunction parse_kernel(std::string_view text) {
    auto parse_num = [](std::string_view s, const char* what) {
        double v = 0.0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw kernel_error(std::string("malformed ") + what +
                               " in kernel selection");
        return v;
    };
    if (text == "identity") return KernelFunction::identity();
    if (text == "log") return KernelFunction::log_kernel();
    if (text.rfind("power:", 0) == 0)
        return KernelFunction::power(parse_num(text.substr(6), "exponent"));
    if (text.rfind("shifted-power:", 0) == 0) {
        std::string_view rest = text.substr(14);
        std::size_t colon = rest.find(':');
        if (colon == std::string_view::npos)
            throw kernel_error("shifted-power needs MU:A");
        double mu = parse_num(rest.substr(0, colon), "exponent");
        double a = parse_num(rest.substr(colon + 1), "shift");
        return KernelFunction::shifted_power(mu, a);
    }
    if (text.rfind("expr:", 0) == 0) {
        try {
            return KernelFunction::custom(ExprAst::parse(text.substr(5)));
        } catch (const parse_error& e) {
            throw kernel_error(std::string("kernel expression: ") + e.what());
        }
    }
    throw kernel_error("unknown kernel selection '" + std::string(text) + "'");
}

} // namespace propfrac
