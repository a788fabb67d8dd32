#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <string>

#include "propfrac/errors.hpp"

namespace propfrac {

/// Truncated Taylor expansion of a univariate function at a point.
///
/// A Jet of order k carries the value and the derivatives d^1..d^k at the
/// expansion point. Internally the coefficients are stored in Taylor form
/// (c[j] = f^(j)/j!), which turns products into Cauchy convolutions and
/// keeps the elementary-function recurrences short. Arithmetic is exact in
/// exact arithmetic: no step sizes, no truncation beyond the jet order.
class Jet {
public:
    static constexpr int max_order = 4;

    Jet() = default;

    /// Seed for the independent variable: value x, d^1 = 1.
    static Jet variable(double x, int order) {
        Jet j(order);
        j.c_[0] = x;
        if (order >= 1) j.c_[1] = 1.0;
        return j;
    }

    /// Seed for a constant: all derivatives vanish.
    static Jet constant(double v, int order) {
        Jet j(order);
        j.c_[0] = v;
        return j;
    }

    /// Jet from raw Taylor coefficients c[0..order] (c[k] = f^(k)/k!).
    static Jet from_taylor(const double* c, int order) {
        Jet j(order);
        for (int k = 0; k <= order; ++k) j.c_[k] = c[k];
        return j;
    }

    int order() const noexcept { return ord_; }
    double value() const noexcept { return c_[0]; }

    /// k-th derivative, k <= order().
    double derivative(int k) const {
        check_index(k);
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return c_[k] * f;
    }

    /// Raw Taylor coefficient f^(k)/k!.
    double taylor(int k) const {
        check_index(k);
        return c_[k];
    }

    /// Jet of the derivative function, one order lower.
    Jet derivative_jet() const {
        if (ord_ < 1) throw domain_error("derivative_jet: jet order is 0");
        Jet r(ord_ - 1);
        for (int j = 0; j <= r.ord_; ++j) r.c_[j] = (j + 1) * c_[j + 1];
        return r;
    }

    /// Copy truncated to a lower order.
    Jet truncated(int order) const {
        Jet r(order <= ord_ ? order : ord_);
        for (int j = 0; j <= r.ord_; ++j) r.c_[j] = c_[j];
        return r;
    }

    friend Jet operator+(const Jet& a, const Jet& b) {
        Jet r(common_order(a, b));
        for (int j = 0; j <= r.ord_; ++j) r.c_[j] = a.c_[j] + b.c_[j];
        return r;
    }
    friend Jet operator-(const Jet& a, const Jet& b) {
        Jet r(common_order(a, b));
        for (int j = 0; j <= r.ord_; ++j) r.c_[j] = a.c_[j] - b.c_[j];
        return r;
    }
    friend Jet operator-(const Jet& a) {
        Jet r(a.ord_);
        for (int j = 0; j <= r.ord_; ++j) r.c_[j] = -a.c_[j];
        return r;
    }
    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r(common_order(a, b));
        r.c_[0] = a.c_[0] * b.c_[0];
        for (int k = 1; k <= r.ord_; ++k) {
            double s = 0.0;
            for (int j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
            r.c_[k] = s;
        }
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) {
        if (b.c_[0] == 0.0) throw domain_error("division by zero");
        Jet r(common_order(a, b));
        r.c_[0] = a.c_[0] / b.c_[0];
        for (int k = 1; k <= r.ord_; ++k) {
            double s = a.c_[k];
            for (int j = 0; j < k; ++j) s -= r.c_[j] * b.c_[k - j];
            r.c_[k] = s / b.c_[0];
        }
        return r;
    }

    friend Jet operator+(const Jet& a, double s) { Jet r = a; r.c_[0] += s; return r; }
    friend Jet operator+(double s, const Jet& a) { Jet r = a; r.c_[0] = s + r.c_[0]; return r; }
    friend Jet operator-(const Jet& a, double s) { Jet r = a; r.c_[0] -= s; return r; }
    friend Jet operator-(double s, const Jet& a) { Jet r = -a; r.c_[0] = s + r.c_[0]; return r; }
    friend Jet operator*(const Jet& a, double s) {
        Jet r(a.ord_);
        for (int j = 0; j <= r.ord_; ++j) r.c_[j] = a.c_[j] * s;
        return r;
    }
    friend Jet operator*(double s, const Jet& a) { return a * s; }
    friend Jet operator/(const Jet& a, double s) {
        if (s == 0.0) throw domain_error("division by zero");
        Jet r(a.ord_);
        for (int j = 0; j <= r.ord_; ++j) r.c_[j] = a.c_[j] / s;
        return r;
    }

    friend Jet exp(const Jet& u) {
        Jet r(u.ord_);
        r.c_[0] = std::exp(u.c_[0]);
        for (int k = 1; k <= r.ord_; ++k) {
            double s = 0.0;
            for (int j = 1; j <= k; ++j) s += j * u.c_[j] * r.c_[k - j];
            r.c_[k] = s / k;
        }
        return r;
    }

    friend Jet log(const Jet& u) {
        if (!(u.c_[0] > 0.0)) throw domain_error("ln of non-positive argument");
        Jet r(u.ord_);
        r.c_[0] = std::log(u.c_[0]);
        for (int k = 1; k <= r.ord_; ++k) {
            double s = 0.0;
            for (int j = 1; j < k; ++j) s += j * r.c_[j] * u.c_[k - j];
            r.c_[k] = (u.c_[k] - s / k) / u.c_[0];
        }
        return r;
    }

    friend Jet sqrt(const Jet& u) {
        if (u.c_[0] < 0.0) throw domain_error("sqrt of negative argument");
        Jet r(u.ord_);
        r.c_[0] = std::sqrt(u.c_[0]);
        if (r.ord_ >= 1) {
            if (u.c_[0] == 0.0)
                throw domain_error("sqrt not differentiable at 0");
            for (int k = 1; k <= r.ord_; ++k) {
                double s = u.c_[k];
                for (int j = 1; j < k; ++j) s -= r.c_[j] * r.c_[k - j];
                r.c_[k] = s / (2.0 * r.c_[0]);
            }
        }
        return r;
    }

    friend Jet sin(const Jet& u) { return sincos_(u, true); }
    friend Jet cos(const Jet& u) { return sincos_(u, false); }

    friend Jet abs(const Jet& u) {
        if (u.c_[0] > 0.0) return u;
        if (u.c_[0] < 0.0) return -u;
        if (u.ord_ == 0) { Jet r(0); r.c_[0] = std::fabs(u.c_[0]); return r; }
        throw domain_error("abs not differentiable at 0");
    }

    /// u^a with real exponent; requires a positive base.
    friend Jet pow(const Jet& u, double a) {
        if (!(u.c_[0] > 0.0))
            throw domain_error("pow with non-integer exponent requires positive base");
        Jet r(u.ord_);
        r.c_[0] = std::pow(u.c_[0], a);
        for (int k = 1; k <= r.ord_; ++k) {
            double s = 0.0;
            for (int j = 1; j <= k; ++j) {
                double t = a * u.c_[j] * r.c_[k - j];
                if (j < k) t -= r.c_[j] * u.c_[k - j];
                s += j * t;
            }
            r.c_[k] = s / (k * u.c_[0]);
        }
        return r;
    }

private:
    explicit Jet(int order) : ord_(clamp_order(order)) { c_.fill(0.0); }

    static int clamp_order(int order) {
        if (order < 0 || order > max_order)
            throw domain_error("jet order must be in [0, " +
                               std::to_string(max_order) + "]");
        return order;
    }

    static int common_order(const Jet& a, const Jet& b) {
        return a.ord_ < b.ord_ ? a.ord_ : b.ord_;
    }

    void check_index(int k) const {
        if (k < 0 || k > ord_)
            throw domain_error("derivative index exceeds jet order");
    }

    static Jet sincos_(const Jet& u, bool want_sin) {
        Jet s(u.ord_), c(u.ord_);
        s.c_[0] = std::sin(u.c_[0]);
        c.c_[0] = std::cos(u.c_[0]);
        for (int k = 1; k <= u.ord_; ++k) {
            double as = 0.0, ac = 0.0;
            for (int j = 1; j <= k; ++j) {
                as += j * u.c_[j] * c.c_[k - j];
                ac += j * u.c_[j] * s.c_[k - j];
            }
            s.c_[k] = as / k;
            c.c_[k] = -ac / k;
        }
        return want_sin ? s : c;
    }

    int ord_ = 0;
    std::array<double, max_order + 1> c_{};
};

/// Builds a constant of the same shape as `model` (same jet order, or a
/// plain double). Lets generic code stay agnostic of the scalar type.
inline double constant_like(const double&, double v) { return v; }
inline Jet constant_like(const Jet& model, double v) {
    return Jet::constant(v, model.order());
}

/// Integer power by repeated squaring; shared between the scalar and jet
/// evaluation paths so both produce the same operation sequence.
template <class T>
T pow_int(const T& base, long long e) {
    if (e == 0) return constant_like(base, 1.0);
    bool neg = e < 0;
    unsigned long long n = neg ? -(unsigned long long)e : (unsigned long long)e;
    T acc = base;
    // consume leading bit, then square-and-multiply
    int top = 63;
    while (!((n >> top) & 1ull)) --top;
    for (int i = top - 1; i >= 0; --i) {
        acc = acc * acc;
        if ((n >> i) & 1ull) acc = acc * base;
    }
    if (!neg) return acc;
    return constant_like(base, 1.0) / acc;
}

} // namespace propfrac
