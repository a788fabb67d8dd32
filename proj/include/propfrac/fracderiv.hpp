#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "propfrac/errors.hpp"
#include "propfrac/expr.hpp"
#include "propfrac/fracint.hpp"
#include "propfrac/jet.hpp"
#include "propfrac/kernels.hpp"
#include "propfrac/propderiv.hpp"
#include "propfrac/quadrature.hpp"

namespace propfrac {

/// Iteration count for a derivative of order alpha: floor(alpha) + 1.
/// Integer alpha deliberately rounds up (order 1 -> two local derivatives
/// on a first-order integral), so the inner integral order n - alpha
/// always lies in (0,1].
inline int n_from_alpha(double alpha) {
    if (!(alpha >= 0.0)) throw domain_error("derivative order must be >= 0");
    int n = (int)std::floor(alpha) + 1;
    if (n > Jet::max_order)
        throw domain_error("derivative order needs more than 4 derivatives");
    return n;
}

namespace detail {

inline constexpr double kFact[5] = {1.0, 1.0, 2.0, 6.0, 24.0};

/// Finite-difference weights on an arbitrary node set (Fornberg's
/// recurrence). Returns w[j][k]: the weight of f(x[j]) in the
/// approximation of f^(k)(x0), for k = 0..m.
inline std::vector<std::array<double, 5>> fd_weights(
    double x0, const std::vector<double>& x, int m) {
    int nn = (int)x.size();
    std::vector<std::array<double, 5>> c(nn);
    for (auto& row : c) row.fill(0.0);
    c[0][0] = 1.0;
    double c1 = 1.0;
    double c4 = x[0] - x0;
    for (int i = 1; i < nn; ++i) {
        int mn = std::min(i, m);
        double c2 = 1.0;
        double c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    return c;
}

/// n-fold proportional derivative of a sampled function at t.
///
/// Samples F on a lattice around t (central where room permits, otherwise
/// one-sided of matching order), forms each F^(k) at two resolutions,
/// Richardson-extrapolates, and feeds the resulting numeric jet through
/// the same jet chain the exact path uses. The error estimate is the
/// difference against the non-extrapolated half-step value; it assumes F
/// is smooth at stencil scale, which holds when the inner quadrature runs
/// with a pinned node count.
template <class Func>
QuadResult stencil_prop_deriv_n(Func&& F, const KernelFunction& g, double rho,
                                int n, double room_down, double room_up,
                                double t, bool reversed) {
    // Base step grows with the derivative count: differencing amplifies
    // sample roundoff by h^{-n} while the extrapolated truncation term
    // stays negligible, so higher orders want a wider stencil.
    static constexpr double kHScale[5] = {1.0, 1.0, 5.0, 20.0, 50.0};
    double h = kHScale[n] * std::max(1e-5, 1e-5 * std::fabs(t));
    const double h_floor = 1e-7 * std::max(1.0, std::fabs(t));
    const int W = (n <= 2) ? 1 : 2;
    bool central = true;
    int dir = +1;
    int K = n + 1;

    double room_min = std::min(room_down, room_up);
    if (room_min <= (W + 1) * h) {
        double shrunk = room_min / (W + 1);
        if (shrunk >= h_floor) {
            h = shrunk;
        } else {
            central = false;
            dir = room_up >= room_down ? +1 : -1;
            double room_dir = dir > 0 ? room_up : room_down;
            h = std::min(h, room_dir / (K + 1));
            if (h < h_floor)
                throw domain_error(
                    "differentiation stencil does not fit in the domain");
        }
    }

    std::vector<int> offs_h, offs_h2;  // lattice offsets in units of h/2
    if (central) {
        for (int j = -W; j <= W; ++j) offs_h.push_back(2 * j);
        for (int j = -W; j <= W; ++j) offs_h2.push_back(j);
    } else {
        for (int j = 0; j <= K; ++j) offs_h.push_back(dir * 2 * j);
        for (int j = 0; j <= K; ++j) offs_h2.push_back(dir * j);
    }

    const double h2 = 0.5 * h;
    std::map<int, double> fv;
    for (int off : offs_h) fv.emplace(off, 0.0);
    for (int off : offs_h2) fv.emplace(off, 0.0);
    for (auto& [off, val] : fv) val = F(t + off * h2);

    auto derivs_at = [&](const std::vector<int>& offs) {
        std::vector<double> xs;
        xs.reserve(offs.size());
        for (int off : offs) xs.push_back(t + off * h2);
        auto w = fd_weights(t, xs, n);
        std::array<double, 5> d{};
        for (int k = 1; k <= n; ++k)
            for (std::size_t j = 0; j < offs.size(); ++j)
                d[k] += w[j][k] * fv.at(offs[j]);
        return d;
    };
    auto d_h = derivs_at(offs_h);
    auto d_h2 = derivs_at(offs_h2);

    const int np = (int)offs_h.size();
    std::array<double, 5> c_rich{}, c_half{};
    c_rich[0] = c_half[0] = fv.at(0);
    for (int k = 1; k <= n; ++k) {
        int p = np - k;
        if (central && (p % 2)) ++p;  // symmetric stencils gain one order
        double fac = std::ldexp(1.0, p);
        c_rich[k] = (fac * d_h2[k] - d_h[k]) / (fac - 1.0) / kFact[k];
        c_half[k] = d_h2[k] / kFact[k];
    }

    Jet gj = g.jet(t, n);
    double v = prop_chain(Jet::from_taylor(c_rich.data(), n), gj, rho, n, reversed);
    double v_half = prop_chain(Jet::from_taylor(c_half.data(), n), gj, rho, n, reversed);
    return {v, std::fabs(v - v_half), true, 0};
}

} // namespace detail

/// Left derivative of the integral type: the n-fold proportional
/// derivative of the order (n-alpha) left integral, n = floor(alpha)+1.
/// The outer differentiation is numerical (stencil + Richardson); the
/// inner integral is re-evaluated with the node count pinned at the
/// value that converged at t, so its error varies smoothly across the
/// stencil and cancels in the differences.
inline QuadResult left_rl_deriv(const ExprAst& f, const KernelFunction& g,
                                double alpha, double rho, double a, double t,
                                const QuadConfig& cfg = {}) {
    detail::require_rho_positive(rho);
    const int n = n_from_alpha(alpha);
    const double inner = n - alpha;
    if (!(t > a)) throw domain_error("t must be > anchor a");

    if (inner == 0.0) {
        // identity inner integral; differentiate f directly
        auto fe = [&](double s) { return f.eval(s); };
        return detail::stencil_prop_deriv_n(fe, g, rho, n, t - a,
                                            g.domain_hi() - t, t, false);
    }
    QuadResult probe = left_integral(f, g, inner, rho, a, t, cfg);
    QuadConfig pinned = cfg;
    pinned.base_nodes = pinned.max_nodes =
        probe.nodes_used > 0 ? probe.nodes_used : cfg.max_nodes;
    auto F = [&](double s) {
        return left_integral(f, g, inner, rho, a, s, pinned).value;
    };
    QuadResult r = detail::stencil_prop_deriv_n(F, g, rho, n, t - a,
                                                g.domain_hi() - t, t, false);
    r.error_estimate += probe.error_estimate;
    r.converged = probe.converged;
    r.nodes_used = probe.nodes_used;
    return r;
}

/// Right counterpart: reversed n-fold derivative of the right integral.
inline QuadResult right_rl_deriv(const ExprAst& f, const KernelFunction& g,
                                 double alpha, double rho, double b, double t,
                                 const QuadConfig& cfg = {}) {
    detail::require_rho_positive(rho);
    const int n = n_from_alpha(alpha);
    const double inner = n - alpha;
    if (!(t < b)) throw domain_error("t must be < anchor b");

    if (inner == 0.0) {
        auto fe = [&](double s) { return f.eval(s); };
        return detail::stencil_prop_deriv_n(fe, g, rho, n, t - g.domain_lo(),
                                            b - t, t, true);
    }
    QuadResult probe = right_integral(f, g, inner, rho, b, t, cfg);
    QuadConfig pinned = cfg;
    pinned.base_nodes = pinned.max_nodes =
        probe.nodes_used > 0 ? probe.nodes_used : cfg.max_nodes;
    auto F = [&](double s) {
        return right_integral(f, g, inner, rho, b, s, pinned).value;
    };
    QuadResult r = detail::stencil_prop_deriv_n(F, g, rho, n,
                                                t - g.domain_lo(), b - t, t,
                                                true);
    r.error_estimate += probe.error_estimate;
    r.converged = probe.converged;
    r.nodes_used = probe.nodes_used;
    return r;
}

/// Left derivative of the Caputo type: order (n-alpha) left integral of
/// the n-fold proportional derivative. The inner derivative comes from
/// exact jets at every quadrature node; nothing is differenced.
inline QuadResult left_caputo(const ExprAst& f, const KernelFunction& g,
                              double alpha, double rho, double a, double t,
                              const QuadConfig& cfg = {}) {
    detail::require_alpha_positive(alpha);
    detail::require_rho_positive(rho);
    const int n = n_from_alpha(alpha);
    const double inner = n - alpha;
    auto dnf = [&](double tau) { return prop_deriv_n(f, g, rho, n, tau); };
    if (inner == 0.0) return {dnf(t), 0.0, true, 0};
    return left_integral_fn(dnf, g, inner, rho, a, t, cfg);
}

/// Right counterpart with the reversed local derivative.
inline QuadResult right_caputo(const ExprAst& f, const KernelFunction& g,
                               double alpha, double rho, double b, double t,
                               const QuadConfig& cfg = {}) {
    detail::require_alpha_positive(alpha);
    detail::require_rho_positive(rho);
    const int n = n_from_alpha(alpha);
    const double inner = n - alpha;
    auto dnf = [&](double tau) {
        return prop_deriv_reverse_n(f, g, rho, n, tau);
    };
    if (inner == 0.0) return {dnf(t), 0.0, true, 0};
    return right_integral_fn(dnf, g, inner, rho, b, t, cfg);
}

} // namespace propfrac
