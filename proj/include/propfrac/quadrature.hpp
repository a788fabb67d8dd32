#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <utility>
#include <vector>

#include "propfrac/errors.hpp"
#include "propfrac/gamma.hpp"

namespace propfrac {

/// Refinement policy for all quadrature-backed operations.
struct QuadConfig {
    int base_nodes = 32;
    int max_nodes = 512;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;

    void validate() const {
        if (base_nodes < 4) throw domain_error("base_nodes must be >= 4");
        if (max_nodes < base_nodes)
            throw domain_error("max_nodes must be >= base_nodes");
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw domain_error("quadrature tolerances must be positive");
    }
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = true;
    int nodes_used = 0;
};

/// Nodes and weights on [0,1] for the weight z^{alpha-1} (1-z)^{sigma}:
/// sum_i weights[i] p(nodes[i]) = integral_0^1 z^{alpha-1} (1-z)^sigma p(z) dz
/// exactly for polynomials p of degree <= 2n-1.
struct JacobiRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

// Implicit QL for a symmetric tridiagonal matrix, tracking the first
// component of each eigenvector. d: diagonal (becomes the ascending
// eigenvalues), e: subdiagonal in e[0..n-2], z: starts as (1,0,..,0)
// (becomes the tracked components).
inline void imtqlx(int n, double* d, double* e, double* z) {
    if (n == 1) return;
    const double prec = 2.22e-16;
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        for (;;) {
            int m = l;
            while (m < n - 1 &&
                   std::fabs(e[m]) > prec * (std::fabs(d[m]) + std::fabs(d[m + 1])))
                ++m;
            if (m == l) break;
            if (++iter > 30)
                throw domain_error("quadrature eigenvalue iteration failed");
            double p = d[l];
            double g = (d[l + 1] - p) / (2.0 * e[l]);
            double r = std::sqrt(g * g + 1.0);
            g = d[m] - p + e[l] / (g + (g >= 0.0 ? r : -r));
            double s = 1.0, c = 1.0;
            p = 0.0;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                double b = c * e[i];
                if (std::fabs(g) <= std::fabs(f)) {
                    c = g / f;
                    r = std::sqrt(c * c + 1.0);
                    e[i + 1] = f * r;
                    s = 1.0 / r;
                    c *= s;
                } else {
                    s = f / g;
                    r = std::sqrt(s * s + 1.0);
                    e[i + 1] = g * r;
                    c = 1.0 / r;
                    s *= c;
                }
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    for (int i = 1; i < n; ++i) {  // insertion sort, permuting z along
        double p = d[i], q = z[i];
        int j = i - 1;
        while (j >= 0 && d[j] > p) {
            d[j + 1] = d[j];
            z[j + 1] = z[j];
            --j;
        }
        d[j + 1] = p;
        z[j + 1] = q;
    }
}

inline JacobiRule build_jacobi_rule(double sigma, double alpha, int n) {
    // Monic three-term recurrence for the Jacobi weight (1-x)^p (1+x)^q
    // on [-1,1] with p = sigma, q = alpha-1, then Golub-Welsch.
    const double p = sigma;
    const double q = alpha - 1.0;
    const double pq = p + q;
    std::vector<double> d(n), e(n), z(n, 0.0);
    z[0] = 1.0;
    d[0] = (q - p) / (pq + 2.0);
    for (int k = 1; k < n; ++k) {
        double s = 2.0 * k + pq;
        d[k] = (q * q - p * p) / (s * (s + 2.0));
        e[k - 1] = std::sqrt(4.0 * k * (k + p) * (k + q) * (k + pq) /
                             (s * s * (s + 1.0) * (s - 1.0)));
    }
    imtqlx(n, d.data(), e.data(), z.data());

    // zeroth moment of the weight on [-1,1], then rescale to [0,1]
    const double mu0 = std::pow(2.0, pq + 1.0) * gamma_fn(p + 1.0) *
                       gamma_fn(q + 1.0) / gamma_fn(pq + 2.0);
    const double scale = std::pow(2.0, -(pq + 1.0));
    JacobiRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = 0.5 * (1.0 + d[i]);
        rule.weights[i] = scale * mu0 * z[i] * z[i];
    }
    return rule;
}

} // namespace detail

/// Cached Gauss-Jacobi rule for weight z^{alpha-1} (1-z)^sigma on [0,1].
/// The cache is guarded; returned references stay valid for the
/// program lifetime.
inline const JacobiRule& jacobi_nodes_weighted(double sigma, double alpha,
                                               int n_nodes) {
    if (!(alpha > 0.0)) throw domain_error("jacobi rule needs alpha > 0");
    if (!(sigma > -1.0)) throw domain_error("jacobi rule needs sigma > -1");
    if (n_nodes < 1) throw domain_error("jacobi rule needs n_nodes >= 1");
    static std::mutex mtx;
    static std::map<std::tuple<double, double, int>,
                    std::unique_ptr<JacobiRule>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_tuple(sigma, alpha, n_nodes);
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto rule = std::make_unique<JacobiRule>(
            detail::build_jacobi_rule(sigma, alpha, n_nodes));
        it = cache.emplace(key, std::move(rule)).first;
    }
    return *it->second;
}

/// Rule for the plain endpoint weight z^{alpha-1} on [0,1].
inline const JacobiRule& jacobi_nodes(double alpha, int n_nodes) {
    return jacobi_nodes_weighted(0.0, alpha, n_nodes);
}

/// Runs `apply(rule)` with node counts doubling from cfg.base_nodes to
/// cfg.max_nodes, stopping when two successive values agree to tolerance.
/// With base_nodes == max_nodes the single evaluation is returned as-is
/// (fixed-rule mode). Otherwise a run that never meets tolerance comes
/// back with converged = false and the last difference as the estimate.
template <class Apply>
QuadResult refine_doubling(double sigma, double alpha, const QuadConfig& cfg,
                           Apply&& apply) {
    cfg.validate();
    if (cfg.base_nodes == cfg.max_nodes)
        return {apply(jacobi_nodes_weighted(sigma, alpha, cfg.base_nodes)),
                0.0, true, cfg.base_nodes};
    double prev = apply(jacobi_nodes_weighted(sigma, alpha, cfg.base_nodes));
    double diff = 0.0;
    for (int n = cfg.base_nodes * 2; n <= cfg.max_nodes; n *= 2) {
        double cur = apply(jacobi_nodes_weighted(sigma, alpha, n));
        diff = std::fabs(cur - prev);
        if (diff <= std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(cur)))
            return {cur, diff, true, n};
        prev = cur;
    }
    return {prev, diff, false, cfg.max_nodes};
}

} // namespace propfrac
