#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "propfrac/errors.hpp"
#include "propfrac/expr.hpp"
#include "propfrac/fracderiv.hpp"
#include "propfrac/fracint.hpp"
#include "propfrac/kernels.hpp"
#include "propfrac/propderiv.hpp"

namespace propfrac {

/// Thrown when a spec validates but a point evaluation fails; carries the
/// offending grid point.
class eval_error : public std::runtime_error {
public:
    eval_error(const std::string& msg, double t)
        : std::runtime_error(msg), t_(t) {}
    double t() const noexcept { return t_; }

private:
    double t_;
};

enum class OperatorKind {
    LeftInt,
    RightInt,
    LeftRL,
    RightRL,
    LeftCaputo,
    RightCaputo,
    PropDeriv,
    PropInt,
};

inline const char* operator_kind_name(OperatorKind k) {
    switch (k) {
    case OperatorKind::LeftInt:     return "left-int";
    case OperatorKind::RightInt:    return "right-int";
    case OperatorKind::LeftRL:      return "left-rl";
    case OperatorKind::RightRL:     return "right-rl";
    case OperatorKind::LeftCaputo:  return "left-caputo";
    case OperatorKind::RightCaputo: return "right-caputo";
    case OperatorKind::PropDeriv:   return "prop-deriv";
    case OperatorKind::PropInt:     return "prop-int";
    }
    return "?";
}

inline OperatorKind parse_operator_kind(std::string_view s) {
    if (s == "left-int") return OperatorKind::LeftInt;
    if (s == "right-int") return OperatorKind::RightInt;
    if (s == "left-rl") return OperatorKind::LeftRL;
    if (s == "right-rl") return OperatorKind::RightRL;
    if (s == "left-caputo") return OperatorKind::LeftCaputo;
    if (s == "right-caputo") return OperatorKind::RightCaputo;
    if (s == "prop-deriv") return OperatorKind::PropDeriv;
    if (s == "prop-int") return OperatorKind::PropInt;
    throw domain_error("unknown operator '" + std::string(s) + "'");
}

inline bool is_right_sided(OperatorKind k) {
    return k == OperatorKind::RightInt || k == OperatorKind::RightRL ||
           k == OperatorKind::RightCaputo;
}

inline bool needs_anchor(OperatorKind k) {
    return k != OperatorKind::PropDeriv;
}

/// Complete description of one operator evaluation: which operator, its
/// parameters, the kernel, and the operand expression.
struct OperatorSpec {
    OperatorKind op = OperatorKind::LeftInt;
    double alpha = 1.0;
    bool has_alpha = false;
    double rho = 1.0;
    std::string kernel_text = "identity";
    double anchor = 0.0;  // a for left-sided operators, b for right-sided
    bool has_anchor = false;
    std::string f_text;

    // filled by resolve()
    KernelFunction kernel = KernelFunction::identity();
    ExprAst f;

    /// Parses kernel and expression, validates all parameter constraints.
    /// Throws domain_error / kernel_error / parse_error on violations.
    void resolve() {
        if (f_text.empty()) throw domain_error("missing operand expression");
        f = ExprAst::parse(f_text);
        kernel = parse_kernel(kernel_text);
        switch (op) {
        case OperatorKind::LeftInt:
        case OperatorKind::RightInt:
        case OperatorKind::LeftCaputo:
        case OperatorKind::RightCaputo:
            if (!has_alpha) throw domain_error("operator needs --alpha");
            if (!(alpha > 0.0)) throw domain_error("order must be > 0");
            n_from_alpha(alpha);  // enforces the derivative-count cap
            detail::require_rho_positive(rho);
            break;
        case OperatorKind::LeftRL:
        case OperatorKind::RightRL:
            if (!has_alpha) throw domain_error("operator needs --alpha");
            if (!(alpha >= 0.0)) throw domain_error("order must be >= 0");
            n_from_alpha(alpha);
            detail::require_rho_positive(rho);
            break;
        case OperatorKind::PropDeriv:
            // alpha, when given, is the iteration count
            if (has_alpha &&
                (std::floor(alpha) != alpha || alpha < 1.0 || alpha > 4.0))
                throw domain_error(
                    "iteration count must be an integer in [1, 4]");
            detail::require_rho_closed(rho);
            break;
        case OperatorKind::PropInt:
            detail::require_rho_positive(rho);
            break;
        }
        if (needs_anchor(op)) {
            if (!has_anchor)
                throw domain_error(is_right_sided(op)
                                       ? "operator needs anchor --b"
                                       : "operator needs anchor --a");
            if (!kernel.evaluable(anchor))
                throw domain_error("anchor lies outside the kernel domain");
        }
    }

    /// Canonical one-line form (also the table-file syntax for this spec).
    std::string canonical() const {
        char buf[64];
        std::string s = "op=";
        s += operator_kind_name(op);
        if (has_alpha || op != OperatorKind::PropDeriv) {
            std::snprintf(buf, sizeof buf, " alpha=%.17g", alpha);
            s += buf;
        }
        std::snprintf(buf, sizeof buf, " rho=%.17g", rho);
        s += buf;
        s += " kernel=" + kernel_text;
        if (needs_anchor(op)) {
            std::snprintf(buf, sizeof buf, " %s=%.17g",
                          is_right_sided(op) ? "b" : "a", anchor);
            s += buf;
        }
        s += " f=" + f_text;
        return s;
    }
};

/// Inclusive evaluation grid: `steps` points from start to end.
struct Grid {
    double start = 0.0;
    double end = 0.0;
    int steps = 1;

    static Grid parse(std::string_view text) {
        auto fail = [&] {
            throw domain_error("grid must be start:end:steps, got '" +
                               std::string(text) + "'");
        };
        std::size_t c1 = text.find(':');
        if (c1 == std::string_view::npos) fail();
        std::size_t c2 = text.find(':', c1 + 1);
        if (c2 == std::string_view::npos) fail();
        auto num = [&](std::string_view part, double& out) {
            auto res =
                std::from_chars(part.data(), part.data() + part.size(), out);
            if (res.ec != std::errc() || res.ptr != part.data() + part.size())
                fail();
        };
        Grid grid;
        double steps_real = 0.0;
        num(text.substr(0, c1), grid.start);
        num(text.substr(c1 + 1, c2 - c1 - 1), grid.end);
        num(text.substr(c2 + 1), steps_real);
        if (std::floor(steps_real) != steps_real || steps_real < 1.0 ||
            steps_real > 1e7)
            throw domain_error("grid steps must be a positive integer");
        grid.steps = (int)steps_real;
        grid.validate();
        return grid;
    }

    void validate() const {
        if (steps < 1) throw domain_error("grid needs at least one point");
        if (steps >= 2 && !(start < end))
            throw domain_error("grid needs start < end");
    }

    std::vector<double> points() const {
        std::vector<double> p;
        p.reserve(steps);
        if (steps == 1) {
            p.push_back(start);
            return p;
        }
        double h = (end - start) / (steps - 1);
        for (int i = 0; i < steps; ++i)
            p.push_back(i == steps - 1 ? end : start + i * h);
        return p;
    }
};

/// One operator evaluation. Throws domain_error for points on the wrong
/// side of the anchor or outside the kernel domain.
inline EvalRow eval_spec_at(const OperatorSpec& spec, double t,
                            const QuadConfig& cfg) {
    const KernelFunction& g = spec.kernel;
    const double a = spec.anchor;
    EvalRow row;
    row.t = t;
    QuadResult q;
    switch (spec.op) {
    case OperatorKind::LeftInt:
        if (!(t >= a)) throw domain_error("grid point below the anchor");
        q = left_integral(spec.f, g, spec.alpha, spec.rho, a, t, cfg);
        break;
    case OperatorKind::RightInt:
        if (!(t <= a)) throw domain_error("grid point above the anchor");
        q = right_integral(spec.f, g, spec.alpha, spec.rho, a, t, cfg);
        break;
    case OperatorKind::LeftRL:
        q = left_rl_deriv(spec.f, g, spec.alpha, spec.rho, a, t, cfg);
        break;
    case OperatorKind::RightRL:
        q = right_rl_deriv(spec.f, g, spec.alpha, spec.rho, a, t, cfg);
        break;
    case OperatorKind::LeftCaputo:
        if (!(t >= a)) throw domain_error("grid point below the anchor");
        q = left_caputo(spec.f, g, spec.alpha, spec.rho, a, t, cfg);
        break;
    case OperatorKind::RightCaputo:
        if (!(t <= a)) throw domain_error("grid point above the anchor");
        q = right_caputo(spec.f, g, spec.alpha, spec.rho, a, t, cfg);
        break;
    case OperatorKind::PropDeriv: {
        int n = spec.has_alpha ? (int)spec.alpha : 1;
        row.value = prop_deriv_n(spec.f, g, spec.rho, n, t);
        row.error_estimate = 0.0;
        return row;
    }
    case OperatorKind::PropInt:
        if (!(t >= a)) throw domain_error("grid point below the anchor");
        q = prop_integral_1(spec.f, g, spec.rho, a, t, cfg);
        break;
    }
    row.value = q.value;
    row.error_estimate = q.error_estimate;
    return row;
}

namespace detail {

inline void check_grid_against_spec(const OperatorSpec& spec,
                                    const std::vector<double>& pts) {
    for (double t : pts) {
        if (!spec.kernel.evaluable(t))
            throw domain_error("grid point outside the kernel domain");
        if (!needs_anchor(spec.op)) continue;
        double a = spec.anchor;
        bool strict = spec.op == OperatorKind::LeftRL ||
                      spec.op == OperatorKind::RightRL;
        if (is_right_sided(spec.op)) {
            if (strict ? !(t < a) : !(t <= a))
                throw domain_error("grid extends above the right anchor");
        } else {
            if (strict ? !(t > a) : !(t >= a))
                throw domain_error("grid extends below the left anchor");
        }
    }
    if (spec.kernel.family() == KernelFamily::Custom && !pts.empty()) {
        double lo = pts.front(), hi = pts.back();
        if (needs_anchor(spec.op)) {
            lo = std::min(lo, spec.anchor);
            hi = std::max(hi, spec.anchor);
        }
        if (lo < hi) {
            KernelCheck chk = validate_kernel(spec.kernel, lo, hi);
            if (!chk.ok)
                throw kernel_error("kernel validation failed: " + chk.message);
        }
    }
}

} // namespace detail

/// Evaluates the operator over the grid. Rows are assembled in grid order no
/// matter how many worker threads compute them, so the output is
/// deterministic. Throws eval_error (with the failing t) on the first
/// point whose evaluation fails.
inline EvalTable eval_spec_grid(const OperatorSpec& spec, const Grid& grid,
                                const QuadConfig& cfg, int threads = 1) {
    std::vector<double> pts = grid.points();
    detail::check_grid_against_spec(spec, pts);

    EvalTable table;
    table.meta = spec.canonical();
    table.rows.resize(pts.size());
    std::vector<std::string> failures(pts.size());

    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < pts.size(); i += stride) {
            try {
                table.rows[i] = eval_spec_at(spec, pts[i], cfg);
            } catch (const std::exception& e) {
                failures[i] = e.what();
            }
        }
    };
    if (threads <= 1 || pts.size() < 2) {
        work(0, 1);
    } else {
        std::size_t nw = std::min<std::size_t>(threads, pts.size());
        std::vector<std::thread> pool;
        pool.reserve(nw);
        for (std::size_t w = 0; w < nw; ++w)
            pool.emplace_back(work, w, nw);
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (!failures[i].empty()) throw eval_error(failures[i], pts[i]);
    return table;
}

/// CSV form: header line, then one `t,value,error_estimate` row per grid
/// point, 17 significant digits, LF endings. Byte-stable across runs.
inline std::string csv_string(const EvalTable& table) {
    std::string out = "t,value,error_estimate\n";
    char buf[128];
    for (const EvalRow& row : table.rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", row.t,
                      row.value, row.error_estimate);
        out += buf;
    }
    return out;
}

inline void write_csv(const EvalTable& table, std::ostream& os) {
    os << csv_string(table);
}

// ---- table files: one spec per line as key=value pairs --------------------

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
    return buf;
}

struct TableLine {
    OperatorSpec spec;
    Grid grid;
    QuadConfig cfg;
    std::string raw;

    /// Deterministic output name derived from the operator and grid.
    std::string file_name() const {
        char buf[64];
        std::snprintf(buf, sizeof buf, " grid=%.17g:%.17g:%d", grid.start,
                      grid.end, grid.steps);
        return "table-" + hex16(fnv1a64(spec.canonical() + buf)) + ".csv";
    }
};

/// Parses one table-file line of whitespace-separated key=value pairs.
/// Keys: op, alpha, rho, kernel, a, b, f, grid, base-nodes, max-nodes,
/// rel-tol, abs-tol. Expressions must not contain whitespace.
inline TableLine parse_table_line(const std::string& line,
                                  const QuadConfig& base_cfg) {
    TableLine out;
    out.cfg = base_cfg;
    out.raw = line;
    bool has_op = false, has_grid = false;
    std::istringstream iss(line);
    std::string tok;
    auto as_num = [](const std::string& v, const std::string& key) {
        double d = 0.0;
        auto res = std::from_chars(v.data(), v.data() + v.size(), d);
        if (res.ec != std::errc() || res.ptr != v.data() + v.size())
            throw domain_error("malformed number for key '" + key + "'");
        return d;
    };
    while (iss >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos || eq == 0)
            throw domain_error("expected key=value, got '" + tok + "'");
        std::string key = tok.substr(0, eq);
        std::string val = tok.substr(eq + 1);
        if (key == "op") {
            out.spec.op = parse_operator_kind(val);
            has_op = true;
        } else if (key == "alpha") {
            out.spec.alpha = as_num(val, key);
            out.spec.has_alpha = true;
        } else if (key == "rho") {
            out.spec.rho = as_num(val, key);
        } else if (key == "kernel") {
            out.spec.kernel_text = val;
        } else if (key == "a" || key == "b") {
            out.spec.anchor = as_num(val, key);
            out.spec.has_anchor = true;
        } else if (key == "f") {
            out.spec.f_text = val;
        } else if (key == "grid") {
            out.grid = Grid::parse(val);
            has_grid = true;
        } else if (key == "base-nodes") {
            out.cfg.base_nodes = (int)as_num(val, key);
        } else if (key == "max-nodes") {
            out.cfg.max_nodes = (int)as_num(val, key);
        } else if (key == "rel-tol") {
            out.cfg.rel_tol = as_num(val, key);
        } else if (key == "abs-tol") {
            out.cfg.abs_tol = as_num(val, key);
        } else {
            throw domain_error("unknown key '" + key + "'");
        }
    }
    if (!has_op) throw domain_error("missing op=");
    if (!has_grid) throw domain_error("missing grid=");
    out.spec.resolve();
    out.cfg.validate();
    return out;
}

} // namespace propfrac
