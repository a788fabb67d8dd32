#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>

#include "propfrac/errors.hpp"
#include "propfrac/jet.hpp"

namespace propfrac {

enum class NodeKind { Constant, Variable, Neg, Binary, Call };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class FuncId { Exp, Ln, Sin, Cos, Sqrt, Abs };

struct ExprNode {
    NodeKind kind;
    double number = 0.0;       // Constant
    BinaryOp op = BinaryOp::Add;
    FuncId fn = FuncId::Exp;
    std::shared_ptr<const ExprNode> a, b;
};

using NodePtr = std::shared_ptr<const ExprNode>;

namespace detail {

inline double value_of(double v) { return v; }
inline double value_of(const Jet& j) { return j.value(); }

inline double checked_div(double a, double b) {
    if (b == 0.0) throw domain_error("division by zero");
    return a / b;
}
inline Jet checked_div(const Jet& a, const Jet& b) { return a / b; }

inline double checked_log(double u) {
    if (!(u > 0.0)) throw domain_error("ln of non-positive argument");
    return std::log(u);
}
inline Jet checked_log(const Jet& u) { return log(u); }

inline double checked_sqrt(double u) {
    if (u < 0.0) throw domain_error("sqrt of negative argument");
    return std::sqrt(u);
}
inline Jet checked_sqrt(const Jet& u) { return sqrt(u); }

inline double checked_pow_real(double u, double a) {
    if (!(u > 0.0))
        throw domain_error("pow with non-integer exponent requires positive base");
    return std::pow(u, a);
}
inline Jet checked_pow_real(const Jet& u, double a) { return pow(u, a); }

inline double apply_abs(double u) { return std::fabs(u); }
inline Jet apply_abs(const Jet& u) { return abs(u); }

inline double apply_exp(double u) { return std::exp(u); }
inline Jet apply_exp(const Jet& u) { return exp(u); }
inline double apply_sin(double u) { return std::sin(u); }
inline Jet apply_sin(const Jet& u) { return sin(u); }
inline double apply_cos(double u) { return std::cos(u); }
inline Jet apply_cos(const Jet& u) { return cos(u); }

inline bool is_integer_exponent(double e) {
    return std::floor(e) == e && std::fabs(e) <= 1e9;
}

template <class T>
T eval_node(const ExprNode& n, const T& x) {
    switch (n.kind) {
    case NodeKind::Constant:
        return constant_like(x, n.number);
    case NodeKind::Variable:
        return x;
    case NodeKind::Neg:
        return -eval_node(*n.a, x);
    case NodeKind::Binary: {
        if (n.op == BinaryOp::Pow) {
            // Integer constant exponents go through repeated multiplication:
            // exact for jets and valid for non-positive bases.
            if (n.b->kind == NodeKind::Constant && is_integer_exponent(n.b->number)) {
                long long e = (long long)n.b->number;
                T base = eval_node(*n.a, x);
                if (e < 0 && value_of(base) == 0.0)
                    throw domain_error("division by zero");
                return pow_int(base, e);
            }
            T base = eval_node(*n.a, x);
            T expo = eval_node(*n.b, x);
            if (n.b->kind == NodeKind::Constant)
                return checked_pow_real(base, n.b->number);
            // expression-valued exponent: u^v = exp(v*ln(u))
            return apply_exp(expo * checked_log(base));
        }
        T lhs = eval_node(*n.a, x);
        T rhs = eval_node(*n.b, x);
        switch (n.op) {
        case BinaryOp::Add: return lhs + rhs;
        case BinaryOp::Sub: return lhs - rhs;
        case BinaryOp::Mul: return lhs * rhs;
        case BinaryOp::Div: return checked_div(lhs, rhs);
        default: break;
        }
        throw domain_error("corrupt expression node");
    }
    case NodeKind::Call: {
        T arg = eval_node(*n.a, x);
        switch (n.fn) {
        case FuncId::Exp:  return apply_exp(arg);
        case FuncId::Ln:   return checked_log(arg);
        case FuncId::Sin:  return apply_sin(arg);
        case FuncId::Cos:  return apply_cos(arg);
        case FuncId::Sqrt: return checked_sqrt(arg);
        case FuncId::Abs:  return apply_abs(arg);
        }
        throw domain_error("corrupt expression node");
    }
    }
    throw domain_error("corrupt expression node");
}

inline bool node_equal(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case NodeKind::Constant: return a.number == b.number;
    case NodeKind::Variable: return true;
    case NodeKind::Neg:      return node_equal(*a.a, *b.a);
    case NodeKind::Binary:
        return a.op == b.op && node_equal(*a.a, *b.a) && node_equal(*a.b, *b.b);
    case NodeKind::Call:
        return a.fn == b.fn && node_equal(*a.a, *b.a);
    }
    return false;
}

inline const char* func_name(FuncId f) {
    switch (f) {
    case FuncId::Exp:  return "exp";
    case FuncId::Ln:   return "ln";
    case FuncId::Sin:  return "sin";
    case FuncId::Cos:  return "cos";
    case FuncId::Sqrt: return "sqrt";
    case FuncId::Abs:  return "abs";
    }
    return "?";
}

// Precedence levels used by both the parser and the printer.
// 1: + -   2: * /   3: unary minus   4: ^   5: atoms
inline int node_prec(const ExprNode& n) {
    switch (n.kind) {
    case NodeKind::Binary:
        switch (n.op) {
        case BinaryOp::Add: case BinaryOp::Sub: return 1;
        case BinaryOp::Mul: case BinaryOp::Div: return 2;
        case BinaryOp::Pow: return 4;
        }
        return 1;
    case NodeKind::Neg: return 3;
    default: return 5;
    }
}

inline void print_node(const ExprNode& n, std::string& out);

inline void print_child(const ExprNode& c, int min_prec, std::string& out) {
    if (node_prec(c) < min_prec) {
        out += '(';
        print_node(c, out);
        out += ')';
    } else {
        print_node(c, out);
    }
}

inline void print_node(const ExprNode& n, std::string& out) {
    switch (n.kind) {
    case NodeKind::Constant: {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", n.number);
        out += buf;
        return;
    }
    case NodeKind::Variable:
        out += 'x';
        return;
    case NodeKind::Neg:
        out += '-';
        print_child(*n.a, 3, out);
        return;
    case NodeKind::Binary:
        switch (n.op) {
        case BinaryOp::Add:
            print_child(*n.a, 1, out); out += " + "; print_child(*n.b, 2, out);
            return;
        case BinaryOp::Sub:
            print_child(*n.a, 1, out); out += " - "; print_child(*n.b, 2, out);
            return;
        case BinaryOp::Mul:
            print_child(*n.a, 2, out); out += '*'; print_child(*n.b, 3, out);
            return;
        case BinaryOp::Div:
            print_child(*n.a, 2, out); out += '/'; print_child(*n.b, 3, out);
            return;
        case BinaryOp::Pow:
            print_child(*n.a, 5, out); out += '^'; print_child(*n.b, 3, out);
            return;
        }
        return;
    case NodeKind::Call:
        out += func_name(n.fn);
        out += '(';
        print_node(*n.a, out);
        out += ')';
        return;
    }
}

} // namespace detail

/// Parsed arithmetic expression in one variable `x`.
///
/// Grammar: `^` (right-associative) > unary minus > `* /` > `+ -`,
/// parentheses, calls `exp ln sin cos sqrt abs`, two-argument `pow(a,b)`
/// (sugar for `a^b`), and the named constants `e`, `pi`.
/// Immutable after construction; evaluation is pure and thread-safe.
class ExprAst {
public:
    ExprAst() = default;

    static ExprAst parse(std::string_view text);

    /// Scalar evaluation at x. Domain violations throw domain_error.
    double eval(double x) const {
        require_root();
        return detail::eval_node<double>(*root_, x);
    }

    /// Value plus exact derivatives d^1..d^order at x, order in [1,4].
    Jet eval_jet(double x, int order) const {
        require_root();
        if (order < 1 || order > Jet::max_order)
            throw domain_error("eval_jet order must be in [1, 4]");
        return detail::eval_node<Jet>(*root_, Jet::variable(x, order));
    }

    /// Canonical text form; reparses to a structurally identical tree.
    std::string str() const {
        require_root();
        std::string out;
        detail::print_node(*root_, out);
        return out;
    }

    bool same_structure(const ExprAst& other) const {
        require_root();
        other.require_root();
        return detail::node_equal(*root_, *other.root_);
    }

    const NodePtr& root() const { return root_; }
    explicit operator bool() const { return static_cast<bool>(root_); }

    explicit ExprAst(NodePtr root) : root_(std::move(root)) {}

private:
    void require_root() const {
        if (!root_) throw domain_error("empty expression");
    }

    NodePtr root_;
};

// ---- programmatic AST construction ----------------------------------------

inline ExprAst expr_const(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Constant;
    n->number = v;
    return ExprAst(n);
}

inline ExprAst expr_var() {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Variable;
    return ExprAst(n);
}

inline ExprAst expr_call(FuncId f, const ExprAst& a) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Call;
    n->fn = f;
    n->a = a.root();
    return ExprAst(n);
}

inline ExprAst expr_bin(BinaryOp op, const ExprAst& a, const ExprAst& b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Binary;
    n->op = op;
    n->a = a.root();
    n->b = b.root();
    return ExprAst(n);
}

inline ExprAst operator+(const ExprAst& a, const ExprAst& b) { return expr_bin(BinaryOp::Add, a, b); }
inline ExprAst operator-(const ExprAst& a, const ExprAst& b) { return expr_bin(BinaryOp::Sub, a, b); }
inline ExprAst operator*(const ExprAst& a, const ExprAst& b) { return expr_bin(BinaryOp::Mul, a, b); }
inline ExprAst operator/(const ExprAst& a, const ExprAst& b) { return expr_bin(BinaryOp::Div, a, b); }
inline ExprAst operator-(const ExprAst& a) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Neg;
    n->a = a.root();
    return ExprAst(n);
}
inline ExprAst pow_expr(const ExprAst& base, const ExprAst& expo) {
    return expr_bin(BinaryOp::Pow, base, expo);
}

// ---- parser ----------------------------------------------------------------

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr run() {
        if (text_.empty()) throw parse_error("empty expression", 0);
        NodePtr e = parse_sum();
        skip_ws();
        if (pos_ != text_.size())
            throw parse_error("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size()) {
            unsigned char c = text_[pos_];
            if (c == ' ' || c == '\t') { ++pos_; continue; }
            if (c >= 0x80) throw parse_error("non-ASCII byte", pos_);
            break;
        }
    }

    bool peek_is(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool consume(char c) {
        if (peek_is(c)) { ++pos_; return true; }
        return false;
    }

    NodePtr parse_sum() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (consume('+'))      lhs = bin(BinaryOp::Add, lhs, parse_term());
            else if (consume('-')) lhs = bin(BinaryOp::Sub, lhs, parse_term());
            else return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (consume('*'))      lhs = bin(BinaryOp::Mul, lhs, parse_unary());
            else if (consume('/')) lhs = bin(BinaryOp::Div, lhs, parse_unary());
            else return lhs;
        }
    }

    NodePtr parse_unary() {
        if (consume('-')) {
            auto n = std::make_shared<ExprNode>();
            n->kind = NodeKind::Neg;
            n->a = parse_unary();
            return n;
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (consume('^'))
            return bin(BinaryOp::Pow, base, parse_unary());  // right-assoc
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size())
            throw parse_error("expected expression", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = parse_sum();
            if (!consume(')'))
                throw parse_error("expected ')'", pos_);
            return e;
        }
        if (std::isdigit((unsigned char)c) || c == '.')
            return parse_number();
        if (std::isalpha((unsigned char)c) || c == '_')
            return parse_ident();
        throw parse_error(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr parse_number() {
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        double v = 0.0;
        auto res = std::from_chars(begin, end, v);
        if (res.ec != std::errc() || res.ptr == begin)
            throw parse_error("malformed number", pos_);
        pos_ = res.ptr - text_.data();
        auto n = std::make_shared<ExprNode>();
        n->kind = NodeKind::Constant;
        n->number = v;
        return n;
    }

    NodePtr parse_ident() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum((unsigned char)text_[pos_]) || text_[pos_] == '_'))
            ++pos_;
        std::string_view name = text_.substr(start, pos_ - start);

        if (peek_is('(')) return parse_call(name, start);

        if (name == "x") {
            auto n = std::make_shared<ExprNode>();
            n->kind = NodeKind::Variable;
            return n;
        }
        if (name == "e")  return constant(std::numbers::e);
        if (name == "pi") return constant(std::numbers::pi);
        throw parse_error("unknown identifier '" + std::string(name) + "'", start);
    }

    NodePtr parse_call(std::string_view name, std::size_t name_off) {
        consume('(');
        NodePtr first = parse_sum();
        bool two_args = consume(',');
        NodePtr second;
        if (two_args) second = parse_sum();
        if (!consume(')'))
            throw parse_error("expected ')'", pos_);

        if (name == "pow") {
            if (!two_args)
                throw parse_error("pow expects 2 arguments", name_off);
            return bin(BinaryOp::Pow, first, second);
        }
        if (two_args)
            throw parse_error(std::string(name) + " expects 1 argument", name_off);

        FuncId f;
        if (name == "exp")       f = FuncId::Exp;
        else if (name == "ln")   f = FuncId::Ln;
        else if (name == "sin")  f = FuncId::Sin;
        else if (name == "cos")  f = FuncId::Cos;
        else if (name == "sqrt") f = FuncId::Sqrt;
        else if (name == "abs")  f = FuncId::Abs;
        else
            throw parse_error("unknown function '" + std::string(name) + "'", name_off);

        auto n = std::make_shared<ExprNode>();
        n->kind = NodeKind::Call;
        n->fn = f;
        n->a = first;
        return n;
    }

    static NodePtr bin(BinaryOp op, NodePtr a, NodePtr b) {
        auto n = std::make_shared<ExprNode>();
        n->kind = NodeKind::Binary;
        n->op = op;
        n->a = std::move(a);
        n->b = std::move(b);
        return n;
    }

    static NodePtr constant(double v) {
        auto n = std::make_shared<ExprNode>();
        n->kind = NodeKind::Constant;
        n->number = v;
        return n;
    }
};

} // namespace detail

inline ExprAst ExprAst::parse(std::string_view text) {
    return ExprAst(detail::Parser(text).run());
}

} // namespace propfrac
