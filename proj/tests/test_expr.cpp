#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>

#include "propfrac/expr.hpp"
#include "propfrac/verify.hpp"

using namespace propfrac;

namespace {

const char* kCorpus[] = {
    "x",
    "2*x^2 + sin(x)",
    "sin(x)*exp(x)",
    "exp(-x^2)",
    "ln(1+x^2)",
    "sqrt(1+x^2)",
    "1/(1+x)",
    "x^2.5",
    "cos(2*x)*x^2",
    "abs(x) + x^3",
    "(x + 1)^3 / (x + 2)",
    "e^x - pi*x",
    "pow(x, 3) - pow(2, x)",
};

} // namespace

TEST_CASE("parsing produces the expected shapes") {
    ExprAst x = expr_var();
    CHECK(ExprAst::parse("x").same_structure(x));
    ExprAst expected = expr_const(2.0) * pow_expr(x, expr_const(2.0)) +
                       expr_call(FuncId::Sin, x);
    CHECK(ExprAst::parse("2*x^2 + sin(x)").same_structure(expected));

    // precedence: ^ binds tighter than unary minus, right-associative
    CHECK(ExprAst::parse("-x^2").same_structure(-pow_expr(x, expr_const(2.0))));
    CHECK(ExprAst::parse("x^3^2").same_structure(
        pow_expr(x, pow_expr(expr_const(3.0), expr_const(2.0)))));
    CHECK(ExprAst::parse("x - x - x").same_structure((x - x) - x));
    CHECK(ExprAst::parse("pow(x, 2)").same_structure(
        pow_expr(x, expr_const(2.0))));
}

TEST_CASE("parse errors carry byte offsets") {
    try {
        ExprAst::parse("ln(");
        FAIL("expected a parse error");
    } catch (const parse_error& e) {
        CHECK(e.offset() == 3);
    }
    CHECK_THROWS_AS(ExprAst::parse(""), parse_error);
    CHECK_THROWS_AS(ExprAst::parse("2 +"), parse_error);
    CHECK_THROWS_AS(ExprAst::parse("y + 1"), parse_error);
    CHECK_THROWS_AS(ExprAst::parse("sin(x, 2)"), parse_error);
    CHECK_THROWS_AS(ExprAst::parse("pow(x)"), parse_error);
    CHECK_THROWS_AS(ExprAst::parse("foo(x)"), parse_error);
    CHECK_THROWS_AS(ExprAst::parse("(x"), parse_error);
    CHECK_THROWS_AS(ExprAst::parse("x\xc3\xa9"), parse_error);
}

TEST_CASE("evaluation matches hand values") {
    CHECK(ExprAst::parse("x^2").eval(3.0) == 9.0);
    CHECK(ExprAst::parse("exp(0)").eval(123.0) == 1.0);
    CHECK(ExprAst::parse("2*x^2 + sin(x)").eval(1.0) ==
          Catch::Approx(2.0 + std::sin(1.0)).epsilon(1e-15));
    CHECK(ExprAst::parse("e").eval(0.0) ==
          Catch::Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK(ExprAst::parse("pi").eval(0.0) ==
          Catch::Approx(4.0 * std::atan(1.0)).epsilon(1e-15));
    CHECK(ExprAst::parse("abs(0-x)").eval(2.5) == 2.5);
}

TEST_CASE("evaluation reports domain violations") {
    CHECK_THROWS_AS(ExprAst::parse("ln(x)").eval(-1.0), domain_error);
    CHECK_THROWS_AS(ExprAst::parse("ln(x)").eval(0.0), domain_error);
    CHECK_THROWS_AS(ExprAst::parse("sqrt(x)").eval(-2.0), domain_error);
    CHECK_THROWS_AS(ExprAst::parse("1/x").eval(0.0), domain_error);
    CHECK_THROWS_AS(ExprAst::parse("x^0.5").eval(-1.0), domain_error);
    CHECK_THROWS_AS(ExprAst::parse("x^-1").eval(0.0), domain_error);
    CHECK_THROWS_AS(ExprAst::parse("ln(x)").eval_jet(-1.0, 2), domain_error);
}

TEST_CASE("jets carry exact derivatives") {
    Jet j = ExprAst::parse("x^3").eval_jet(2.0, 2);
    CHECK(j.value() == 8.0);
    CHECK(j.derivative(1) == 12.0);
    CHECK(j.derivative(2) == 12.0);

    Jet c = ExprAst::parse("5").eval_jet(0.3, 3);
    CHECK(c.value() == 5.0);
    CHECK(c.derivative(1) == 0.0);
    CHECK(c.derivative(2) == 0.0);
    CHECK(c.derivative(3) == 0.0);

    // d^k of sin at 0: 0, 1, 0, -1
    Jet s = ExprAst::parse("sin(x)").eval_jet(0.0, 3);
    CHECK(s.value() == 0.0);
    CHECK(s.derivative(1) == 1.0);
    CHECK(s.derivative(2) == 0.0);
    CHECK(s.derivative(3) == Catch::Approx(-1.0).epsilon(1e-15));

    CHECK_THROWS_AS(ExprAst::parse("x").eval_jet(0.0, 5), domain_error);
    CHECK_THROWS_AS(ExprAst::parse("x").eval_jet(0.0, 0), domain_error);
}

TEST_CASE("jet derivatives match extrapolated differences") {
    // the shared corpus check: orders 1..3 vs Richardson central stencils
    for (const CheckResult& c : jet_fd_checks()) {
        INFO(c.label << " err=" << c.err);
        CHECK(c.pass);
    }
}

TEST_CASE("printing round-trips structurally") {
    for (const char* s : kCorpus) {
        ExprAst ast = ExprAst::parse(s);
        ExprAst back = ExprAst::parse(ast.str());
        INFO(s << "  printed as  " << ast.str());
        CHECK(ast.same_structure(back));
    }
}

TEST_CASE("scalar eval equals the order-0 jet component bit for bit") {
    const double xs[] = {0.3, 0.75, 1.5, 2.25};
    for (const char* s : kCorpus)
        for (double x : xs) {
            ExprAst ast = ExprAst::parse(s);
            double direct = ast.eval(x);
            double jet0 = ast.eval_jet(x, 3).value();
            INFO(s << " at " << x);
            CHECK(std::memcmp(&direct, &jet0, sizeof direct) == 0);
        }
}

TEST_CASE("jet arithmetic identities") {
    Jet x = Jet::variable(1.7, 3);
    Jet p = x * x * x;  // x^3: derivatives 3x^2, 6x, 6
    CHECK(p.value() == Catch::Approx(1.7 * 1.7 * 1.7).epsilon(1e-15));
    CHECK(p.derivative(1) == Catch::Approx(3 * 1.7 * 1.7).epsilon(1e-15));
    CHECK(p.derivative(2) == Catch::Approx(6 * 1.7).epsilon(1e-15));
    CHECK(p.derivative(3) == Catch::Approx(6.0).epsilon(1e-15));

    // product rule at jet level: d(u*v) = u'v + uv'
    Jet u = exp(x), v = sin(x);
    Jet w = u * v;
    CHECK(w.derivative(1) ==
          Catch::Approx(u.derivative(1) * v.value() +
                        u.value() * v.derivative(1))
              .epsilon(1e-14));

    // quotient undoes product
    Jet q = w / v;
    for (int k = 0; k <= 3; ++k)
        CHECK(q.taylor(k) == Catch::Approx(u.taylor(k)).margin(1e-14));

    // derivative_jet shifts orders
    Jet dp = p.derivative_jet();
    CHECK(dp.order() == 2);
    CHECK(dp.value() == Catch::Approx(p.derivative(1)).epsilon(1e-15));
    CHECK(dp.derivative(1) == Catch::Approx(p.derivative(2)).epsilon(1e-15));

    // sqrt/ln/pow consistency: sqrt(x)^2 = x, exp(ln x) = x
    Jet r = sqrt(x);
    Jet rr = r * r;
    for (int k = 0; k <= 3; ++k)
        CHECK(rr.taylor(k) == Catch::Approx(x.taylor(k)).margin(1e-13));
    Jet l = exp(log(x));
    for (int k = 0; k <= 3; ++k)
        CHECK(l.taylor(k) == Catch::Approx(x.taylor(k)).margin(1e-13));
    Jet pw = pow(x, 2.5);
    Jet pw2 = sqrt(x) * x * x;
    for (int k = 0; k <= 3; ++k)
        CHECK(pw.taylor(k) == Catch::Approx(pw2.taylor(k)).epsilon(1e-12));
}
