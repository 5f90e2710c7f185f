#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "vbl/errors.hpp"
#include "vbl/expr.hpp"

using namespace vbl;

TEST_CASE("parse: structure of simple products") {
  ExprAst ast = parse_expression("u*(1-u)");
  const ExprNode& root = ast.root();
  CHECK(root.kind == ExprKind::Mul);
  CHECK(root.lhs->kind == ExprKind::Variable);
  CHECK(root.rhs->kind == ExprKind::Sub);
  CHECK(root.rhs->lhs->kind == ExprKind::Constant);
  CHECK(root.rhs->lhs->value == 1.0);
  CHECK(root.rhs->rhs->kind == ExprKind::Variable);
}

TEST_CASE("parse: Buckley-Leverett flux") {
  ExprAst ast = parse_expression("u^2/(u^2 + 0.5*(1-u)^2)");
  const ExprNode& root = ast.root();
  CHECK(root.kind == ExprKind::Div);
  CHECK(root.lhs->kind == ExprKind::Pow);
  // evaluates to 2/3 at u = 1 (D = 1) and 0 at u = 0
  CHECK(eval_jet3(ast, 0.0).v0 == doctest::Approx(0.0));
  CHECK(eval_jet3(ast, 1.0).v0 == doctest::Approx(1.0));
  CHECK(eval_jet3(ast, 0.5).v0 == doctest::Approx(0.25 / 0.375));
}

TEST_CASE("parse: errors carry offsets") {
  CHECK_THROWS_AS(parse_expression("u*((1-u)"), SyntaxError);
  try {
    parse_expression("u*((1-u)");
  } catch (const SyntaxError& e) {
    CHECK(e.offset == 8);  // end of input
  }
  try {
    parse_expression("u + @");
  } catch (const SyntaxError& e) {
    CHECK(e.offset == 4);
  }
  CHECK_THROWS_AS(parse_expression("foo(u)"), SyntaxError);
  CHECK_THROWS_AS(parse_expression("u) + 1"), SyntaxError);
  CHECK_THROWS_AS(parse_expression("u^u"), SyntaxError);  // non-constant exponent
  CHECK_THROWS_AS(parse_expression(""), SyntaxError);
}

TEST_CASE("parse: precedence and associativity") {
  // ^ binds tighter than unary minus: -u^2 = -(u^2)
  CHECK(eval_jet3(parse_expression("-u^2"), 3.0).v0 == doctest::Approx(-9.0));
  // right-associative: 2^3^2 would need constant folding of 3^2; exponents are
  // constants, so check through a parenthesized form
  CHECK(eval_jet3(parse_expression("u^(2)"), 3.0).v0 == doctest::Approx(9.0));
  CHECK(eval_jet3(parse_expression("1 - u - u"), 1.0).v0 == doctest::Approx(-1.0));
  CHECK(eval_jet3(parse_expression("4/u/2"), 2.0).v0 == doctest::Approx(1.0));
  CHECK(eval_jet3(parse_expression("u^-2"), 2.0).v0 == doctest::Approx(0.25));
}

TEST_CASE("eval_jet3: Burgers flux at u = 1") {
  const Jet3 j = eval_jet3(parse_expression("0.5*u^2"), 1.0);
  CHECK(j.v0 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(j.v1 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(j.v2 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(j.v3 == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("eval_jet3: Buckley-Leverett flux derivatives at 0") {
  ExprAst ast = parse_expression("u^2/(u^2 + 0.5*(1-u)^2)");
  const Jet3 j = eval_jet3(ast, 0.0);
  CHECK(j.v0 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(j.v1 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(j.v2 == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(j.v3 == doctest::Approx(24.0).epsilon(1e-12));
}

TEST_CASE("eval_jet3: u - u^4 at 0") {
  const Jet3 j = eval_jet3(parse_expression("u - u^4"), 0.0);
  CHECK(j.v0 == 0.0);
  CHECK(j.v1 == 1.0);
  CHECK(j.v2 == 0.0);
  CHECK(j.v3 == 0.0);
}

TEST_CASE("eval_jet3: domain errors") {
  CHECK_THROWS_AS(eval_jet3(parse_expression("1/u"), 0.0), DomainError);
  CHECK_THROWS_AS(eval_jet3(parse_expression("ln(u)"), -1.0), DomainError);
  CHECK_THROWS_AS(eval_jet3(parse_expression("sqrt(u)"), -2.0), DomainError);
  CHECK_THROWS_AS(eval_jet3(parse_expression("u^0.5"), -2.0), DomainError);
  CHECK_NOTHROW(eval_jet3(parse_expression("u^3"), -2.0));
}

namespace {

std::string random_polynomial(std::mt19937& rng) {
  std::uniform_int_distribution<int> deg(1, 5);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  std::string s;
  const int d = deg(rng);
  for (int k = 0; k <= d; ++k) {
    const double c = coef(rng);
    if (k > 0) s += " + ";
    s += std::to_string(c) + "*u^" + std::to_string(k);
  }
  return s;
}

}  // namespace

TEST_CASE("jets match central finite differences on random polynomials") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> pts(-2.0, 2.0);
  std::vector<std::string> sources = {"0.5*u^2", "u*(1-u)", "u - u^4",
                                      "u^2/(u^2 + 0.5*(1-u)^2)", "exp(0.3*u)*sin(u)"};
  for (int i = 0; i < 10; ++i) sources.push_back(random_polynomial(rng));

  for (const std::string& src : sources) {
    ExprAst ast = parse_expression(src);
    auto f = [&](double u) { return eval_jet3(ast, u).v0; };
    for (int i = 0; i < 100; ++i) {
      const double u = pts(rng);
      const Jet3 j = eval_jet3(ast, u);
      const double h1 = 1e-5, h2 = 1e-4, h3 = 1e-3;
      const double fd1 = (f(u + h1) - f(u - h1)) / (2 * h1);
      const double fd2 = (f(u + h2) - 2 * f(u) + f(u - h2)) / (h2 * h2);
      const double fd3 =
          (f(u + 2 * h3) - 2 * f(u + h3) + 2 * f(u - h3) - f(u - 2 * h3)) / (2 * h3 * h3 * h3);
      CHECK(std::abs(j.v1 - fd1) <= 1e-6 * (1.0 + std::abs(j.v1)));
      CHECK(std::abs(j.v2 - fd2) <= 1e-4 * (1.0 + std::abs(j.v2)));
      CHECK(std::abs(j.v3 - fd3) <= 1e-2 * (1.0 + std::abs(j.v3)));
    }
  }
}

namespace {

bool same_tree(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind || a.value != b.value) return false;
  if ((a.lhs == nullptr) != (b.lhs == nullptr)) return false;
  if ((a.rhs == nullptr) != (b.rhs == nullptr)) return false;
  if (a.lhs && !same_tree(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !same_tree(*a.rhs, *b.rhs)) return false;
  return true;
}

}  // namespace

TEST_CASE("parse-print-parse idempotence") {
  std::mt19937 rng(7);
  std::vector<std::string> sources = {
      "u*(1-u)", "u^2/(u^2 + 0.5*(1-u)^2)", "-u^2 + exp(u)/(1+u^2)", "sqrt(1 + u^2)*cos(u)",
      "0.25*u^4 - u^3/3"};
  for (int i = 0; i < 10; ++i) sources.push_back(random_polynomial(rng));
  for (const std::string& src : sources) {
    ExprAst a = parse_expression(src);
    const std::string printed = print_expression(a);
    ExprAst b = parse_expression(printed);
    CHECK_MESSAGE(same_tree(a.root(), b.root()), "canonical form: ", printed);
    CHECK(print_expression(b) == printed);
  }
}

TEST_CASE("jet arithmetic is linear in the function") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> pts(-2.0, 2.0);
  ExprAst h1 = parse_expression("u^3 - 2*u");
  ExprAst h2 = parse_expression("sin(u) + 0.5*u^2");
  // a*h1 + b*h2 with a = 2.5, b = -1.25
  ExprAst combo = parse_expression("2.5*(u^3 - 2*u) + (-1.25)*(sin(u) + 0.5*u^2)");
  for (int i = 0; i < 50; ++i) {
    const double u = pts(rng);
    const Jet3 ja = eval_jet3(h1, u), jb = eval_jet3(h2, u), jc = eval_jet3(combo, u);
    const Jet3 lin = 2.5 * ja + (-1.25) * jb;
    const double tol = 1e-13;
    CHECK(std::abs(jc.v0 - lin.v0) <= tol * (1.0 + std::abs(lin.v0)));
    CHECK(std::abs(jc.v1 - lin.v1) <= tol * (1.0 + std::abs(lin.v1)));
    CHECK(std::abs(jc.v2 - lin.v2) <= tol * (1.0 + std::abs(lin.v2)));
    CHECK(std::abs(jc.v3 - lin.v3) <= tol * (1.0 + std::abs(lin.v3)));
  }
}
