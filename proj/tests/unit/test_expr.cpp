#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "r13fem/cases.hpp"
#include "r13fem/error.hpp"
#include "r13fem/expr.hpp"

using r13::Expr;

TEST_CASE("literals, variables and constants") {
  CHECK(Expr::parse("pi").eval(0, 0) == 3.141592653589793);
  CHECK(Expr::parse("0.5*x + 1").eval(1.0, 0.0) == doctest::Approx(1.5));
  CHECK(Expr::parse("2^3^2").eval(0, 0) == 512.0);
  CHECK(Expr::parse("-2^2").eval(0, 0) == -4.0);
  CHECK(Expr::parse("1 - 2 - 3").eval(0, 0) == -4.0);
  CHECK(Expr::parse("8 / 4 / 2").eval(0, 0) == 1.0);
  CHECK(Expr::parse("1.5e2 + 2E-1").eval(0, 0) == doctest::Approx(150.2));
  CHECK(Expr::parse("abs(-3) + sqrt(16) + exp(0) + cos(0) + sin(0)").eval(0, 0) == 9.0);
  CHECK(Expr::parse("x*y").eval(2.0, -3.0) == -6.0);
}

TEST_CASE("atan2 is the polar angle of (b, a)") {
  CHECK(Expr::parse("atan2(1, 1)").eval(0, 0) == doctest::Approx(std::numbers::pi / 4));
  CHECK(Expr::parse("atan2(1, 0)").eval(0, 0) == doctest::Approx(std::numbers::pi / 2));
  CHECK(Expr::parse("atan2(0, -1)").eval(0, 0) == doctest::Approx(std::numbers::pi));
  CHECK_THROWS_AS(Expr::parse("atan2(y, x)").eval(0, 0), r13::EvalError);
}

TEST_CASE("syntax errors carry the offset") {
  try {
    Expr::parse("1 +");
    FAIL("no error");
  } catch (const r13::ParseError& e) {
    CHECK(e.offset() == 3);
  }
  try {
    Expr::parse("2 * (x + 1");
    FAIL("no error");
  } catch (const r13::ParseError& e) {
    CHECK(e.offset() == 10);
  }
  try {
    Expr::parse("foo(1)");
    FAIL("no error");
  } catch (const r13::ParseError& e) {
    CHECK(e.offset() == 0);
  }
  CHECK_THROWS_AS(Expr::parse("atan2(1)"), r13::ParseError);
  CHECK_THROWS_AS(Expr::parse("1 2"), r13::ParseError);
  CHECK_THROWS_AS(Expr::parse(""), r13::ParseError);
}

TEST_CASE("division by zero") {
  CHECK_THROWS_AS(Expr::parse("1 / (x - 1)").eval(1.0, 0.0), r13::EvalError);
}

TEST_CASE("case expressions parse") {
  CHECK_NOTHROW(Expr::parse("1/2 * 2/pi * atan2(x-1, y) + 1"));
  const Expr p = Expr::parse("-0.27 * cos(atan2(y,x))");
  CHECK(p.eval(2.0, 0.0) == doctest::Approx(-0.27));
  CHECK(p.eval(0.0, 2.0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("pump wall temperatures are continuous at the junctions") {
  const auto e = r13::pump_temperature_expressions();
  std::vector<Expr> t;
  for (const auto& s : e) t.push_back(Expr::parse(s));
  const double tol = 1e-12;
  for (double r : {0.5, 2.0}) {
    // right arc / top straight at (1, r)
    CHECK(std::abs(t[0].eval(1, r) - t[1].eval(1, r)) < tol);
    // top straight / left arc at (-1, r)
    CHECK(std::abs(t[1].eval(-1, r) - t[2].eval(-1, r)) < tol);
    // left arc / bottom straight at (-1, -r)
    CHECK(std::abs(t[2].eval(-1, -r) - t[3].eval(-1, -r)) < tol);
    // bottom straight / right arc at (1, -r)
    CHECK(std::abs(t[3].eval(1, -r) - t[0].eval(1, -r)) < tol);
  }
  CHECK(t[0].eval(1, 0.5) == doctest::Approx(1.5));
  CHECK(t[0].eval(1, -0.5) == doctest::Approx(0.5));
}

TEST_CASE("printing is a fixed point of parse") {
  for (const char* s : {"1 + 2*x", "-x^2", "atan2(y, x - 1) / pi", "--x", "2^-1", "1e-300 * 3", "(x)"}) {
    const std::string once = Expr::parse(s).to_string();
    const std::string twice = Expr::parse(once).to_string();
    CHECK(once == twice);
    CHECK(Expr::parse(once).eval(0.3, 0.7) == Expr::parse(s).eval(0.3, 0.7));
  }
}

TEST_CASE("constant detection") {
  CHECK(Expr::parse("1/2 * pi").is_constant());
  CHECK_FALSE(Expr::parse("x - x").is_constant());
  CHECK(Expr::constant(-2.5).eval(9, 9) == -2.5);
  CHECK(Expr().eval(1, 1) == 0.0);
}

namespace {

// Random expression trees rendered to text, with a value computed on the tree itself.
struct Gen {
  std::mt19937 rng;
  double x, y;

  struct Out {
    std::string text;
    double value;
  };

  Out leaf() {
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
      case 0: return {"x", x};
      case 1: return {"y", y};
      case 2: return {"pi", std::numbers::pi};
      default: {
        const int n = std::uniform_int_distribution<int>(1, 99)(rng);
        const int d = std::uniform_int_distribution<int>(0, 2)(rng);
        const double v = n / std::pow(10.0, d);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.*f", d, v);
        return {buf, std::stod(buf)};
      }
    }
  }

  Out make(int depth) {
    if (depth == 0) return leaf();
    const int pick = std::uniform_int_distribution<int>(0, 9)(rng);
    if (pick <= 3) {
      const char ops[] = "+-*/";
      Out a = make(depth - 1), b = make(depth - 1);
      const char op = ops[pick];
      if (op == '/' && std::abs(b.value) < 1e-3) return {"(" + a.text + " + " + b.text + ")", a.value + b.value};
      double v = op == '+' ? a.value + b.value : op == '-' ? a.value - b.value : op == '*' ? a.value * b.value : a.value / b.value;
      return {"(" + a.text + " " + op + " " + b.text + ")", v};
    }
    if (pick == 4) {
      Out a = make(depth - 1);
      return {"-" + a.text, -a.value};
    }
    if (pick == 5) {
      Out a = make(depth - 1);
      return {"sin(" + a.text + ")", std::sin(a.value)};
    }
    if (pick == 6) {
      Out a = make(depth - 1);
      return {"cos(" + a.text + ")", std::cos(a.value)};
    }
    if (pick == 7) {
      Out a = make(depth - 1);
      return {"sqrt(abs(" + a.text + "))", std::sqrt(std::abs(a.value))};
    }
    if (pick == 8) {
      Out a = make(depth - 1), b = make(depth - 1);
      if (a.value == 0.0 && b.value == 0.0) return a;
      return {"atan2(" + a.text + ", " + b.text + ")", std::atan2(a.value, b.value)};
    }
    Out a = make(depth - 1);
    return {"(" + a.text + ")^2", a.value * a.value};
  }
};

}  // namespace

TEST_CASE("random expressions agree with direct tree evaluation") {
  Gen g{std::mt19937(12345), 0.37, -1.21};
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const int depth = 1 + i % 5;
    const Gen::Out o = g.make(depth);
    if (!std::isfinite(o.value) || std::abs(o.value) > 1e12) continue;
    const double v = Expr::parse(o.text).eval(g.x, g.y);
    const double tol = 1e-12 * std::max(1.0, std::abs(o.value));
    if (std::abs(v - o.value) > tol) {
      INFO(o.text);
      CHECK(v == doctest::Approx(o.value));
    }
    ++checked;
  }
  CHECK(checked > 900);
}
