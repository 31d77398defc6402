#include <doctest.h>
#include <weylab/expr.hpp>

#include <cmath>

#include "oracles.hpp"

using namespace weylab;

namespace {
Scope plane() {
  Scope s;
  s.coords = {"x", "y"};
  s.complex_pair = std::pair{0, 1};
  return s;
}
}  // namespace

TEST_CASE("parse and evaluate basics") {
  auto e = Expr::parse("4/(1+x^2+y^2)^2", plane());
  std::vector<double> p{0, 0};
  CHECK(e.value_at(p) == doctest::Approx(4.0));
  auto f = Expr::parse("x^2 + y", plane());
  std::vector<double> q{1, 2};
  auto j = f.eval_at(q, 1);
  CHECK(j[0] == doctest::Approx(3.0));
  CHECK(j[1] == doctest::Approx(2.0));
  CHECK(j[2] == doctest::Approx(1.0));
  auto a = Expr::parse("abs2(zeta)", plane());
  std::vector<double> r{3, 4};
  CHECK(a.value_at(r) == doctest::Approx(25.0));
  auto z = Expr::parse("zeta^2 + i", plane());
  CHECK(z.needs_complex());
  CHECK(z.eval_complex_at(r, 0).value() == Complex(-7, 25));
}

TEST_CASE("log derivative") {
  Scope s;
  s.coords = {"rho"};
  auto e = Expr::parse("log(rho)", s);
  std::vector<double> p{std::exp(1.0)};
  auto j = e.eval_at(p, 1);
  CHECK(j[0] == doctest::Approx(1.0));
  CHECK(j[1] == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("precedence and associativity") {
  Scope s;
  s.coords = {"x"};
  std::vector<double> p{2};
  CHECK(Expr::parse("-x^2", s).value_at(p) == doctest::Approx(-4));
  CHECK(Expr::parse("2^3^2", s).value_at(p) == doctest::Approx(512));
  CHECK(Expr::parse("8/4/2", s).value_at(p) == doctest::Approx(1));
  CHECK(Expr::parse("8-4-2", s).value_at(p) == doctest::Approx(2));
  CHECK(Expr::parse("x^-1", s).value_at(p) == doctest::Approx(0.5));
  CHECK(Expr::parse("x^0.5", s).value_at(p) == doctest::Approx(std::sqrt(2.0)));
  CHECK(Expr::parse("x^x", s).value_at(p) == doctest::Approx(4));
  CHECK(Expr::parse("3*-x", s).value_at(p) == doctest::Approx(-6));
  CHECK(Expr::parse("1.5e-1*x", s).value_at(p) == doctest::Approx(0.3));
}

TEST_CASE("errors") {
  Scope s;
  s.coords = {"x"};
  try {
    Expr::parse("x + * 2", s);
    FAIL("no throw");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
  try {
    Expr::parse("x + q", s);
    FAIL("no throw");
  } catch (const UndeclaredIdentifier& e) {
    CHECK(e.name() == "q");
  }
  CHECK_THROWS_AS(Expr::parse("(x", s), ParseError);
  CHECK_THROWS_AS(Expr::parse("zeta", s), UndeclaredIdentifier);
  std::vector<double> p{0};
  try {
    Expr::parse("1 + log(x)", s).value_at(p);
    FAIL("no throw");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("log(x)") != std::string::npos);
  }
}

TEST_CASE("printer round trip is a fixed point") {
  Scope s = plane();
  s.params = {{"c", 0.25}};
  for (const char* src : {"zeta^2 + i", "-x^2 - -y", "(x - y) - (x - y)", "x/(y*x)", "2^3^2", "(2^3)^2",
                          "-(-x)", "abs2(z)", "re(1/(x + conj(zeta)*c))", "x^-1.5e-07", "a-b*c/d"}) {
    try {
      auto e = Expr::parse(src, s);
      auto once = e.str();
      auto twice = Expr::parse(once, s).str();
      CHECK(once == twice);
    } catch (const UndeclaredIdentifier&) {
      // "abs2(z)" and "a-b*c/d" use undeclared names on purpose
    }
  }
}

TEST_CASE("rationalized real part") {
  // re(1/(z + conj(h))) with h = i*c equals z/(z^2 + c^2)
  Scope s;
  s.coords = {"x", "y", "z"};
  s.complex_pair = std::pair{0, 1};
  s.params = {{"c", 0.7}};
  auto e = Expr::parse("re(1/(z + conj(i*c)))", s);
  oracle::Rng rng(2);
  for (int k = 0; k < 5; ++k) {
    std::vector<double> p{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-2, 2)};
    CHECK(e.value_at(p) == doctest::Approx(p[2] / (p[2] * p[2] + 0.49)));
  }
}

TEST_CASE("holomorphy residual") {
  std::vector<double> p{0.2, -0.3};
  CHECK(holomorphy_residual(Expr::parse("zeta^2 + i", plane()), p) < 1e-12);
  CHECK(holomorphy_residual(Expr::parse("conj(zeta)", plane()), p) == doctest::Approx(2.0));
  CHECK(holomorphy_residual(Expr::parse("exp(zeta)", plane()), p) < 1e-12);
}

TEST_CASE("order consistency") {
  auto e = Expr::parse("exp(x*y)/(2 + sin(x))", plane());
  std::vector<double> p{0.3, -0.4};
  auto hi = e.eval_at(p, 4), lo = e.eval_at(p, 3);
  CHECK(max_abs(truncate(hi, 3) - lo) < 1e-12);
}
