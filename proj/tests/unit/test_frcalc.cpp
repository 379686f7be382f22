#include "wpgap/expr.hpp"
#include "wpgap/frcalc.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace wpgap;

namespace {

const Rational half(1, 2);
ExpPolyFunction mono(Rational c, int p, Rational rate) { return ExpPolyFunction::monomial(c, p, rate); }
const ExpPolyFunction one = ExpPolyFunction::constant(1);
const ExpPolyFunction ell = mono(1, 1, 0);
const ExpPolyFunction e1 = mono(1, 0, 1);
const ExpPolyFunction sinhHalf = mono(half, 0, half) - mono(half, 0, -half);

}  // namespace

TEST_CASE("primitive and L on constants") {
  CHECK(opP(one) == ell);
  CHECK(opL(one) == one - ell);
}

TEST_CASE("D kills sinh(l/2)") { CHECK(opD(sinhHalf).isZero()); }

TEST_CASE("L^2 [l e^l] = l through L[l e^l] = e^l - 1") {
  CHECK(opL(ell * e1) == e1 - one);
  CHECK(opL(e1 - one) == ell);
  CHECK(opLPower(ell * e1, 2) == ell);
}

TEST_CASE("L on e^{a l}") {
  Rational a(3, 2);
  CHECK(opL(mono(1, 0, a)) == mono(1 - 1 / a, 0, a) + ExpPolyFunction::constant(1 / a));
}

TEST_CASE("exact convolutions") {
  CHECK(convolveExact(one, one) == ell);
  CHECK(convolveExact(e1, e1) == ell * e1);
  CHECK(opLPower(convolveExact(e1, e1), 2) == convolveExact(opL(e1), opL(e1)));
}

TEST_CASE("derivative inverts the primitive and P f (0) = 0") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> c(-5, 5), r(-2, 2), p(0, 3);
  for (int i = 0; i < 20; ++i) {
    ExpPolyFunction f;
    for (int k = 0; k < 3; ++k) f = f + mono(c(rng), p(rng), Rational(r(rng), 2));
    CHECK(opP(f).derivative() == f);
    CHECK(opP(f)(0) == doctest::Approx(0).epsilon(1e-12));
  }
}

TEST_CASE("D lowers the top degree on e^{l/2} and e^{-l/2} terms") {
  auto f = mono(1, 3, half) + mono(2, 2, -half);
  auto d = opD(f);
  CHECK(d.degreeAt(half) < 3);
  CHECK(d.degreeAt(-half) < 2);
}

TEST_CASE("membership decisions") {
  auto e = frMembership(e1, 1, 1);
  CHECK(e.accepted);
  REQUIRE(e.principal.size() == 1);
  CHECK(e.principal[0] == 1);
  CHECK(frMembership(sinhHalf * sinhHalf, 1, 1).accepted);
  for (int m = 1; m <= 5; ++m) CHECK_FALSE(frMembership(mono(1, 0, Rational(3, 2)), m, 1).accepted);
  CHECK_FALSE(frMembership(ell * e1, 1, 1).accepted);
  CHECK(frMembership(ell * e1, 2, 1).accepted);
}

TEST_CASE("membership is monotone in m") {
  for (const auto& f : {e1, sinhHalf * sinhHalf, ell * e1})
    for (int m = 1; m <= 3; ++m)
      if (frMembership(f, m, 1).accepted) CHECK(frMembership(f, m + 1, 1).accepted);
}

TEST_CASE("finite-horizon rule rejects a c1 hump past n = 20") {
  // L^4 inflates the e^{l/4} coefficients to ~1.2e5; c1(n) peaks near n = 24.
  auto f = e1 + mono(3, 2, Rational(1, 4));
  CHECK(frMembership(f, 3, 1).accepted);
  auto d = frMembership(f, 4, 1);
  CHECK_FALSE(d.accepted);
  CHECK(d.trendSlope < 0);
  CHECK(d.reason.find("increases beyond n=20") != std::string::npos);
}

TEST_CASE("remainder norm satisfies the triangle inequality") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int i = 0; i < 5; ++i) {
    double a = U(rng), b = U(rng), c = U(rng);
    auto f = [=](double x) { return a * std::exp(0.3 * x) + b; };
    auto g = [=](double x) { return c * std::exp(-x) * x; };
    double nf = remainderNorm(f, 1, 20), ng = remainderNorm(g, 1, 20);
    double nfg = remainderNorm([&](double x) { return f(x) + g(x); }, 1, 20);
    CHECK(nfg <= nf + ng + 1e-10 * (nf + ng));
  }
}

TEST_CASE("sampled operators agree with the exact ones") {
  auto s = sample([](double x) { return std::exp(x); }, 4, 4001);
  auto l = opL(s);
  CHECK(l.at(2) == doctest::Approx(1).epsilon(1e-5));
  auto p = opPNumeric([](double x) { return std::cosh(x); }, 3, 1e-9);
  CHECK(p.at(3) == doctest::Approx(std::sinh(3.0)).epsilon(1e-8));
}

TEST_CASE("h-phi convolution of x1 + x2 against e^x is l e^l") {
  HPhiSpec s;
  s.fs = {{[](double x) { return std::exp(x); }}, {[](double x) { return std::exp(x); }}};
  s.h = [](const std::vector<double>& x) { return x[0] + x[1]; };
  s.dhLast = [](const std::vector<double>&) { return 1.0; };
  s.phi = [](const std::vector<double>&) { return 1.0; };
  s.lo = {0, 0};
  s.hi = {10, 10};
  std::vector<double> grid{1, 2.5, 4};
  for (Exec ex : {Exec::Serial, Exec::Parallel}) {
    auto r = hPhiConvolve(s, grid, ex);
    for (size_t i = 0; i < grid.size(); ++i)
      CHECK(r.density[i] == doctest::Approx(grid[i] * std::exp(grid[i])).epsilon(1e-9));
  }
}

TEST_CASE("a Dirac factor drops a dimension and keeps the mass") {
  HPhiSpec s;
  s.fs = {{[](double x) { return std::exp(-x); }}, {nullptr, 0}};
  s.h = [](const std::vector<double>& x) { return x[0] + x[1]; };
  s.phi = [](const std::vector<double>&) { return 1.0; };
  s.lo = {0, 0};
  s.hi = {8, 8};
  std::vector<double> grid;
  for (int i = 0; i <= 320; ++i) grid.push_back(16.0 * i / 320);
  auto r = hPhiConvolve(s, grid);
  double mass = 0;
  for (size_t i = 1; i < grid.size(); ++i) mass += 0.5 * (r.density[i] + r.density[i - 1]) * (grid[i] - grid[i - 1]);
  CHECK(mass == doctest::Approx(hPhiMass(s)).epsilon(1e-3));
  CHECK(hPhiMass(s) == doctest::Approx(1 - std::exp(-8.0)).epsilon(1e-8));
}

TEST_CASE("expression parser") {
  CHECK(parseExpPoly("sinh(l/2)^2") == sinhHalf * sinhHalf);
  CHECK(parseExpPoly("l*e^l") == ell * e1);
  CHECK(parseExpPoly("exp(3l/2)") == mono(1, 0, Rational(3, 2)));
  CHECK(parseExpPoly("2 - 0.5 l") == ExpPolyFunction::constant(2) - mono(half, 1, 0));
  CHECK(parseExpPoly("cosh(l) - sinh(l)") == mono(1, 0, -1));
  CHECK_THROWS_AS(parseExpPoly("exp(l+1)"), std::invalid_argument);
  CHECK_THROWS_AS(parseExpPoly("l^l"), std::invalid_argument);
  CHECK_THROWS_AS(parseExpPoly("foo(l)"), std::invalid_argument);
  CHECK_THROWS_AS(parseExpPoly("1/l"), std::invalid_argument);
}
