#include "wpgap/exact.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace wpgap;

namespace {

PiPolynomial v11Like() {
  PiPolynomial p(1);
  p.addTerm({2}, PiCoeff(1));
  p.addTerm({0}, PiCoeff(4, 2));
  return p;
}

PiPolynomial randomPoly(std::mt19937_64& rng, int nvars) {
  std::uniform_int_distribution<int> deg(0, 2), num(-9, 9), den(1, 7), pie(0, 2);
  PiPolynomial p(nvars);
  for (int t = 0; t < 4; ++t) {
    Exponent e(nvars);
    for (auto& x : e) x = 2 * deg(rng);
    p.addTerm(e, PiCoeff(Rational(num(rng), den(rng)), 2 * pie(rng)));
  }
  return p;
}

}  // namespace

TEST_CASE("addition and product of monomials") {
  auto p = v11Like();
  CHECK(p + PiPolynomial(1) == p);
  auto a = PiPolynomial::monomial({2, 0}, PiCoeff(1));
  auto b = PiPolynomial::monomial({0, 2}, PiCoeff(1));
  CHECK(a * b == PiPolynomial::monomial({2, 2}, PiCoeff(1)));
}

TEST_CASE("scaling by 24 undoes /24") {
  auto p = v11Like().scale(PiCoeff(Rational(1, 24)));
  CHECK(p.scale(PiCoeff(24)) == v11Like());
}

TEST_CASE("evaluation at 0 and 2 pi") {
  const double pi = std::numbers::pi;
  CHECK(v11Like().evalDouble({0}) == doctest::Approx(4 * pi * pi).epsilon(1e-15));
  CHECK(v11Like().evalDouble({2 * pi}) == doctest::Approx(8 * pi * pi).epsilon(1e-15));
  CHECK(PiPolynomial::constant(2, PiCoeff(1)).evalDouble({3, 4}) == 1);
}

TEST_CASE("odd exponents and variable mismatch are rejected") {
  PiPolynomial p(1);
  CHECK_THROWS(p.addTerm({1}, PiCoeff(1)));
  CHECK_THROWS(PiPolynomial(2) + PiPolynomial(3));
}

TEST_CASE("ring axioms on random polynomials") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    auto p = randomPoly(rng, 2), q = randomPoly(rng, 2), r = randomPoly(rng, 2);
    CHECK((p * q) * r == p * (q * r));
    CHECK(p * (q + r) == p * q + p * r);
    CHECK(p + q == q + p);
  }
}

TEST_CASE("evaluation is multiplicative to 1e-25") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 10; ++i) {
    auto p = randomPoly(rng, 2), q = randomPoly(rng, 2);
    std::vector<Real50> x{Real50("1.3"), Real50("0.7")};
    Real50 lhs = polyEval(polyMul(p, q), x), rhs = polyEval(p, x) * polyEval(q, x);
    CHECK(static_cast<double>(abs(lhs - rhs)) <= 1e-25 * std::max(1.0, static_cast<double>(abs(rhs))));
  }
}

TEST_CASE("serialization round trip") {
  std::mt19937_64 rng(13);
  auto p = randomPoly(rng, 3);
  CHECK(PiPolynomial::fromJson(p.toJson()) == p);
  CHECK(PiPolynomial::fromJson(p.toJson()).toJson() == p.toJson());
}

TEST_CASE("Bernoulli numbers and zeta(2k)/pi^2k") {
  CHECK(bernoulli(2) == Rational(1, 6));
  CHECK(bernoulli(4) == Rational(-1, 30));
  CHECK(zetaEvenOverPi(1) == Rational(1, 6));
  CHECK(zetaEvenOverPi(2) == Rational(1, 90));
  CHECK(zetaEvenOverPi(0) == Rational(-1, 2));
}

TEST_CASE("PiCoeff arithmetic") {
  PiCoeff a(Rational(1, 2), 2), b(3);
  CHECK((a * b) == PiCoeff(Rational(3, 2), 2));
  CHECK((a - a).isZero());
  CHECK(a.evalDouble() == doctest::Approx(std::numbers::pi * std::numbers::pi / 2).epsilon(1e-15));
}
