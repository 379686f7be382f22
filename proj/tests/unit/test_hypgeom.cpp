#include "wpgap/hypgeom.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace wpgap;

TEST_CASE("figure-eight length at vanishing boundary") {
  CHECK(lengthFigureEight(1e-9, 1e-9, 1e-9) == doctest::Approx(2 * std::acosh(3.0)).epsilon(1e-12));
}

TEST_CASE("orthogeodesic with equal boundaries and x3 -> 0") {
  double x = 1.4;
  double c = std::cosh(x / 2), s = std::sinh(x / 2);
  CHECK(std::cosh(orthoT(x, x, 1e-9)) == doctest::Approx((c * c + 1) / (s * s)).epsilon(1e-12));
}

TEST_CASE("length through T matches the direct formula") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(0.1, 6);
  for (int i = 0; i < 200; ++i) {
    double x1 = U(rng), x2 = U(rng), x3 = U(rng);
    double T = orthoT(x1, x2, x3);
    CHECK(lengthViaT(x1, x2, T) == doctest::Approx(lengthFigureEight(x1, x2, x3)).epsilon(1e-12));
    auto back = x3FromT(x1, x2, T);
    REQUIRE(back);
    CHECK(*back == doctest::Approx(x3).epsilon(1e-8));
  }
}

TEST_CASE("Jacobian closed form against finite differences") {
  double T = orthoT(1, 1, 1);
  auto r = jacobianAudit(1, 1, T);
  CHECK_FALSE(r.degenerate);
  CHECK(r.relError <= 1e-8);
  // T = 1 with x1 = x2 = 1 has no x3: flagged instead of computed.
  CHECK(jacobianAudit(1, 1, 1).degenerate);
}

TEST_CASE("holonomy of the figure-eight word") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> U(0.1, 5);
  for (int i = 0; i < 200; ++i) {
    double x1 = U(rng), x2 = U(rng), x3 = U(rng);
    auto l = holonomyLength(figureEightWord(x1, x2, orthoT(x1, x2, x3)));
    REQUIRE(l);
    CHECK(*l == doctest::Approx(lengthFigureEight(x1, x2, x3)).epsilon(1e-12));
  }
}

TEST_CASE("elliptic words have no length") {
  // Half-trace about 0.52 for this product.
  HolonomyWord w{{HolonomyToken::Glide, -2}, {HolonomyToken::Turn, -2}, {HolonomyToken::Glide, 1}, {HolonomyToken::Turn, 1}};
  CHECK(std::abs(halfTrace(w)) < 1);
  CHECK_FALSE(holonomyLength(w).has_value());
}

TEST_CASE("h_beta with only the plus sign vector") {
  auto b = BetaFamily::plusOnly(2);
  CHECK(b.valid());
  double v = hBeta(b, std::vector<double>{3.0, 4.0});
  CHECK(std::isfinite(v));
  BetaFamily bad;
  bad.n = 2;
  bad.coeff[0] = 2;
  CHECK_FALSE(bad.valid());
}

TEST_CASE("E-class audit: the sum itself and a counterexample") {
  GridSpec grid;
  auto zero = eClassAudit([](const std::vector<Real100>& x) { return x[0] + x[1]; }, 2, 1.0, grid);
  CHECK(zero.allBounded());
  CHECK(zero.maxNorm() == doctest::Approx(0).epsilon(1e-12));
  auto bad = eClassAudit([](const std::vector<Real100>& x) { return x[0] + exp(x[0]); }, 1, 1.0, grid);
  CHECK_FALSE(bad.allBounded());
}

TEST_CASE("E-class audit on a random h_beta, n = 2") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(0, 3);
  BetaFamily b;
  b.n = 2;
  for (unsigned s = 0; s < 4; ++s) b.coeff[s] = s ? U(rng) : 1;
  auto rep = eClassAudit([&](const std::vector<Real100>& x) { return hBeta(b, x); }, 2, 1.0, GridSpec{});
  CHECK(rep.allBounded());
  CHECK(rep.skipped == 0);
}

TEST_CASE("symbolic half-trace of the figure-eight word") {
  std::vector<SymbolicToken> w{{false, 0, 1}, {true, 0, 1}, {false, 1, 1}, {true, 0, -1}};
  auto ex = expandHalfTrace(w, 1, 2);
  CHECK(ex.wellFormed);
  CHECK(ex.hasZeroAlphaAtAllPlus());
  CHECK(ex.hasAllOnesAlpha());
  double x1 = 1.3, x2 = 0.7, T = orthoT(1.3, 0.7, 2.1);
  CHECK(ex.eval({T}, {x1, x2}) == doctest::Approx(std::abs(halfTrace(figureEightWord(x1, x2, T)))).epsilon(1e-12));
}
