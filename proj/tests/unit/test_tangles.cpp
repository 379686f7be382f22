#include "wpgap/tangles.hpp"

#include <doctest.h>

#include <cmath>

using namespace wpgap;

namespace {

CSurface circle(double l) { return CSurface{{Circle{l}}}; }
CSurface surf(int g, int n, std::vector<double> b) { return CSurface{{Surface2D{{g, n}, std::move(b)}}}; }

const auto unitU = [](int) { return 1.0; };
const auto linearV = [](int c) { return static_cast<double>(c); };

}  // namespace

TEST_CASE("tangle predicate") {
  TangleParams p{0.5, 2};
  CHECK(isTangle(circle(0.1), p));
  CHECK_FALSE(isTangle(circle(0.6), p));
  CHECK(isTangle(surf(0, 3, {1, 1, 1}), p));
  CHECK(isTangle(surf(1, 1, {1.5}), p));
  CHECK_FALSE(isTangle(surf(0, 3, {1, 1, 2.5}), p));
  CHECK_FALSE(isTangle(surf(1, 2, {0.1, 0.1}), p));
  CHECK_THROWS(isTangle(CSurface{{Circle{0.1}, Circle{0.2}}}, p));
}

TEST_CASE("tangle predicate is monotone in the parameters") {
  std::vector<CSurface> zs = {circle(0.3), circle(0.45), surf(0, 3, {1, 1.8, 0.2}), surf(1, 1, {1.9})};
  for (const auto& z : zs)
    for (double k : {0.2, 0.4})
      for (double w : {1.0, 1.85})
        if (isTangle(z, {k, w})) CHECK(isTangle(z, {k + 0.1, w + 0.5}));
}

TEST_CASE("parameter invariants") {
  CHECK_NOTHROW(TangleParams{0.5, 2}.validate());
  CHECK_THROWS(TangleParams{2, 1}.validate());
  CHECK_THROWS(TangleParams{1.9, 3}.validate());
}

TEST_CASE("mu on circles") {
  CHECK(muCircles(1, {0.1}, 0.5) == Rational(1, 2));
  CHECK(muCircles(2, {0.1, 0.2}, 0.5) == Rational(-1, 8));
  CHECK(muCircles(3, {0.1, 0.2, 0.3}, 0.5) == Rational(1, 48));
  CHECK(muCircles(2, {0.1, 0.9}, 0.5) == 0);
  for (int j = 1; j <= 6; ++j) {
    Rational m = muCircles(j, std::vector<double>(j, 0.1), 0.5);
    Rational scaled = m * Rational(mpz_class(1) << j) * Rational(factorial(j));
    CHECK(scaled == (j % 2 ? 1 : -1));
  }
}

TEST_CASE("composite mu") {
  TangleParams p{0.5, 2};
  auto one = [](const std::vector<Surface2D>&) { return std::optional<Rational>(1); };
  auto z = CSurface::fromJson(R"([{"kind":"circle","len":0.1},{"kind":"surf","g":0,"n":3,"boundary":[1,1,1]}])");
  auto r = muComposite(z, one, p, unitU, linearV);
  REQUIRE(r.value);
  CHECK(*r.value == Rational(-1, 2));
  CHECK(r.boundsHold());

  auto pure = muComposite(CSurface{{Circle{0.1}, Circle{0.2}}}, one, p, unitU, linearV);
  CHECK(*pure.value == Rational(-1, 8));

  auto none = [](const std::vector<Surface2D>&) { return std::optional<Rational>(); };
  auto hole = muComposite(z, none, p, unitU, linearV);
  CHECK_FALSE(hole.value);
  REQUIRE(hole.holes.size() == 1);
  CHECK(hole.holes[0] == toString(Signature{0, 3}));

  auto big = [](const std::vector<Surface2D>&) { return std::optional<Rational>(100); };
  CHECK_FALSE(muComposite(z, big, p, unitU, linearV).boundsHold());
}

TEST_CASE("c-surface validation and json") {
  auto z = CSurface::fromJson(R"([{"kind":"circle","len":0.3},{"kind":"surf","g":1,"n":1,"boundary":[2]}])");
  CHECK(CSurface::fromJson(z.toJson()).toJson() == z.toJson());
  CHECK(z.absChi() == 1);
  CHECK_THROWS(CSurface::fromJson(R"([{"kind":"surf","g":1,"n":1,"boundary":[2]},{"kind":"circle","len":0.3}])"));
  CHECK_THROWS(CSurface::fromJson(R"([{"kind":"surf","g":0,"n":2,"boundary":[1,1]}])"));
  CHECK_THROWS(CSurface::fromJson(R"([{"kind":"surf","g":0,"n":3,"boundary":[1,1]}])"));
  CHECK_THROWS(CSurface::fromJson(R"([{"kind":"circle","len":-1}])"));
}

TEST_CASE("inclusion-exclusion with ordered families") {
  auto r = inclusionExclusionAudit(12);
  CHECK(r.correctedAll());
  CHECK(r.rows[0].corrected == 1);
  CHECK(r.rows[2].corrected == 0);
  CHECK(r.rows[1].printed == 2);
  CHECK_FALSE(r.rows[1].printedHolds);
  CHECK(r.printedFailures().size() == 12);
  CHECK_THROWS(inclusionExclusionAudit(13));
}

TEST_CASE("inversion identity on circles") {
  for (int j = 1; j <= 6; ++j) {
    auto r = moebiusIdentityCircles(j, 0.5);
    CHECK(r.exact);
    CHECK(r.total == 1);
  }
  CHECK(moebiusIdentityCircles(1, 0.5).tuples == 2);
  // A long circle contributes no terms; the short ones still sum to 1.
  auto r = moebiusIdentityCircles({0.1, 0.9, 0.2}, 0.5);
  CHECK(r.total == 1);
  CHECK(r.tuples == moebiusIdentityCircles(2, 0.5).tuples);
}
