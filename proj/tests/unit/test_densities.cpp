#include "wpgap/densities.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

using namespace wpgap;

namespace {

VolumeTable& table() {
  static VolumeTable t(std::filesystem::temp_directory_path() / "wpgap-unit-densities");
  return t;
}

}  // namespace

TEST_CASE("the one-holed torus enters integrals with the extra 1/2") {
  const double pi = std::numbers::pi, x = 2.2;
  CHECK(integrationVolume(table(), {1, 1}, {x}) == doctest::Approx((x * x + 4 * pi * pi) / 48).epsilon(1e-14));
  CHECK(integrationVolume(table(), {0, 3}, {1, 2, 3}) == 1);
}

TEST_CASE("simple density vanishes linearly at 0") {
  double a = simpleDensity(4, 1e-3, table()), b = simpleDensity(4, 2e-3, table());
  CHECK(a > 0);
  CHECK(b / a == doctest::Approx(2).epsilon(1e-3));
}

TEST_CASE("simple density approaches (4/l) sinh^2(l/2) as g grows") {
  auto rel = [](int g, double l) {
    double target = 4 / l * std::sinh(l / 2) * std::sinh(l / 2);
    return std::abs(simpleDensity(g, l, table()) / target - 1);
  };
  for (double l : {1.0, 3.0}) CHECK(rel(8, l) < rel(4, l));
}

TEST_CASE("asympvol audit pins the orientation factor to 1") {
  auto a = asympvolAudit(table(), {}, 6, 10, 1, 6, 20);
  CHECK(a.pass);
  CHECK(std::abs(a.slope) <= 0.2);
}

TEST_CASE("pants kernel is symmetric and odd") {
  PantsKernel k(5, table());
  double v = k.ac(0.7, 1.9, 2.6);
  CHECK(k.ac(1.9, 2.6, 0.7) == doctest::Approx(v).epsilon(1e-13));
  CHECK(k.ac(2.6, 0.7, 1.9) == doctest::Approx(v).epsilon(1e-13));
  CHECK(k.ac(-0.7, 1.9, 2.6) == doctest::Approx(-v).epsilon(1e-13));
  auto p = phiPairOfPants(5, {0.7, 1.9, 2.6}, table());
  CHECK(p.ac == doctest::Approx(v).epsilon(1e-13));
  CHECK(p.delta.size() == 3);
}

TEST_CASE("figure-eight density: support and two routes") {
  std::vector<double> grid{2.0, 3.0, 4.0, 6.0, 8.0};
  auto d1 = figureEightDensity(4, Route::Direct, grid, table());
  auto d2 = figureEightDensity(4, Route::ChangeOfVariables, grid, table());
  // The figure-eight is at least 2 acosh 3 long.
  CHECK(d1.ac[0] == 0);
  CHECK(d1.ac[1] == 0);
  for (size_t i = 2; i < grid.size(); ++i) {
    CHECK(d1.ac[i] > 0);
    CHECK(d1.ac[i] == doctest::Approx(d2.ac[i]).epsilon(1e-6));
  }
}

TEST_CASE("serial and parallel figure-eight kernels agree exactly") {
  std::vector<double> grid{4.0, 5.0, 7.0};
  auto s = figureEightDensity(4, Route::Direct, grid, table(), 1, EightKernel::Genus, Exec::Serial);
  auto p = figureEightDensity(4, Route::Direct, grid, table(), 1, EightKernel::Genus, Exec::Parallel);
  CHECK(s.ac == p.ac);
  CHECK(s.delta == p.delta);
}

TEST_CASE("m is a global scale") {
  std::vector<double> grid{5.0};
  auto a = figureEightDensity(4, Route::ChangeOfVariables, grid, table(), 1);
  auto b = figureEightDensity(4, Route::ChangeOfVariables, grid, table(), 2);
  CHECK(b.ac[0] == doctest::Approx(a.ac[0] / 2).epsilon(1e-14));
}

TEST_CASE("expansion fit recovers a synthetic series") {
  std::map<int, std::vector<double>> s;
  for (int g = 6; g <= 14; ++g) {
    double x = 1.0 / g;
    s[g] = {1 + 2 * x + 3 * x * x + 0.5 * x * x * x, -1 + x * x};
  }
  auto f = fitExpansion(s, {0, 1}, 1);
  CHECK(f.pass);
  CHECK(f.coefficients[0][0] == doctest::Approx(1).epsilon(1e-3));
  CHECK(f.coefficients[0][1] == doctest::Approx(-1).epsilon(1e-6));
  CHECK(f.residualSlope[0] == doctest::Approx(-2).epsilon(0.1));
}

TEST_CASE("ill-conditioned fits are rejected") {
  std::map<int, std::vector<double>> s;
  for (int g = 100; g <= 106; ++g) s[g] = {1.0};
  CHECK_THROWS_AS(fitExpansion(s, {0}, 4), std::domain_error);
}

TEST_CASE("density csv layout") {
  auto csv = densityCsv({1, 2}, {{"a", {3, 4}}});
  CHECK(csv == "l,a\n1,3\n2,4\n");
}
