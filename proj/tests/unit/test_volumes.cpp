#include "wpgap/volumes.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>

using namespace wpgap;
namespace fs = std::filesystem;

namespace {

fs::path freshDir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("wpgap-unit-" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("base volumes") {
  VolumeTable t;
  PiPolynomial v03(3);
  v03.addTerm({0, 0, 0}, PiCoeff(1));
  CHECK(t.computeVolume({0, 3}) == v03);

  PiPolynomial v11(1);
  v11.addTerm({2}, PiCoeff(Rational(1, 24)));
  v11.addTerm({0}, PiCoeff(Rational(1, 6), 2));
  CHECK(t.computeVolume({1, 1}) == v11);

  PiPolynomial v04(4);
  v04.addTerm({0, 0, 0, 0}, PiCoeff(2, 2));
  for (int i = 0; i < 4; ++i) {
    Exponent e(4, 0);
    e[i] = 2;
    v04.addTerm(e, PiCoeff(Rational(1, 2)));
  }
  CHECK(t.computeVolume({0, 4}) == v04);
}

TEST_CASE("closed genus two") { CHECK(VolumeTable().closedVolume(2) == PiCoeff(Rational(43, 2160), 6)); }

TEST_CASE("unstable signatures are rejected") {
  VolumeTable t;
  CHECK_THROWS_AS(t.get({0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(t.get({0, 0}), std::invalid_argument);
}

TEST_CASE("closed volumes are positive and grow for g = 2..7") {
  VolumeTable t;
  for (int g = 2; g <= 7; ++g) {
    CHECK(t.closedVolumeDouble(g) > 0);
    CHECK(t.closedVolumeDouble(g + 1) / t.closedVolumeDouble(g) > 1);
  }
}

TEST_CASE("string and dilaton identities hold up to 2g-2+n = 6") {
  VolumeTable t;
  t.fill(6);
  auto rep = consistencyCheck(t, 6);
  CHECK(rep.records.size() > 10);
  CHECK(rep.allPass());
  bool sawDilaton12 = false;
  for (const auto& r : rep.records)
    if (r.identity == "dilaton" && r.sig == Signature{1, 2}) sawDilaton12 = r.pass;
  CHECK(sawDilaton12);
}

TEST_CASE("empty table gives an empty report") { CHECK(consistencyCheck(*std::make_unique<VolumeTable>(), 6).records.empty()); }

TEST_CASE("a corrupted coefficient is located") {
  VolumeTable t;
  t.fill(5);
  SymmetricVolume v = t.get({1, 3});
  v.setBracket({1, 1, 0}, v.bracket({1, 1, 0}) + 1);
  t.put(v);
  auto rep = consistencyCheck(t, 5);
  CHECK_FALSE(rep.allPass());
  bool located = false;
  for (const auto& r : rep.records)
    if (!r.pass) located = located || r.sig == Signature{1, 3} || r.sig == Signature{1, 4};
  CHECK(located);
}

TEST_CASE("volumes are even with a positive top homogeneous part") {
  VolumeTable t;
  for (Signature s : {Signature{1, 2}, Signature{2, 1}, Signature{0, 5}}) {
    auto p = t.computeVolume(s);
    int top = p.totalDegree();
    for (const auto& [e, c] : p.terms()) {
      for (int k : e) CHECK(k % 2 == 0);
      int deg = 0;
      for (int k : e) deg += k;
      if (deg == top) CHECK(c.at(0) > 0);
    }
  }
}

TEST_CASE("cache round trip is byte identical") {
  auto d1 = freshDir("cache1"), d2 = freshDir("cache2");
  {
    VolumeTable a(d1), b(d2);
    a.fill(5);
    b.fill(5);
  }
  for (const auto& e : fs::directory_iterator(d1)) {
    auto other = d2 / e.path().filename();
    REQUIRE(fs::exists(other));
    std::ifstream x(e.path()), y(other);
    std::string sx((std::istreambuf_iterator<char>(x)), {}), sy((std::istreambuf_iterator<char>(y)), {});
    CHECK(sx == sy);
  }
  VolumeTable reload(d1);
  CHECK(reload.computeVolume({1, 2}) == VolumeTable().computeVolume({1, 2}));
}

TEST_CASE("evaluator agrees with exact evaluation") {
  VolumeTable t;
  const auto& ev = t.evaluator({1, 2});
  double x = 1.3, y = 0.4;
  CHECK(ev(x, y) == doctest::Approx(t.computeVolume({1, 2}).evalDouble({x, y})).epsilon(1e-13));
}
