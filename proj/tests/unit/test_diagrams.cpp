#include "wpgap/diagrams.hpp"

#include <doctest.h>

#include <set>

using namespace wpgap;

TEST_CASE("figure-eight in a pair of pants") {
  auto d = figureEightPants();
  d.validate();
  CHECK(d.connected());
  auto w = reconstructLoop(d);
  CHECK(w.size() == 2);
  CHECK((fillingSignature(d) == Signature{0, 3}));
  CHECK(isGeneralizedEight(d));
  auto p = simplePortionsReport(d);
  CHECK_FALSE(p.doubleFilling);
  for (const auto& po : p.portions) CHECK_FALSE(po.shielded);
}

TEST_CASE("a bar with both ends on one curve fills a one-holed torus") {
  auto d = torusDiagram();
  CHECK(reconstructComponents(d).size() == 2);
  CHECK((fillingSignature(d) == Signature{1, 1}));
  CHECK(isGeneralizedEight(d));
}

TEST_CASE("a disk face breaks the generalized-eight property and shields its portions") {
  Diagram d{2, {1, 1}, {{0, 0, 1, 0}}, {1, 0}};
  CHECK_FALSE(isGeneralizedEight(d));
  auto p = simplePortionsReport(d);
  bool anyShielded = false;
  for (const auto& po : p.portions) anyShielded = anyShielded || po.shielded;
  CHECK(anyShielded);
}

TEST_CASE("each token appears once in the reconstructed walk") {
  for (int r = 1; r <= 2; ++r)
    for (const auto& t : enumerateDiagrams(r).types) {
      std::set<std::pair<int, int>> seen;
      size_t count = 0;
      for (const auto& c : reconstructComponents(t.diagram))
        for (const auto& tok : c) {
          seen.insert({tok.bar, tok.eps});
          ++count;
        }
      CHECK(count == 2 * static_cast<size_t>(r));
      CHECK(seen.size() == count);
    }
}

TEST_CASE("r = 1 enumeration gives exactly the pants and the one-holed torus") {
  std::set<std::string> sigs, loops;
  for (const auto& t : enumerateDiagrams(1).types) {
    sigs.insert(toString(t.fillingSignature));
    if (t.components == 1) loops.insert(toString(t.fillingSignature));
  }
  CHECK(sigs == std::set<std::string>{toString(Signature{0, 3}), toString(Signature{1, 1})});
  // A single loop with one bar is the figure-eight, which fills a pair of pants.
  CHECK(loops == std::set<std::string>{toString(Signature{0, 3})});
}

TEST_CASE("Euler count 2g-2+n = r for enumerated diagrams") {
  for (int r = 1; r <= 3; ++r)
    for (const auto& t : enumerateDiagrams(r).types) CHECK(t.fillingSignature.chi() == r);
}

TEST_CASE("generalized eights are never double-filling") {
  for (int r = 1; r <= 2; ++r)
    for (const auto& t : enumerateDiagrams(r).types)
      if (t.components == 1 && isGeneralizedEight(t.diagram)) CHECK_FALSE(simplePortionsReport(t.diagram).doubleFilling);
}

TEST_CASE("canonical keys are stable under enumeration order") {
  auto a = enumerateDiagrams(2), b = enumerateDiagrams(2, true);
  REQUIRE(a.types.size() == b.types.size());
  for (size_t i = 0; i < a.types.size(); ++i) CHECK(a.types[i].canonicalKey == b.types[i].canonicalKey);
}

TEST_CASE("json round trip") {
  auto d = figureEightPants();
  CHECK(Diagram::fromJson(d.toJson()).toJson() == d.toJson());
}

TEST_CASE("holonomy expansion of every single-loop diagram with r <= 2") {
  for (int r = 1; r <= 2; ++r)
    for (const auto& t : enumerateDiagrams(r).types) {
      if (t.components != 1) continue;
      auto ex = expandHalfTrace(holonomyWord(t.diagram), r, 2 * r);
      CHECK(ex.wellFormed);
      CHECK(ex.hasZeroAlphaAtAllPlus());
      CHECK(ex.hasAllOnesAlpha());
    }
}
