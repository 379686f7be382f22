#pragma once

#include "wpgap/hypgeom.hpp"
#include "wpgap/volumes.hpp"

#include <string>
#include <vector>

namespace wpgap {

// Bar leaving curve fc at attachment point fp from its left, arriving on curve tc at tp on its right.
struct Bar {
  int fc = 0, fp = 0, tc = 0, tp = 0;
  bool operator==(const Bar&) const = default;
};

struct Diagram {
  int N = 0;
  std::vector<int> points;  // attachment points per curve, in the curve's orientation
  std::vector<Bar> bars;
  // Optional: +1 if curve c bounds a disk on its left, -1 on its right, 0 otherwise.
  std::vector<int> diskSide;

  int r() const { return static_cast<int>(bars.size()); }
  void validate() const;
  bool connected() const;
  std::string toJson() const;
  static Diagram fromJson(const std::string& s);
};

// p(j, eps): the bar B_j^eps followed by the arc of beta leaving its terminus.
struct PathToken {
  int bar = 0;
  int eps = 1;
  bool operator==(const PathToken&) const = default;
};
using Walk = std::vector<PathToken>;

std::vector<Walk> reconstructComponents(const Diagram& d);
// Throws std::logic_error if the data closes into more than one component.
Walk reconstructLoop(const Diagram& d);

struct FaceTrace {
  int faceCount = 0;
  std::vector<int> leftFace, rightFace;  // per arc, indexed by arcIndex(c, p)
  std::vector<bool> diskFace;
  std::vector<int> arcOffset;            // arcIndex(c,p) = arcOffset[c] + p
};
FaceTrace traceFaces(const Diagram& d);

// Signature of the regular neighbourhood of beta and the bars; 2g-2+n = r.
Signature fillingSignature(const Diagram& d);
bool isGeneralizedEight(const Diagram& d);

struct Portion {
  PathToken token;
  int curve = 0, position = 0;  // arc of beta the portion runs along
  bool shielded = false;
};
struct PortionsReport {
  std::vector<Portion> portions;
  bool doubleFilling = false;
  // sum x_i <= factor * length(c) + (sum of non-shielded portion lengths, double-filling case)
  std::string comparison;
};
PortionsReport simplePortionsReport(const Diagram& d);

// Holonomy word of a single-loop diagram: turn(eps L_j) then glide(theta_{j,eps}) per token,
// with theta index 2j for eps=+ and 2j+1 for eps=-.
std::vector<SymbolicToken> holonomyWord(const Diagram& d);

std::string canonicalKey(const Diagram& d, bool withOrientationReversal = true);

struct LocalType {
  Signature fillingSignature;
  Diagram diagram;
  std::string canonicalKey;
  int components = 1;
  bool generalizedEight = true;
};
struct Enumeration {
  std::vector<LocalType> types;  // sorted by canonical key
  int countWithoutReversal = 0;  // classes when orientation reversal is not a symmetry
  int rawDiagrams = 0;
};
Enumeration enumerateDiagrams(int r, bool reverseOrder = false);

Diagram figureEightPants();
Diagram torusDiagram();

}  // namespace wpgap
