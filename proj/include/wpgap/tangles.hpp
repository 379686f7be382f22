#pragma once

#include "wpgap/exact.hpp"
#include "wpgap/volumes.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace wpgap {

struct Circle {
  double length = 0;
};
struct Surface2D {
  Signature sig;
  std::vector<double> boundary;
  int absChi() const { return 2 * sig.g - 2 + sig.n; }
};
using Component = std::variant<Circle, Surface2D>;

// Circles sort before every bordered surface; surfaces follow the Signature order.
struct CSurface {
  std::vector<Component> components;

  static CSurface fromJson(const std::string& s);
  std::string toJson() const;
  // Throws invalid_argument on a disk, sphere, annulus or torus component, a
  // non-positive length, a boundary count mismatch or an unsorted sequence.
  void validate() const;
  int absChi() const;
  std::vector<double> circleLengths() const;
  std::vector<Surface2D> surfaces() const;
};

struct TangleParams {
  double kappa = 0;
  double omega = 0;
  void validate() const;
};

bool isTangle(const CSurface& z, const TangleParams& p);

Rational muCircles(int j, const std::vector<double>& lengths, double kappa);

using Mu2d = std::function<std::optional<Rational>(const std::vector<Surface2D>&)>;
using GrowthFn = std::function<double(int)>;

struct BoundCheck {
  int absChi = 0;
  double value = 0;
  double bound = 0;
  bool holds = false;
};
struct MuReport {
  std::optional<Rational> value;
  std::vector<std::string> holes;  // signatures of the 2d part lacking a mu2d value
  std::vector<BoundCheck> bounds;  // surface part, then the whole c-surface
  bool boundsHold() const;
  std::string toJson() const;
};
MuReport muComposite(const CSurface& z, const Mu2d& mu2d, const TangleParams& p, const GrowthFn& U,
                     const GrowthFn& V);

struct InclusionExclusionRow {
  int N = 0;
  Rational corrected;  // sum_j (-1)^j N_j / j!
  Rational printed;    // 1 - sum_{j>=1} (-1)^j N_j / j!
  bool correctedHolds = false;
  bool printedHolds = false;
};
struct InclusionExclusionReport {
  std::vector<InclusionExclusionRow> rows;
  bool correctedAll() const;
  std::vector<int> printedFailures() const;
  std::string toJson() const;
};
InclusionExclusionReport inclusionExclusionAudit(int nMax);

struct MoebiusReport {
  int j = 0;
  long long tuples = 0;  // ordered oriented tuples with non-zero weight
  Rational total;
  bool exact = false;  // total == 1
  std::string toJson() const;
};
// Sum of mu over sub-c-surfaces of a circle-only c-surface, enumerated as ordered
// oriented tuples of distinct circles.
MoebiusReport moebiusIdentityCircles(const std::vector<double>& lengths, double kappa);
MoebiusReport moebiusIdentityCircles(int j, double kappa);

}  // namespace wpgap
