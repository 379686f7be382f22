#pragma once

#include "wpgap/frcalc.hpp"
#include "wpgap/volumes.hpp"

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace wpgap {

// Volume as it enters integration formulas: the one-holed torus carries the extra 1/2
// from its elliptic involution, so V_{1,1} is read as (x^2 + 4 pi^2) / 48 here.
double integrationVolume(VolumeTable& t, Signature s, const std::vector<double>& x);

struct SimpleConventions {
  double orientationFactor = 1.0;  // oriented geodesics; the default is the value the audit pins
  double separatingHalf = 0.5;     // symmetric separating splits
};

// V_g^s(l) / V_g.
double simpleDensity(int g, double l, VolumeTable& t, const SimpleConventions& conv = {});

struct AsympvolAudit {
  std::vector<int> gs;
  double bestC = 0;
  std::vector<double> scaledError;  // per g: max over l of g |ratio - (4/l) sinh^2(l/2)| / ((1+l)^c e^l)
  double slope = 0;                 // of log scaledError vs log g
  bool pass = false;
};
AsympvolAudit asympvolAudit(VolumeTable& t, const SimpleConventions& conv, int gmin = 6, int gmax = 12,
                            double lmin = 1, double lmax = 6, int points = 50);
// Tries orientation factors 1/2, 1, 2 and returns the one whose audit passes (0 if none).
double pinOrientationFactor(VolumeTable& t);

struct PantsValue {
  double ac = 0;
  // Index k: the coefficient w of x_{i2} delta(x_{i1} - x_{i2}) for i3 = k, one per ordered (i1, i2).
  std::array<double, 3> delta{};
};
// Pair-of-pants density; accepts negative x for the AC part (odd extension).
PantsValue phiPairOfPants(int g, const std::array<double, 3>& x, VolumeTable& t);

// Cached evaluation of the AC part at fixed genus, safe to call from several threads.
class PantsKernel {
public:
  PantsKernel(int g, VolumeTable& t);
  double ac(double x1, double x2, double x3) const;
  double deltaWeight(double x) const;  // x V_{g-1,1}(x) / V_g
  int genus() const { return g_; }

private:
  int g_;
  double vg_;
  const VolumeEvaluator* v3_;
  std::vector<const VolumeEvaluator*> v1_;  // index genus, (1,1) halved at call time
  std::vector<const VolumeEvaluator*> v2_;
  double one(int gi, double x) const;
};

struct Psi1Audit {
  struct Point {
    std::array<double, 3> x;
    std::vector<double> gPhi;           // g * AC part, per g
    double target = 0;                  // sinh(x1/2) sinh(x2/2) sinh(x3/2)
    double slope = 0;                   // log |g Phi - target| vs log g
    double limit = 0;                   // Richardson limit of g Phi
    std::array<double, 3> deltaSlope{}; // same for the delta weights
    std::array<double, 3> deltaLimit{};
  };
  std::vector<int> gs;
  std::vector<Point> points;
  double worstSlopeDeviation = 0;  // max |slope + 1| over AC and delta series
  double acLimitRatio = 0;         // mean Richardson limit / target
  double deltaLimitRatio = 0;
  bool pass = false;
};
Psi1Audit psi1Audit(VolumeTable& t, int gmin = 6, int gmax = 16, int npoints = 20, unsigned seed = 1);

enum class Route { Direct, ChangeOfVariables };
enum class EightKernel { Genus, Leading };

struct EightDensity {
  std::vector<double> grid, ac, delta;
  double errorEstimate = 0;
};
// Density of the figure-eight length against Phi_g^P (AC part; delta part separately), divided by m.
EightDensity figureEightDensity(int g, Route route, const std::vector<double>& grid, VolumeTable& t,
                                double m = 1, EightKernel kernel = EightKernel::Genus,
                                Exec exec = Exec::Parallel);

struct ExpansionFit {
  int K = 0;
  std::vector<int> gs;
  std::vector<double> grid;
  std::vector<std::vector<double>> coefficients;  // [k][l index], k = 0..K+1
  std::vector<double> residualSlope;              // per l: truncation residual after k <= K vs g
  double condition = 0;
  bool pass = false;
  std::string toJson() const;
};
// Least squares fit of y_g(l) = sum_{k=0}^{K+1} f_k(l) / g^k.
ExpansionFit fitExpansion(const std::map<int, std::vector<double>>& samples, const std::vector<double>& grid, int K,
                          double maxCondition = 1e12);

std::string densityCsv(const std::vector<double>& grid, const std::map<std::string, std::vector<double>>& cols);

}  // namespace wpgap
