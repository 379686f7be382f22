#pragma once

#include "wpgap/exact.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wpgap {

enum class Exec { Serial, Parallel };

// Univariate polynomial with rational coefficients, index = power.
using RatPoly = std::vector<Rational>;

// Finite sum  sum_i p_i(l) e^{mu_i l}  with rational rates.
class ExpPolyFunction {
public:
  ExpPolyFunction() = default;
  static ExpPolyFunction term(const Rational& rate, const RatPoly& p);
  static ExpPolyFunction monomial(const Rational& coeff, int power, const Rational& rate);
  static ExpPolyFunction constant(const Rational& c) { return monomial(c, 0, 0); }

  const std::map<Rational, RatPoly>& terms() const { return terms_; }
  RatPoly component(const Rational& rate) const;
  bool isZero() const { return terms_.empty(); }
  int degreeAt(const Rational& rate) const;  // -1 if absent
  int maxDegree() const;

  ExpPolyFunction operator+(const ExpPolyFunction& o) const;
  ExpPolyFunction operator-(const ExpPolyFunction& o) const;
  ExpPolyFunction operator*(const ExpPolyFunction& o) const;
  ExpPolyFunction operator*(const Rational& q) const;
  bool operator==(const ExpPolyFunction& o) const { return terms_ == o.terms_; }

  ExpPolyFunction derivative() const;
  double operator()(double x) const;
  std::string str() const;

private:
  std::map<Rational, RatPoly> terms_;
  void add(const Rational& rate, const RatPoly& p);
};

ExpPolyFunction opP(const ExpPolyFunction& f);
ExpPolyFunction opL(const ExpPolyFunction& f);
ExpPolyFunction opD(const ExpPolyFunction& f);
ExpPolyFunction opLPower(const ExpPolyFunction& f, int m);
ExpPolyFunction convolveExact(const ExpPolyFunction& f, const ExpPolyFunction& g);

// Sampled functions on a uniform grid starting at 0.
struct Sampled {
  double step = 0;
  std::vector<double> values;
  double at(double x) const;
};
Sampled sample(const std::function<double(double)>& f, double xmax, int n);
Sampled opP(const Sampled& f);
Sampled opL(const Sampled& f);
Sampled opD(const Sampled& f);
// Step-doubling check of the trapezoid primitive: max difference between n and 2n samples.
double primitiveStepDoublingError(const std::function<double(double)>& f, double xmax, int n);
// Primitive on [0, xmax], doubling the trapezoid grid until the relative step-doubling
// error is below tol. Throws if the tail keeps the error above tol at maxN samples.
Sampled opPNumeric(const std::function<double(double)>& f, double xmax, double tol = 1e-9, int maxN = 1 << 22);

struct FRDecomposition {
  bool accepted = false;
  int m = 0;
  double c = 0;
  RatPoly principal;              // p(l) in p(l) e^l
  ExpPolyFunction remainder;      // f - p(l) e^l
  double fittedC = 0;
  double fittedC1 = 0;            // smallest c1 valid for all n <= horizon
  std::vector<double> c1ByN;      // ratio int_0^n |L^m f| / ((n+1)^c e^{n/2})
  double trendSlope = 0;          // LSQ slope of log c1(n) over the last half
  double growthExponent = 0;      // on rejection: estimated excess exponential rate
  std::string reason;
  double norm() const;            // max |coefficient of p|
  std::string toJson() const;
};
FRDecomposition frMembership(const ExpPolyFunction& f, int m, double c, double horizon = 60);

// int_0^n |g| for integer n = 1..N, by adaptive Gauss-Kronrod on unit intervals.
std::vector<double> integratedAbs(const std::function<double(double)>& g, int N);

// R_w^c norm of a remainder: sup_n int_0^n |r| / ((n+1)^c e^{n/2}).
double remainderNorm(const std::function<double(double)>& r, double c, int horizon);

// (h, phi)-convolution. Factor i is either a function of x_i or a Dirac delta tying x_i to x_j.
struct ConvFactor {
  std::function<double(double)> f;
  int tiedTo = -1;
};
struct HPhiSpec {
  std::vector<ConvFactor> fs;
  std::function<double(const std::vector<double>&)> h;
  std::function<double(const std::vector<double>&)> phi;
  std::vector<double> lo, hi;  // quadrature box
  // Optional derivative of h in the last free variable; finite differences otherwise.
  std::function<double(const std::vector<double>&)> dhLast;
  double relTol = 1e-10;
};
struct HPhiResult {
  std::vector<double> grid, density;
  double errorEstimate = 0;
};
// Requires h increasing in every free variable on the box (the E-class setting).
// Grid points are independent; Exec::Parallel spreads them over OpenMP threads.
HPhiResult hPhiConvolve(const HPhiSpec& spec, const std::vector<double>& grid, Exec exec = Exec::Serial);
// Total mass int phi * prod f over the box, for the conservation check.
double hPhiMass(const HPhiSpec& spec);

}  // namespace wpgap
