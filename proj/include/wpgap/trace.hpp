#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace wpgap {

// H = psi * psi with psi(x) = c exp(-1/(1-4x^2)) on [-1/2, 1/2], c fixed by int psi = 1,
// so H >= 0, supp H = [-1, 1], H^(0) = 1 and H^ = (psi^)^2 >= 0 on R and on i[-1/2, 1/2].
class TestFunction {
public:
  static constexpr int kMaxM = 6;

  explicit TestFunction(double L = 1);
  double L() const { return L_; }

  static double psi(double x);
  // psi^(k)(x) for k <= kMaxM, from Taylor jets of exp(-1/u).
  static double psiDerivative(int k, double x);
  // psi^(k) * psi^(k) at t, which equals H^(2k)(t).
  static double convolvedDerivative(int k, double t);

  double H(double t) const { return convolvedDerivative(0, t); }
  double HL(double l) const { return H(l / L_); }
  double H0() const { return H(0); }
  // D^m H_L with D = 1/4 - d^2/dl^2.
  double DmHL(int m, double l) const;

  // psi^(r), for r real or purely imaginary.
  static double psiHat(std::complex<double> r);
  // H_L^(r) = L (psi^(L r))^2; r must be real or in i[-1/2, 1/2].
  double fourier(std::complex<double> r) const;
  // Direct quadrature of int H_L(l) e^{-irl} dl, for cross-checks.
  double fourierByQuadrature(std::complex<double> r) const;
  // Quadrature transform of D^m H_L.
  double fourierOfDm(int m, std::complex<double> r) const;

private:
  double L_;
};

struct TopologicalTerm {
  double value = 0;
  double cutoff = 0;  // r beyond which the tail was dropped
};
TopologicalTerm topologicalTerm(const TestFunction& tf, int g);

struct TopologicalScaling {
  std::vector<double> Ls, values;
  double exponent = 0;  // fitted exponent of value vs L
  double boundConstant = 0;  // C_F = c sup|H_L| + sup |r H_L^(r)|, with c = 1
  bool boundHolds = false;   // value <= C_F L^2 g at every L
};
TopologicalScaling topologicalScaling(const std::vector<double>& Ls, int g, double universalC = 1);

struct CancellationReport {
  double L = 0;
  int m = 1;
  double cancelled = 0;     // 2 int_0^inf D^m H_L(l) sinh(l/2) dl
  double minusH0 = 0;       // -H(0)
  double reference = 0;     // -(D^{m-1} H_L)(0), equal to -H(0) for m = 1
  double deviation = 0;     // |cancelled - reference|
  double uncancelled = 0;   // 2 int_0^inf H_L(l) cosh(l/2) dl
  double growthThreshold = 0;  // e^{0.49 L}
  std::string toJson() const;
};
CancellationReport cancellationDemo(const TestFunction& tf, int m = 1);

// Number of sign changes of D^m H_L on a uniform sample of [0, L].
int signChanges(const TestFunction& tf, int m, int samples = 2000);

struct CountingBound {
  double countBound = 0;
  double sumBound = 0;
};
// F must be supported in [-L, L]; its sup is estimated on a fine sample.
CountingBound countingBound(int chi, double L, const std::function<double(double)>& F, int samples = 20001);

using IntSequence = std::function<long(long)>;

struct Inequality {
  std::string text;
  double lhs = 0, rhs = 0;
  bool holds = false;
};

struct ParameterChoice {
  double alpha = 0, eps = 0;
  int K = 0, A = 0, chiPlus = 0, chiPlusPrime = 0, Q = 0, chiPlusDoublePrime = 0;
  double kappaUpper = 0;  // supremum of the admissible window (0, kappaUpper)
  double kappa = 0;       // midpoint choice
  bool feasible = false;
  std::vector<Inequality> inequalities;
  std::vector<std::string> notes;
  bool selfAudit() const;
  std::string toJson() const;
};
// chi'' has no closed form; it is an input. U and V default to n -> n.
ParameterChoice selectParameters(double alpha, double eps, int chiPlusDoublePrime = 100, IntSequence U = nullptr,
                                 IntSequence V = nullptr);

}  // namespace wpgap
