#include "wpgap/trace.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace wpgap {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
using GL = boost::math::quadrature::gauss<double, 30>;

double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-14) {
  return GK::integrate(f, a, b, 15, tol);
}

// Composite Gauss-Legendre. Everything integrated here is smooth and, near the support
// edges, flat to all orders; adaptive refinement only wastes work chasing relative
// tolerances where the integrand is zero.
double panels(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0;
  for (int p = 0; p < n; ++p) s += GL::integrate(f, a + p * h, a + (p + 1) * h);
  return s;
}

double unnormalizedPsi(double x) {
  double u = 1 - 4 * x * x;
  return u > 0 ? std::exp(-1 / u) : 0.0;
}

double psiScale() {
  static const double c = 1 / integrate(unnormalizedPsi, -0.5, 0.5);
  return c;
}

void checkStrip(std::complex<double> r) {
  if (r.real() != 0 && r.imag() != 0) throw std::domain_error("r must be real or purely imaginary");
  if (std::abs(r.imag()) > 0.5) throw std::domain_error("r must lie in R or i[-1/2, 1/2]");
}

// cos(r l) for real r, cosh(y l) for r = iy: the even part of e^{-irl}.
double evenKernel(std::complex<double> r, double l) {
  return r.imag() != 0 ? std::cosh(r.imag() * l) : std::cos(r.real() * l);
}

}  // namespace

TestFunction::TestFunction(double L) : L_(L) {
  if (!(L > 0)) throw std::invalid_argument("L must be positive");
}

double TestFunction::psi(double x) { return psiScale() * unnormalizedPsi(x); }

double TestFunction::psiDerivative(int k, double x) {
  if (k < 0 || k > kMaxM) throw std::invalid_argument("derivative order out of range");
  double u0 = 1 - 4 * x * x;
  // exp(-1/u) and all its derivatives are below double range well before u reaches 1e-3.
  if (u0 < 1e-3) return 0.0;
  std::array<double, kMaxM + 1> u{}, w{}, e{};
  u[0] = u0;
  if (kMaxM >= 1) u[1] = -8 * x;
  if (kMaxM >= 2) u[2] = -4;
  // w = 1/u, v = -w, e = exp(v), all as Taylor coefficients at x.
  w[0] = 1 / u0;
  for (int j = 1; j <= k; ++j) {
    double s = 0;
    for (int i = 1; i <= j; ++i) s += u[i] * w[j - i];
    w[j] = -s / u0;
  }
  e[0] = std::exp(-w[0]);
  for (int j = 1; j <= k; ++j) {
    double s = 0;
    for (int i = 1; i <= j; ++i) s += i * (-w[i]) * e[j - i];
    e[j] = s / j;
  }
  double fact = 1;
  for (int i = 2; i <= k; ++i) fact *= i;
  return psiScale() * fact * e[k];
}

double TestFunction::convolvedDerivative(int k, double t) {
  double a = std::max(-0.5, t - 0.5), b = std::min(0.5, t + 0.5);
  if (a >= b) return 0.0;
  // Composite 30-point Gauss-Legendre: the integrand is flat to all orders at both ends, so
  // fixed panels converge to rounding level far faster than adaptive refinement.
  return panels([&](double x) { return psiDerivative(k, x) * psiDerivative(k, t - x); }, a, b, k <= 1 ? 16 : 32);
}

double TestFunction::DmHL(int m, double l) const {
  if (m < 0 || m > kMaxM) throw std::invalid_argument("m out of range for the smoothness of psi");
  if (m == 0) return HL(l);
  double s = 0, binom = 1;
  for (int k = 0; k <= m; ++k) {
    if (k > 0) binom = binom * (m - k + 1) / k;
    double term = binom * std::pow(0.25, m - k) * std::pow(L_, -2 * k) * convolvedDerivative(k, l / L_);
    s += k % 2 ? -term : term;
  }
  return s;
}

double TestFunction::psiHat(std::complex<double> r) {
  checkStrip(r / std::max(1.0, std::abs(r.imag()) * 2));  // only the shape (real or imaginary) matters here
  // Enough panels to resolve the oscillation of cos(r x) on [0, 1/2].
  int n = 8 + static_cast<int>(std::abs(r.real()) / 8);
  return 2 * panels([&](double x) { return psi(x) * evenKernel(r, x); }, 0, 0.5, n);
}

double TestFunction::fourier(std::complex<double> r) const {
  checkStrip(r);
  double p = psiHat(r * L_);
  return L_ * p * p;
}

double TestFunction::fourierByQuadrature(std::complex<double> r) const {
  checkStrip(r);
  int n = 32 + static_cast<int>(std::abs(r.real()) * L_ / 4);
  return 2 * panels([&](double l) { return HL(l) * evenKernel(r, l); }, 0, L_, n);
}

double TestFunction::fourierOfDm(int m, std::complex<double> r) const {
  checkStrip(r);
  int n = 32 + static_cast<int>(std::abs(r.real()) * L_ / 4);
  return 2 * panels([&](double l) { return DmHL(m, l) * evenKernel(r, l); }, 0, L_, n);
}

TopologicalTerm topologicalTerm(const TestFunction& tf, int g) {
  if (g < 2) throw std::invalid_argument("g must be at least 2");
  TopologicalTerm t;
  // Integrand is even in r; H_L^ decays faster than any power, so integrate by blocks until
  // a block adds nothing at double precision.
  auto f = [&](double r) { return tf.fourier(r) * std::tanh(M_PI * r) * r; };
  double block = 4 / tf.L(), a = 0, total = 0;
  for (int i = 0; i < 400; ++i) {
    double piece = panels(f, a, a + block, 4);
    total += piece;
    a += block;
    if (std::abs(piece) <= 1e-16 * std::abs(total) && i > 2) {
      t.cutoff = a;
      t.value = 2 * (g - 1) * total;
      return t;
    }
  }
  throw std::runtime_error("topological term: tail did not converge");
}

TopologicalScaling topologicalScaling(const std::vector<double>& Ls, int g, double universalC) {
  TopologicalScaling s;
  s.Ls = Ls;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  s.boundHolds = true;
  for (double L : Ls) {
    TestFunction tf(L);
    double v = topologicalTerm(tf, g).value;
    s.values.push_back(v);
    double x = std::log(L), y = std::log(v);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    double supR = 0;
    for (int i = 0; i <= 400; ++i) {
      double r = 40.0 / L * i / 400;
      supR = std::max(supR, std::abs(r * tf.fourier(r)));
    }
    double cf = universalC * tf.H0() + supR;
    s.boundConstant = std::max(s.boundConstant, cf);
    if (!(v <= cf * L * L * g)) s.boundHolds = false;
  }
  double n = static_cast<double>(Ls.size());
  s.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return s;
}

CancellationReport cancellationDemo(const TestFunction& tf, int m) {
  if (m < 1 || m > TestFunction::kMaxM) throw std::invalid_argument("m must lie in [1, 6]");
  CancellationReport r;
  r.L = tf.L();
  r.m = m;
  const double L = tf.L();
  double c = panels([&](double l) { return tf.DmHL(m, l) * std::sinh(l / 2); }, 0, L, 64);
  double u = panels([&](double l) { return tf.HL(l) * std::cosh(l / 2); }, 0, L, 64);
  r.cancelled = 2 * c;
  r.uncancelled = 2 * u;
  r.minusH0 = -tf.H0();
  // D kills sinh(l/2), so integrating by parts leaves -(D^{m-1} H_L)(0).
  r.reference = m == 1 ? r.minusH0 : -tf.DmHL(m - 1, 0);
  r.deviation = std::abs(r.cancelled - r.reference);
  r.growthThreshold = std::exp(0.49 * L);
  return r;
}

std::string CancellationReport::toJson() const {
  nlohmann::ordered_json j;
  j["L"] = L;
  j["m"] = m;
  j["cancelled"] = cancelled;
  j["minusH0"] = minusH0;
  j["reference"] = reference;
  j["deviation"] = deviation;
  j["uncancelled"] = uncancelled;
  j["growthThreshold"] = growthThreshold;
  j["note"] = "identities among trace-formula terms only; no spectrum is computed";
  return j.dump();
}

int signChanges(const TestFunction& tf, int m, int samples) {
  int changes = 0;
  double prev = 0;
  for (int i = 0; i <= samples; ++i) {
    double v = tf.DmHL(m, tf.L() * i / samples);
    if (v != 0 && prev != 0 && (v < 0) != (prev < 0)) ++changes;
    if (std::abs(v) > 1e-14) prev = v;
  }
  return changes;
}

CountingBound countingBound(int chi, double L, const std::function<double(double)>& F, int samples) {
  if (chi <= 0 || L < 0) throw std::invalid_argument("chi must be positive and L non-negative");
  CountingBound b;
  b.countBound = 205.0 * chi * std::exp(L);
  double sup = 0;
  for (int i = 0; i < samples; ++i) {
    double l = samples > 1 ? -L + 2 * L * i / (samples - 1) : 0;
    sup = std::max(sup, std::abs(F(l) * std::exp(l)));
  }
  b.sumBound = 560.0 * chi * L * sup;
  return b;
}

bool ParameterChoice::selfAudit() const {
  return std::all_of(inequalities.begin(), inequalities.end(), [](const Inequality& i) { return i.holds; });
}

std::string ParameterChoice::toJson() const {
  nlohmann::ordered_json j;
  j["alpha"] = alpha;
  j["eps"] = eps;
  j["K"] = K;
  j["A"] = A;
  j["chiPlus"] = chiPlus;
  j["chiPlusPrime"] = chiPlusPrime;
  j["Q"] = Q;
  j["chiPlusDoublePrime"] = chiPlusDoublePrime;
  j["kappaWindow"] = {0.0, kappaUpper};
  j["kappa"] = kappa;
  j["feasible"] = feasible;
  j["selfAudit"] = selfAudit();
  j["inequalities"] = nlohmann::ordered_json::array();
  for (auto& i : inequalities)
    j["inequalities"].push_back({{"text", i.text}, {"lhs", i.lhs}, {"rhs", i.rhs}, {"holds", i.holds}});
  j["notes"] = notes;
  return j.dump();
}

ParameterChoice selectParameters(double alpha, double eps, int chiPP, IntSequence U, IntSequence V) {
  if (!(alpha > 0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in (0, 1/2)");
  if (!(eps > 0 && eps < 0.25 - alpha * alpha)) throw std::invalid_argument("eps must lie in (0, 1/4 - alpha^2)");
  if (!U) U = [](long n) { return n; };
  if (!V) V = [](long n) { return n; };
  ParameterChoice p;
  p.alpha = alpha;
  p.eps = eps;
  while (!(1.0 / (2 * (p.K + 2)) < alpha)) ++p.K;
  p.A = 2 * (p.K + 2);
  p.chiPlus = 3 * p.A;
  p.chiPlusPrime = 2 * p.A + 4;
  p.Q = 2 * p.A + 5 + 6 * p.chiPlusPrime;
  p.chiPlusDoublePrime = chiPP;
  for (long n = 1; n < std::max<long>(chiPP, p.chiPlusPrime); ++n)
    if (U(n + 1) < U(n) || V(n + 1) < V(n)) throw std::invalid_argument("U and V must be non-decreasing");

  const double cp = p.chiPlusPrime, cpp = chiPP, vc = static_cast<double>(V(p.chiPlusPrime));
  const double k1 = 1 / (2 * vc + 12 * cp);
  const double k2 = (alpha * p.A - 1) / (10 * cp * cpp + 6 * cp + 2 * vc);
  p.kappaUpper = std::min({2.0 / 3, 2 * std::asinh(1.0), k1, k2});
  p.feasible = p.kappaUpper > 0;
  p.kappa = p.feasible ? p.kappaUpper / 2 : 0;
  const double k = p.kappa;

  auto ineq = [&](std::string text, double lhs, double rhs, bool strict = true) {
    p.inequalities.push_back({std::move(text), lhs, rhs, strict ? lhs < rhs : lhs <= rhs});
  };
  auto eq = [&](std::string text, double lhs, double rhs) { p.inequalities.push_back({std::move(text), lhs, rhs, lhs == rhs}); };
  ineq("1/(2(K+2)) < alpha", 1.0 / (2 * (p.K + 2)), alpha);
  if (p.K > 0) ineq("alpha <= 1/(2(K+1))  (K is the smallest)", alpha, 1.0 / (2 * (p.K + 1)), false);
  ineq("0 < eps", 0, eps);
  ineq("eps < 1/4 - alpha^2", eps, 0.25 - alpha * alpha);
  eq("A = 2(K+2)", p.A, 2 * (p.K + 2));
  eq("chi+ = 3A", p.chiPlus, 3 * p.A);
  eq("chi+' = 2A+4", p.chiPlusPrime, 2 * p.A + 4);
  eq("Q = 2A+5+6chi+'", p.Q, 2 * p.A + 5 + 6 * p.chiPlusPrime);
  ineq("0 < kappa", 0, k);
  ineq("kappa < 2/3", k, 2.0 / 3);
  ineq("kappa < 2 argsh 1", k, 2 * std::asinh(1.0));
  ineq("2 kappa V(chi+') + 12 chi+' kappa < 1", 2 * k * vc + 12 * cp * k, 1);
  ineq("10 chi+' chi+'' kappa + 6 chi+' kappa + 2 kappa V(chi+') < alpha A - 1",
       10 * cp * cpp * k + 6 * cp * k + 2 * k * vc, alpha * p.A - 1);
  p.notes.push_back("U(chi+') = " + std::to_string(U(p.chiPlusPrime)) + ", V(chi+') = " +
                    std::to_string(V(p.chiPlusPrime)) + "; Moebius weights are audited against U(chi) e^{omega V(chi)}");
  p.notes.push_back("chi+'' has no closed form and is taken as an input");
  p.notes.push_back("alpha and K are linked by 1/(2(K+2)) < alpha, so K = 0 corresponds to alpha > 1/4");
  if (!p.feasible) p.notes.push_back("empty kappa window: alpha A - 1 <= 0 or the supplied V is too large");
  return p;
}

}  // namespace wpgap
