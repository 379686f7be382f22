#include "wpgap/densities.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <sstream>
#include <stdexcept>

namespace wpgap {

namespace {

double lsqSlope(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i], sxx += x[i] * x[i], sxy += x[i] * y[i];
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Slope of log |y_g| vs log g, ignoring exact zeros.
double logLogSlope(const std::vector<int>& gs, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (size_t i = 0; i < gs.size(); ++i)
    if (y[i] != 0) lx.push_back(std::log(gs[i])), ly.push_back(std::log(std::abs(y[i])));
  if (lx.size() < 2) return 0;
  return lsqSlope(lx, ly);
}

// Limit of a + b/g from the last two samples.
double richardson(const std::vector<int>& gs, const std::vector<double>& y) {
  size_t n = gs.size();
  double g1 = gs[n - 2], g2 = gs[n - 1];
  return (g2 * y[n - 1] - g1 * y[n - 2]) / (g2 - g1);
}

double sh(double x) { return std::sinh(x / 2); }

}  // namespace

double integrationVolume(VolumeTable& t, Signature s, const std::vector<double>& x) {
  double v = t.evaluator(s)(x);
  return s == Signature{1, 1} ? v / 2 : v;
}

double simpleDensity(int g, double l, VolumeTable& t, const SimpleConventions& conv) {
  if (g < 2) throw std::invalid_argument("simple density needs g >= 2");
  double nonsep = integrationVolume(t, {g - 1, 2}, {l, l});
  double sep = 0;
  for (int i = 1; i <= g - 1; ++i) sep += integrationVolume(t, {i, 1}, {l}) * integrationVolume(t, {g - i, 1}, {l});
  return conv.orientationFactor * l * (nonsep + conv.separatingHalf * sep) / t.closedVolumeDouble(g);
}

AsympvolAudit asympvolAudit(VolumeTable& t, const SimpleConventions& conv, int gmin, int gmax, double lmin,
                            double lmax, int points) {
  AsympvolAudit a;
  std::vector<double> ls(points);
  for (int i = 0; i < points; ++i) ls[i] = lmin + (lmax - lmin) * i / (points - 1);
  std::vector<std::vector<double>> dev;  // g * |ratio - leading|
  for (int g = gmin; g <= gmax; ++g) {
    a.gs.push_back(g);
    std::vector<double> row;
    for (double l : ls) row.push_back(g * std::abs(simpleDensity(g, l, t, conv) - 4 / l * sh(l) * sh(l)));
    dev.push_back(row);
  }
  double bestAbs = 1e300;
  for (int ci = 0; ci <= 20; ++ci) {
    double c = ci * 0.5;
    std::vector<double> e;
    for (auto& row : dev) {
      double m = 0;
      for (size_t i = 0; i < ls.size(); ++i) m = std::max(m, row[i] / (std::pow(1 + ls[i], c) * std::exp(ls[i])));
      e.push_back(m);
    }
    double s = logLogSlope(a.gs, e);
    if (std::abs(s) < bestAbs) bestAbs = std::abs(s), a.bestC = c, a.slope = s, a.scaledError = e;
  }
  a.pass = std::abs(a.slope) <= 0.2;
  return a;
}

double pinOrientationFactor(VolumeTable& t) {
  for (double f : {0.5, 1.0, 2.0}) {
    SimpleConventions c;
    c.orientationFactor = f;
    if (asympvolAudit(t, c).pass) return f;
  }
  return 0;
}

PantsKernel::PantsKernel(int g, VolumeTable& t) : g_(g) {
  if (g < 3) throw std::invalid_argument("pair-of-pants density needs g >= 3");
  vg_ = t.closedVolumeDouble(g);
  v3_ = &t.evaluator({g - 2, 3});
  v1_.assign(g + 1, nullptr);
  v2_.assign(g + 1, nullptr);
  for (int i = 1; i <= g - 1; ++i) v1_[i] = &t.evaluator({i, 1});
  for (int i = 1; i <= g - 2; ++i) v2_[i] = &t.evaluator({i, 2});
}

double PantsKernel::one(int gi, double x) const {
  double v = (*v1_[gi])(x);
  return gi == 1 ? v / 2 : v;
}

double PantsKernel::ac(double x1, double x2, double x3) const {
  const double x[3] = {x1, x2, x3};
  double s = (*v3_)(x1, x2, x3);
  for (int g1 = 1; g1 <= g_ - 2; ++g1)
    for (int g2 = 1; g1 + g2 <= g_ - 1; ++g2) s += one(g1, x1) * one(g2, x2) * one(g_ - g1 - g2, x3);
  // Ordered (i1, i2, i3): each unordered pair appears twice.
  for (int k = 0; k < 3; ++k) {
    double a = x[(k + 1) % 3], b = x[(k + 2) % 3];
    for (int i = 1; i <= g_ - 2; ++i) s += 2 * (*v2_[i])(a, b) * one(g_ - i - 1, x[k]);
  }
  return x1 * x2 * x3 * s / vg_;
}

double PantsKernel::deltaWeight(double x) const { return x * one(g_ - 1, x) / vg_; }

PantsValue phiPairOfPants(int g, const std::array<double, 3>& x, VolumeTable& t) {
  PantsKernel k(g, t);
  PantsValue v;
  v.ac = k.ac(x[0], x[1], x[2]);
  for (int i = 0; i < 3; ++i) v.delta[i] = k.deltaWeight(x[i]);
  return v;
}

Psi1Audit psi1Audit(VolumeTable& t, int gmin, int gmax, int npoints, unsigned seed) {
  Psi1Audit a;
  for (int g = gmin; g <= gmax; ++g) a.gs.push_back(g);
  std::vector<PantsKernel> ks;
  for (int g : a.gs) ks.emplace_back(g, t);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double acRatio = 0, dRatio = 0;
  for (int p = 0; p < npoints; ++p) {
    Psi1Audit::Point pt;
    for (auto& xi : pt.x) xi = 4 * (1 - u(rng));  // (0, 4]
    pt.target = sh(pt.x[0]) * sh(pt.x[1]) * sh(pt.x[2]);
    std::vector<double> diff;
    std::array<std::vector<double>, 3> dw, ddiff;
    for (size_t i = 0; i < a.gs.size(); ++i) {
      double gp = a.gs[i] * ks[i].ac(pt.x[0], pt.x[1], pt.x[2]);
      pt.gPhi.push_back(gp);
      diff.push_back(gp - pt.target);
      for (int k = 0; k < 3; ++k) {
        double w = a.gs[i] * ks[i].deltaWeight(pt.x[k]);
        dw[k].push_back(w);
        ddiff[k].push_back(w - sh(pt.x[k]));
      }
    }
    pt.slope = logLogSlope(a.gs, diff);
    pt.limit = richardson(a.gs, pt.gPhi);
    acRatio += pt.limit / pt.target;
    a.worstSlopeDeviation = std::max(a.worstSlopeDeviation, std::abs(pt.slope + 1));
    for (int k = 0; k < 3; ++k) {
      pt.deltaSlope[k] = logLogSlope(a.gs, ddiff[k]);
      pt.deltaLimit[k] = richardson(a.gs, dw[k]);
      dRatio += pt.deltaLimit[k] / sh(pt.x[k]);
      a.worstSlopeDeviation = std::max(a.worstSlopeDeviation, std::abs(pt.deltaSlope[k] + 1));
    }
    a.points.push_back(pt);
  }
  a.acLimitRatio = acRatio / npoints;
  a.deltaLimitRatio = dRatio / (3 * npoints);
  a.pass = a.worstSlopeDeviation <= 0.15;
  return a;
}

// ---- figure-eight

namespace {

double lengthEight(double x1, double x2, double x3) {
  return 2 * std::acosh(2 * std::cosh(x1 / 2) * std::cosh(x2 / 2) + std::cosh(x3 / 2));
}

struct EightKernels {
  std::function<double(double, double, double)> ac;
  std::function<double(double)> delta;
};

EightKernels makeKernels(int g, VolumeTable& t, EightKernel kind) {
  if (kind == EightKernel::Leading)
    return {[](double a, double b, double c) { return sh(a) * sh(b) * sh(c); }, [](double x) { return sh(x); }};
  auto k = std::make_shared<PantsKernel>(g, t);
  return {[k](double a, double b, double c) { return k->ac(a, b, c); },
          [k](double x) { return k->deltaWeight(x); }};
}

// Integration over (T, x1, x2): the Jacobian brings 2 sinh^2(x1/2) sinh^2(x2/2) sinh T, and the
// remaining factor of the kernel is kernel / (sinh sinh sinh). Solving l = l(T) removes dT.
double changeOfVariablesPoint(const EightKernels& k, double l, double tol, double& err) {
  // A different rule from the direct route (21-point here, 31-point there, and closed-form
  // limits instead of bisection) so agreement certifies both quadratures.
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  const double cl = std::cosh(l / 2);
  // x3 > 0 requires cosh(l/2) > 2 C1 C2 + 1.
  const double c1max = (cl - 1) / 2;
  if (c1max <= 1) return 0;
  const double x1max = 2 * std::acosh(c1max);
  double eOuter = 0;
  double v = GK::integrate(
      [&](double x1) {
        double C1 = std::cosh(x1 / 2), S1 = sh(x1);
        double arg = (cl - 1) / (2 * C1);
        if (arg <= 1 || S1 <= 0) return 0.0;
        double x2max = 2 * std::acosh(arg);
        return GK::integrate(
            [&](double x2) {
              double C2 = std::cosh(x2 / 2), S2 = sh(x2);
              if (S2 <= 0) return 0.0;
              // At the solved T, cosh T S1 S2 = cosh(l/2) - C1 C2, so x3(T) has a closed form
              // that avoids the large cosh T when x1 or x2 is small.
              double C3 = cl - 2 * C1 * C2;
              if (!(C3 > 1)) return 0.0;
              double x3 = 2 * std::acosh(C3), S3 = sh(x3);
              if (!(S3 > 0)) return 0.0;
              double den = S1 * S2 * S3;
              if (!(den > 0)) return 0.0;
              double ratio = k.ac(x1, x2, x3) / den;
              // Jacobian 2 S1^2 S2^2 sinh T over dl/dT = 2 sinh T S1 S2 / sinh(l/2); sinh T
              // cancels, which keeps the quotient finite where T is large.
              return S1 * S2 * std::sinh(l / 2) * ratio;
            },
            0.0, x2max, 15, tol);
      },
      0.0, x1max, 15, tol, &eOuter);
  err = eOuter;
  return v;
}

}  // namespace

EightDensity figureEightDensity(int g, Route route, const std::vector<double>& grid, VolumeTable& t, double m,
                                EightKernel kernel, Exec exec) {
  if (m <= 0) throw std::invalid_argument("m must be positive");
  EightKernels k = makeKernels(g, t, kernel);
  EightDensity out;
  out.grid = grid;
  out.ac.assign(grid.size(), 0.0);
  out.delta.assign(grid.size(), 0.0);
  double top = 1;
  for (double l : grid) top = std::max(top, l + 1);
  const double tol = 1e-11;

  if (route == Route::Direct) {
    HPhiSpec s;
    s.fs.resize(3);
    s.h = [](const std::vector<double>& x) { return lengthEight(x[0], x[1], x[2]); };
    s.phi = [&](const std::vector<double>& x) { return k.ac(x[0], x[1], x[2]); };
    s.dhLast = [](const std::vector<double>& x) {
      return sh(x[2]) / std::sinh(lengthEight(x[0], x[1], x[2]) / 2);
    };
    s.lo = {0, 0, 0};
    s.hi = {top, top, top};
    s.relTol = tol;
    auto r = hPhiConvolve(s, grid, exec);
    out.ac = r.density;
    out.errorEstimate = r.errorEstimate;
  } else {
    std::vector<double> errs(grid.size(), 0.0);
    std::vector<std::exception_ptr> fail(grid.size());
    const long n = static_cast<long>(grid.size());
    auto one = [&](long i) {
      try {
        out.ac[i] = changeOfVariablesPoint(k, grid[i], tol, errs[i]);
      } catch (...) {
        fail[i] = std::current_exception();
      }
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
      for (long i = 0; i < n; ++i) one(i);
    } else {
      for (long i = 0; i < n; ++i) one(i);
    }
    for (auto& f : fail)
      if (f) std::rethrow_exception(f);
    for (double e : errs) out.errorEstimate = std::max(out.errorEstimate, e);
  }

  // Delta part: for each i3, x_{i1} = x_{i2}; the two orderings of (i1, i2) coincide.
  for (int i3 = 0; i3 < 3; ++i3) {
    int i1 = (i3 + 1) % 3, i2 = (i3 + 2) % 3;
    if (i1 > i2) std::swap(i1, i2);
    HPhiSpec s;
    s.fs.resize(3);
    s.fs[i2].tiedTo = i1;
    s.h = [](const std::vector<double>& x) { return lengthEight(x[0], x[1], x[2]); };
    s.phi = [&, i1, i3](const std::vector<double>& x) { return 2 * x[i1] * k.delta(x[i3]); };
    s.lo = {0, 0, 0};
    s.hi = {top, top, top};
    s.relTol = tol;
    auto r = hPhiConvolve(s, grid, exec);
    for (size_t i = 0; i < grid.size(); ++i) out.delta[i] += r.density[i];
  }
  for (auto& v : out.ac) v /= m;
  for (auto& v : out.delta) v /= m;
  return out;
}

// ---- expansion fits

ExpansionFit fitExpansion(const std::map<int, std::vector<double>>& samples, const std::vector<double>& grid, int K,
                          double maxCondition) {
  if (K < 0) throw std::invalid_argument("K must be non-negative");
  if (static_cast<int>(samples.size()) < K + 3) throw std::invalid_argument("need at least K+3 genera");
  ExpansionFit f;
  f.K = K;
  f.grid = grid;
  const int cols = K + 2, rows = static_cast<int>(samples.size());
  Eigen::MatrixXd A(rows, cols);
  int r = 0;
  for (auto& [g, v] : samples) {
    if (v.size() != grid.size()) throw std::invalid_argument("samples must share the l-grid");
    f.gs.push_back(g);
    for (int k = 0; k < cols; ++k) A(r, k) = std::pow(1.0 / g, k);
    ++r;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  auto sv = svd.singularValues();
  f.condition = sv(0) / sv(sv.size() - 1);
  if (!(f.condition <= maxCondition)) {
    std::ostringstream os;
    os << "ill-conditioned fit in 1/g: condition " << f.condition;
    throw std::domain_error(os.str());
  }
  f.coefficients.assign(cols, std::vector<double>(grid.size()));
  std::vector<double> slopes;
  for (size_t j = 0; j < grid.size(); ++j) {
    Eigen::VectorXd y(rows);
    r = 0;
    for (auto& [g, v] : samples) y(r++) = v[j];
    Eigen::VectorXd c = svd.solve(y);
    for (int k = 0; k < cols; ++k) f.coefficients[k][j] = c(k);
    std::vector<double> res;
    r = 0;
    for (auto& [g, v] : samples) {
      double s = 0;
      for (int k = 0; k <= K; ++k) s += c(k) * std::pow(1.0 / g, k);
      res.push_back(v[j] - s);
    }
    double sl = logLogSlope(f.gs, res);
    f.residualSlope.push_back(sl);
    bool allZero = std::all_of(res.begin(), res.end(), [](double x) { return std::abs(x) < 1e-300; });
    if (!allZero) slopes.push_back(sl);
  }
  if (slopes.empty()) {
    f.pass = true;
  } else {
    std::nth_element(slopes.begin(), slopes.begin() + slopes.size() / 2, slopes.end());
    f.pass = std::abs(slopes[slopes.size() / 2] + (K + 1)) <= 0.5;
  }
  return f;
}

std::string ExpansionFit::toJson() const {
  nlohmann::ordered_json j;
  j["K"] = K;
  j["gRange"] = {gs.front(), gs.back()};
  double worst = 0;
  for (double s : residualSlope) worst = std::max(worst, std::abs(s + (K + 1)));
  j["residualSlope"] = residualSlope;
  j["worstSlopeDeviation"] = worst;
  j["condition"] = condition;
  j["pass"] = pass;
  return j.dump();
}

std::string densityCsv(const std::vector<double>& grid, const std::map<std::string, std::vector<double>>& cols) {
  std::ostringstream os;
  os.precision(17);
  os << "l";
  for (auto& [name, v] : cols) os << "," << name;
  os << "\n";
  for (size_t i = 0; i < grid.size(); ++i) {
    os << grid[i];
    for (auto& [name, v] : cols) os << "," << v.at(i);
    os << "\n";
  }
  return os.str();
}

}  // namespace wpgap
