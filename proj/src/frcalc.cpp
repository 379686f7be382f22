#include "wpgap/frcalc.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <exception>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wpgap {

namespace {

void trim(RatPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

RatPoly addPoly(const RatPoly& a, const RatPoly& b) {
  RatPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

RatPoly mulPoly(const RatPoly& a, const RatPoly& b) {
  if (a.empty() || b.empty()) return {};
  RatPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

Rational factorialQ(int k) {
  mpz_class f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return Rational(f);
}

// Primitive vanishing at 0 of t^k e^{mu t}.
ExpPolyFunction primitiveMonomial(int k, const Rational& mu) {
  if (mu == 0) return ExpPolyFunction::monomial(Rational(1, k + 1), k + 1, 0);
  RatPoly p(k + 1);
  Rational kf = factorialQ(k);
  Rational muPow = mu;
  for (int i = 0; i <= k; ++i) {
    Rational c = kf / factorialQ(k - i) / muPow;
    if (i % 2) c = -c;
    p[k - i] = c;
    muPow *= mu;
  }
  // F(0) = (-1)^k k! / mu^{k+1} sits in p[0].
  Rational f0 = p[0];
  return ExpPolyFunction::term(mu, p) - ExpPolyFunction::constant(f0);
}

double toD(const Rational& q) { return q.get_d(); }

}  // namespace

ExpPolyFunction ExpPolyFunction::term(const Rational& rate, const RatPoly& p) {
  ExpPolyFunction f;
  f.add(rate, p);
  return f;
}

ExpPolyFunction ExpPolyFunction::monomial(const Rational& coeff, int power, const Rational& rate) {
  RatPoly p(power + 1);
  p[power] = coeff;
  return term(rate, p);
}

void ExpPolyFunction::add(const Rational& rateIn, const RatPoly& pIn) {
  // mpq_class(a, b) is not reduced; map keys and equality need canonical form.
  Rational rate = rateIn;
  rate.canonicalize();
  RatPoly p = pIn;
  for (auto& c : p) c.canonicalize();
  auto it = terms_.find(rate);
  RatPoly s = it == terms_.end() ? p : addPoly(it->second, p);
  trim(s);
  if (s.empty()) {
    if (it != terms_.end()) terms_.erase(it);
  } else {
    terms_[rate] = s;
  }
}

RatPoly ExpPolyFunction::component(const Rational& rateIn) const {
  Rational rate = rateIn;
  rate.canonicalize();
  auto it = terms_.find(rate);
  return it == terms_.end() ? RatPoly{} : it->second;
}

int ExpPolyFunction::degreeAt(const Rational& rate) const {
  return static_cast<int>(component(rate).size()) - 1;
}

int ExpPolyFunction::maxDegree() const {
  int d = -1;
  for (auto& [mu, p] : terms_) d = std::max(d, static_cast<int>(p.size()) - 1);
  return d;
}

ExpPolyFunction ExpPolyFunction::operator+(const ExpPolyFunction& o) const {
  ExpPolyFunction r = *this;
  for (auto& [mu, p] : o.terms_) r.add(mu, p);
  return r;
}

ExpPolyFunction ExpPolyFunction::operator*(const Rational& q) const {
  ExpPolyFunction r;
  for (auto& [mu, p] : terms_) r.add(mu, mulPoly(p, {q}));
  return r;
}

ExpPolyFunction ExpPolyFunction::operator-(const ExpPolyFunction& o) const { return *this + o * Rational(-1); }

ExpPolyFunction ExpPolyFunction::operator*(const ExpPolyFunction& o) const {
  ExpPolyFunction r;
  for (auto& [a, p] : terms_)
    for (auto& [b, q] : o.terms_) r.add(a + b, mulPoly(p, q));
  return r;
}

ExpPolyFunction ExpPolyFunction::derivative() const {
  ExpPolyFunction r;
  for (auto& [mu, p] : terms_) {
    RatPoly d(p.size());
    for (size_t i = 0; i < p.size(); ++i) {
      d[i] += mu * p[i];
      if (i > 0) d[i - 1] += Rational(static_cast<long>(i)) * p[i];
    }
    r.add(mu, d);
  }
  return r;
}

double ExpPolyFunction::operator()(double x) const {
  double s = 0;
  for (auto& [mu, p] : terms_) {
    double v = 0;
    for (size_t i = p.size(); i-- > 0;) v = v * x + toD(p[i]);
    s += v * std::exp(toD(mu) * x);
  }
  return s;
}

std::string ExpPolyFunction::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [mu, p] : terms_) {
    for (size_t i = 0; i < p.size(); ++i) {
      if (p[i] == 0) continue;
      if (!first) os << " + ";
      first = false;
      os << "(" << toString(p[i]) << ")";
      if (i == 1) os << "*l";
      if (i > 1) os << "*l^" << i;
      if (mu != 0) os << "*e^(" << toString(mu) << "*l)";
    }
  }
  return os.str();
}

ExpPolyFunction opP(const ExpPolyFunction& f) {
  ExpPolyFunction r;
  for (auto& [mu, p] : f.terms())
    for (size_t k = 0; k < p.size(); ++k)
      if (p[k] != 0) r = r + primitiveMonomial(static_cast<int>(k), mu) * p[k];
  return r;
}

ExpPolyFunction opL(const ExpPolyFunction& f) { return f - opP(f); }

ExpPolyFunction opD(const ExpPolyFunction& f) { return f * Rational(1, 4) - f.derivative().derivative(); }

ExpPolyFunction opLPower(const ExpPolyFunction& f, int m) {
  ExpPolyFunction r = f;
  for (int i = 0; i < m; ++i) r = opL(r);
  return r;
}

ExpPolyFunction convolveExact(const ExpPolyFunction& f, const ExpPolyFunction& g) {
  // t^a e^{mu t} * (x-t)^b e^{nu (x-t)}
  //   = e^{nu x} sum_i C(b,i) (-1)^i x^{b-i} int_0^x t^{a+i} e^{(mu-nu) t} dt
  ExpPolyFunction r;
  for (auto& [mu, p] : f.terms())
    for (auto& [nu, q] : g.terms())
      for (size_t a = 0; a < p.size(); ++a) {
        if (p[a] == 0) continue;
        for (size_t b = 0; b < q.size(); ++b) {
          if (q[b] == 0) continue;
          mpz_class binom = 1;
          for (size_t i = 0; i <= b; ++i) {
            if (i > 0) binom = binom * static_cast<unsigned long>(b - i + 1) / static_cast<unsigned long>(i);
            Rational c = p[a] * q[b] * Rational(binom);
            if (i % 2) c = -c;
            auto prim = primitiveMonomial(static_cast<int>(a + i), mu - nu);
            r = r + prim * ExpPolyFunction::monomial(c, static_cast<int>(b - i), nu);
          }
        }
      }
  return r;
}

// ---- sampled path

double Sampled::at(double x) const {
  if (values.empty()) throw std::out_of_range("empty sampled function");
  double t = x / step;
  if (t < 0 || t > static_cast<double>(values.size() - 1) + 1e-9) throw std::out_of_range("outside sampled range");
  size_t i = std::min(static_cast<size_t>(t), values.size() - 2);
  double w = t - static_cast<double>(i);
  return values[i] * (1 - w) + values[i + 1] * w;
}

Sampled sample(const std::function<double(double)>& f, double xmax, int n) {
  Sampled s;
  s.step = xmax / n;
  s.values.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    s.values[i] = f(i * s.step);
    if (!std::isfinite(s.values[i])) throw std::runtime_error("sampled function is not finite on the grid");
  }
  return s;
}

Sampled opP(const Sampled& f) {
  Sampled r{f.step, std::vector<double>(f.values.size(), 0.0)};
  for (size_t i = 1; i < f.values.size(); ++i) r.values[i] = r.values[i - 1] + f.step * (f.values[i - 1] + f.values[i]) / 2;
  return r;
}

Sampled opL(const Sampled& f) {
  Sampled p = opP(f);
  for (size_t i = 0; i < p.values.size(); ++i) p.values[i] = f.values[i] - p.values[i];
  return p;
}

Sampled opD(const Sampled& f) {
  size_t n = f.values.size();
  if (n < 3) throw std::invalid_argument("need at least three samples");
  Sampled r{f.step, std::vector<double>(n)};
  double h2 = f.step * f.step;
  for (size_t i = 0; i < n; ++i) {
    size_t j = std::clamp<size_t>(i, 1, n - 2);
    double second = (f.values[j - 1] - 2 * f.values[j] + f.values[j + 1]) / h2;
    r.values[i] = f.values[i] / 4 - second;
  }
  return r;
}

double primitiveStepDoublingError(const std::function<double(double)>& f, double xmax, int n) {
  Sampled a = opP(sample(f, xmax, n));
  Sampled b = opP(sample(f, xmax, 2 * n));
  double err = 0;
  for (int i = 0; i <= n; ++i) err = std::max(err, std::abs(a.values[i] - b.values[2 * i]));
  // Richardson: the finer grid error is a third of the difference.
  return err / 3;
}

Sampled opPNumeric(const std::function<double(double)>& f, double xmax, double tol, int maxN) {
  Sampled coarse = opP(sample(f, xmax, 64));
  for (int n = 128; n <= maxN; n *= 2) {
    Sampled fine = opP(sample(f, xmax, n));
    double err = 0, scale = 0;
    for (size_t i = 0; i < coarse.values.size(); ++i) {
      err = std::max(err, std::abs(coarse.values[i] - fine.values[2 * i]) / 3);
      scale = std::max(scale, std::abs(fine.values[2 * i]));
    }
    if (err <= tol * std::max(scale, 1.0)) return fine;
    coarse = std::move(fine);
  }
  throw std::runtime_error("trapezoid primitive did not reach the step-doubling tolerance");
}

// ---- membership

std::vector<double> integratedAbs(const std::function<double(double)>& g, int N) {
  using boost::math::quadrature::gauss_kronrod;
  std::vector<double> out(N);
  double acc = 0;
  const int probes = 64;
  for (int k = 0; k < N; ++k) {
    // Split [k, k+1] at sign changes so |g| is smooth on each piece.
    std::vector<double> cuts{static_cast<double>(k)};
    double prevX = k, prevV = g(k);
    for (int i = 1; i <= probes; ++i) {
      double x = k + static_cast<double>(i) / probes, v = g(x);
      if ((prevV < 0) != (v < 0) && prevV != 0 && v != 0) {
        double a = prevX, b = x, ga = prevV;
        for (int it = 0; it < 80; ++it) {
          double mid = (a + b) / 2, gm = g(mid);
          if ((gm < 0) == (ga < 0)) a = mid, ga = gm; else b = mid;
        }
        cuts.push_back((a + b) / 2);
      }
      prevX = x;
      prevV = v;
    }
    cuts.push_back(k + 1.0);
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
      acc += gauss_kronrod<double, 31>::integrate([&](double x) { return std::abs(g(x)); }, cuts[i], cuts[i + 1], 8, 1e-12);
    out[k] = acc;
  }
  return out;
}

double remainderNorm(const std::function<double(double)>& r, double c, int horizon) {
  auto I = integratedAbs(r, horizon);
  double best = 0;
  for (int n = 1; n <= horizon; ++n) best = std::max(best, I[n - 1] / (std::pow(n + 1.0, c) * std::exp(n / 2.0)));
  return best;
}

double FRDecomposition::norm() const {
  double m = 0;
  for (auto& q : principal) m = std::max(m, std::abs(q.get_d()));
  return m;
}

std::string FRDecomposition::toJson() const {
  nlohmann::json j;
  j["m"] = m;
  j["c"] = c;
  j["c1"] = fittedC1;
  j["accepted"] = accepted;
  std::vector<std::string> coeffs;
  for (auto& q : principal) coeffs.push_back(toString(q));
  j["principalCoeffs"] = coeffs;
  if (!accepted) {
    j["reason"] = reason;
    j["growthExponent"] = growthExponent;
  }
  return j.dump();
}

FRDecomposition frMembership(const ExpPolyFunction& f, int m, double c, double horizon) {
  if (m < 0) throw std::invalid_argument("m must be non-negative");
  int N = static_cast<int>(std::floor(horizon));
  if (N < 22) throw std::invalid_argument("horizon must be at least 22");
  FRDecomposition d;
  d.m = m;
  d.c = c;
  d.fittedC = c;
  d.principal = f.component(1);
  d.remainder = f - ExpPolyFunction::term(1, d.principal);

  ExpPolyFunction g = opLPower(f, m);
  auto I = integratedAbs([&](double x) { return g(x); }, N);
  double c1 = 0;
  for (int n = 1; n <= N; ++n) {
    double r = I[n - 1] / (std::pow(n + 1.0, c) * std::exp(n / 2.0));
    d.c1ByN.push_back(r);
    c1 = std::max(c1, r);
  }
  d.fittedC1 = c1;

  // LSQ slope of log c1(n) over the last half of the horizon.
  int start = N / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  bool allZero = true;
  for (int n = start; n <= N; ++n) {
    double r = d.c1ByN[n - 1];
    if (r > 0) allZero = false;
    double y = std::log(std::max(r, 1e-300));
    sx += n, sy += y, sxx += double(n) * n, sxy += n * y;
    ++cnt;
  }
  d.trendSlope = allZero ? 0 : (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);

  bool increasing = false;
  for (int n = 21; n < N; ++n)
    if (d.c1ByN[n] > d.c1ByN[n - 1] * (1 + 1e-12) + 1e-300) increasing = true;

  std::string structural;
  for (auto& [mu, p] : f.terms()) {
    if (mu > 1) structural = "rate " + toString(mu) + " exceeds 1";
    else if (mu > Rational(1, 2) && mu < 1) structural = "rate " + toString(mu) + " lies in (1/2, 1)";
  }
  if (structural.empty() && !g.component(1).empty()) structural = "rate-1 component survives L^m";

  if (increasing || d.trendSlope >= 1e-3 || !structural.empty()) {
    d.accepted = false;
    d.growthExponent = std::max(d.trendSlope, 0.0);
    if (increasing || d.trendSlope >= 1e-3) {
      std::ostringstream os;
      os << "growth trend in c1(n): slope " << d.trendSlope;
      if (increasing) os << ", c1 increases beyond n=20";
      d.reason = os.str();
      if (!structural.empty()) d.reason += "; " + structural;
    } else {
      d.reason = structural;
    }
    return d;
  }
  d.accepted = true;
  return d;
}

// ---- (h, phi)-convolution

namespace {

struct HPhiContext {
  const HPhiSpec& s;
  std::vector<int> freeVars;
  size_t n;

  explicit HPhiContext(const HPhiSpec& spec) : s(spec), n(spec.fs.size()) {
    if (spec.lo.size() != n || spec.hi.size() != n) throw std::invalid_argument("box dimension mismatch");
    for (size_t i = 0; i < n; ++i) {
      int t = spec.fs[i].tiedTo;
      if (t < 0) {
        freeVars.push_back(static_cast<int>(i));
      } else if (t >= static_cast<int>(n) || spec.fs[t].tiedTo >= 0) {
        throw std::invalid_argument("a Dirac factor must tie to a free variable");
      }
    }
    if (freeVars.empty()) throw std::invalid_argument("no free variable");
  }

  void propagate(std::vector<double>& x) const {
    for (size_t i = 0; i < n; ++i)
      if (s.fs[i].tiedTo >= 0) x[i] = x[s.fs[i].tiedTo];
  }

  double weight(const std::vector<double>& x) const {
    double w = s.phi ? s.phi(x) : 1.0;
    for (size_t i = 0; i < n && w != 0; ++i)
      if (s.fs[i].f) w *= s.fs[i].f(x[i]);
    return w;
  }

  double hAt(std::vector<double> x, int var, double v) const {
    x[var] = v;
    propagate(x);
    return s.h(x);
  }

  // Largest value u of x[var] in [lo, hi] with h <= l once later free variables sit at lo.
  double upperLimit(std::vector<double> x, size_t level, double l) const {
    for (size_t k = level + 1; k < freeVars.size(); ++k) x[freeVars[k]] = s.lo[freeVars[k]];
    int var = freeVars[level];
    double a = s.lo[var], b = s.hi[var];
    if (hAt(x, var, a) > l) return a;
    if (hAt(x, var, b) < l)
      throw std::domain_error("preimage of l leaves the quadrature box");
    auto fn = [&](double v) { return hAt(x, var, v) - l; };
    boost::math::tools::eps_tolerance<double> tol(52);
    std::uintmax_t it = 200;
    auto [r0, r1] = boost::math::tools::toms748_solve(fn, a, b, tol, it);
    return (r0 + r1) / 2;
  }

  double dh(std::vector<double> x) const {
    int var = freeVars.back();
    if (s.dhLast) return s.dhLast(x);
    double v = x[var], e = 1e-3 * std::max(1.0, std::abs(v));
    auto H = [&](double t) { return hAt(x, var, t); };
    return (8 * (H(v + e) - H(v - e)) - (H(v + 2 * e) - H(v - 2 * e))) / (12 * e);
  }

  double density(std::vector<double>& x, size_t level, double l, double& err) const {
    using boost::math::quadrature::gauss_kronrod;
    int var = freeVars[level];
    double u = upperLimit(x, level, l);
    if (level + 1 == freeVars.size()) {
      if (u <= s.lo[var] && hAt(x, var, s.lo[var]) > l) return 0;
      x[var] = u;
      propagate(x);
      double w = weight(x);
      if (w == 0) return 0;
      double d = dh(x);
      if (!(d > 0)) throw std::domain_error("h is not increasing in its last free variable");
      return w / d;
    }
    if (u <= s.lo[var]) return 0;
    double e = 0;
    double v = gauss_kronrod<double, 31>::integrate(
        [&](double t) {
          std::vector<double> y = x;
          y[var] = t;
          double inner = 0;
          double r = density(y, level + 1, l, inner);
          return r;
        },
        s.lo[var], u, 12, s.relTol, &e);
    err += e;
    return v;
  }

  double mass(std::vector<double>& x, size_t level, double& err) const {
    using boost::math::quadrature::gauss_kronrod;
    if (level == freeVars.size()) {
      propagate(x);
      return weight(x);
    }
    int var = freeVars[level];
    double e = 0;
    double v = gauss_kronrod<double, 31>::integrate(
        [&](double t) {
          std::vector<double> y = x;
          y[var] = t;
          double inner = 0;
          return mass(y, level + 1, inner);
        },
        s.lo[var], s.hi[var], 12, s.relTol, &e);
    err += e;
    return v;
  }
};

}  // namespace

HPhiResult hPhiConvolve(const HPhiSpec& spec, const std::vector<double>& grid, Exec exec) {
  HPhiContext ctx(spec);
  HPhiResult r;
  r.grid = grid;
  r.density.assign(grid.size(), 0.0);
  // Fixed output slots keep the result independent of the schedule.
  std::vector<double> errs(grid.size(), 0.0);
  std::vector<std::exception_ptr> failures(grid.size());
  const long n = static_cast<long>(grid.size());
  auto one = [&](long i) {
    try {
      std::vector<double> x(spec.lo);
      r.density[i] = ctx.density(x, 0, grid[i], errs[i]);
      if (!std::isfinite(r.density[i]))
        throw std::runtime_error("quadrature did not converge at l = " + std::to_string(grid[i]));
    } catch (...) {
      failures[i] = std::current_exception();
    }
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) one(i);
  } else {
    for (long i = 0; i < n; ++i) one(i);
  }
  for (long i = 0; i < n; ++i)
    if (failures[i]) std::rethrow_exception(failures[i]);
  for (double e : errs) r.errorEstimate = std::max(r.errorEstimate, e);
  return r;
}

double hPhiMass(const HPhiSpec& spec) {
  HPhiContext ctx(spec);
  std::vector<double> x(spec.lo);
  double err = 0;
  return ctx.mass(x, 0, err);
}

}  // namespace wpgap
