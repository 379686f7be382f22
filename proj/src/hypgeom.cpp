#include "wpgap/hypgeom.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>
#include <stdexcept>

namespace wpgap {

static void requirePositive(double x1, double x2, double x3) {
  if (!(x1 > 0 && x2 > 0 && x3 > 0)) throw std::domain_error("lengths must be positive");
}

double lengthFigureEight(double x1, double x2, double x3) {
  requirePositive(x1, x2, x3);
  return 2 * std::acosh(2 * std::cosh(x1 / 2) * std::cosh(x2 / 2) + std::cosh(x3 / 2));
}

double orthoT(double x1, double x2, double x3) {
  requirePositive(x1, x2, x3);
  double c = (std::cosh(x1 / 2) * std::cosh(x2 / 2) + std::cosh(x3 / 2)) / (std::sinh(x1 / 2) * std::sinh(x2 / 2));
  assert(c >= 1);
  return std::acosh(c);
}

double lengthViaT(double x1, double x2, double T) {
  return 2 * std::acosh(std::cosh(x1 / 2) * std::cosh(x2 / 2) + std::cosh(T) * std::sinh(x1 / 2) * std::sinh(x2 / 2));
}

std::optional<double> x3FromT(double x1, double x2, double T) {
  double c = std::cosh(T) * std::sinh(x1 / 2) * std::sinh(x2 / 2) - std::cosh(x1 / 2) * std::cosh(x2 / 2);
  if (!(c > 1)) return std::nullopt;
  return 2 * std::acosh(c);
}

JacobianReport jacobianAudit(double x1, double x2, double T) {
  JacobianReport r;
  auto x3 = x3FromT(x1, x2, T);
  if (!x3 || std::sinh(*x3 / 2) < 1e-8 || std::sinh(x1 / 2) < 1e-8 || std::sinh(x2 / 2) < 1e-8) {
    r.degenerate = true;
    return r;
  }
  double s1 = std::sinh(x1 / 2), s2 = std::sinh(x2 / 2), s3 = std::sinh(*x3 / 2);
  r.closedForm = s1 * s2 * s3 / (2 * s1 * s1 * s2 * s2 * std::sinh(T));
  // Central differences in x3 with one Richardson step.
  double h = 1e-5 * std::max(1.0, *x3);
  auto d = [&](double step) {
    double lo = *x3 - step;
    if (lo <= 0) lo = *x3 / 2, step = *x3 - lo;
    return (orthoT(x1, x2, *x3 + step) - orthoT(x1, x2, lo)) / (2 * step);
  };
  r.finiteDifference = (4 * d(h / 2) - d(h)) / 3;
  r.relError = std::abs(r.finiteDifference - r.closedForm) / std::abs(r.closedForm);
  return r;
}

BetaFamily BetaFamily::plusOnly(int n) {
  BetaFamily b;
  b.n = n;
  b.coeff[0] = 1;
  return b;
}

bool BetaFamily::valid() const {
  auto it = coeff.find(0);
  if (it == coeff.end() || it->second != 1) return false;
  for (auto& [k, v] : coeff)
    if (v < 0 || k >= (1u << n)) return false;
  return true;
}

template <class R>
static R hBetaImpl(const BetaFamily& beta, const std::vector<R>& x) {
  using std::acosh;
  if (static_cast<int>(x.size()) != beta.n) throw std::invalid_argument("hBeta arity mismatch");
  using std::exp;
  std::vector<R> ch(beta.n), sh(beta.n);
  for (int i = 0; i < beta.n; ++i) {
    R e = exp(x[i] / 2), ei = 1 / e;
    ch[i] = (e + ei) / 2;
    sh[i] = (e - ei) / 2;
  }
  R s = 0;
  for (auto& [eps, b] : beta.coeff) {
    if (b == 0) continue;
    R t = b;
    for (int i = 0; i < beta.n; ++i) t *= (eps >> i) & 1 ? sh[i] : ch[i];
    s += t;
  }
  if (s < 1) throw std::domain_error("hBeta: argcosh argument below 1");
  return 2 * acosh(s);
}

double hBeta(const BetaFamily& beta, const std::vector<double>& x) { return hBetaImpl(beta, x); }
Real100 hBeta(const BetaFamily& beta, const std::vector<Real100>& x) { return hBetaImpl(beta, x); }

bool EClassReport::allBounded() const {
  for (auto& nm : norms)
    if (!nm.bounded) return false;
  return true;
}

double EClassReport::maxNorm() const {
  double m = 0;
  for (auto& nm : norms)
    if (!nm.supByExtent.empty()) m = std::max(m, nm.supByExtent.back());
  return m;
}

EClassReport eClassAudit(const RealFn& h, int n, double a, const GridSpec& grid) {
  EClassReport rep;
  rep.n = n;
  rep.a = a;
  rep.extents = grid.extents;
  std::vector<double> axis;
  for (double t : grid.axis) axis.push_back(a + t);
  std::sort(axis.begin(), axis.end());
  axis.erase(std::unique(axis.begin(), axis.end()), axis.end());

  const Real100 step = Real100("1e-15");
  std::vector<std::vector<double>> sup(1u << n, std::vector<double>(grid.extents.size(), 0.0));
  std::vector<size_t> idx(n, 0);
  std::vector<Real100> x(n), y(n);
  for (;;) {
    double xmax = 0;
    for (int i = 0; i < n; ++i) {
      x[i] = axis[idx[i]];
      xmax = std::max(xmax, axis[idx[i]]);
    }
    for (unsigned al = 1; al < (1u << n); ++al) {
      // Mixed central difference of h - L_n in the directions of alpha.
      Real100 acc = 0;
      int k = 0;
      for (int i = 0; i < n; ++i) k += (al >> i) & 1;
      bool ok = true;
      for (unsigned s = 0; s < (1u << n) && ok; ++s) {
        if (s & ~al) continue;
        Real100 sign = 1, lsum = 0;
        for (int i = 0; i < n; ++i) {
          y[i] = x[i];
          if ((al >> i) & 1) {
            bool plus = (s >> i) & 1;
            y[i] += plus ? step : -step;
            if (!plus) sign = -sign;
          }
          lsum += y[i];
        }
        try {
          acc += sign * (h(y) - lsum);
        } catch (const std::domain_error& e) {
          ok = false;
          rep.diagnostics.push_back(e.what());
        }
      }
      if (!ok) {
        ++rep.skipped;
        continue;
      }
      Real100 deriv = acc / pow(2 * step, k);
      Real100 ax = 0;
      for (int i = 0; i < n; ++i)
        if ((al >> i) & 1) ax += x[i];
      double v = static_cast<double>(exp(ax) * abs(deriv));
      if (!std::isfinite(v)) {
        ++rep.skipped;
        continue;
      }
      for (size_t e = 0; e < grid.extents.size(); ++e)
        if (xmax <= grid.extents[e] + 1e-12) sup[al][e] = std::max(sup[al][e], v);
    }
    int i = 0;
    while (i < n && ++idx[i] == axis.size()) idx[i++] = 0;
    if (i == n) break;
  }
  for (unsigned al = 1; al < (1u << n); ++al) {
    EClassNorm nm;
    nm.alpha = al;
    nm.supByExtent = sup[al];
    // No growth over the upper half of the extents.
    size_t m = sup[al].size();
    double lo = sup[al][m / 2], hi = sup[al][m - 1];
    nm.bounded = std::isfinite(hi) && hi <= lo * (1 + 1e-3) + 1e-12;
    rep.norms.push_back(nm);
  }
  return rep;
}

// Holonomy

Mat2 tokenMatrix(const HolonomyToken& t) {
  double h = t.value / 2;
  if (t.kind == HolonomyToken::Glide) return {std::exp(h), 0, 0, std::exp(-h)};
  return {std::cosh(h), std::sinh(h), std::sinh(h), std::cosh(h)};
}

static Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

double halfTrace(const HolonomyWord& w) {
  if (w.empty()) throw std::invalid_argument("empty holonomy word");
  Mat2 m{1, 0, 0, 1};
  for (auto& t : w) m = mul(m, tokenMatrix(t));
  return (m[0] + m[3]) / 2;
}

std::optional<double> holonomyLength(const HolonomyWord& w) {
  double t = std::abs(halfTrace(w));
  if (t < 1) return std::nullopt;
  return 2 * std::acosh(t);
}

// The second crossing of the orthogeodesic runs against the first.
HolonomyWord figureEightWord(double x1, double x2, double T) {
  return {{HolonomyToken::Glide, x1}, {HolonomyToken::Turn, T}, {HolonomyToken::Glide, x2}, {HolonomyToken::Turn, -T}};
}

HolonomyWord instantiate(const std::vector<SymbolicToken>& word, const std::vector<double>& L,
                         const std::vector<double>& theta) {
  HolonomyWord w;
  for (auto& t : word) {
    if (t.turn)
      w.push_back({HolonomyToken::Turn, t.sign * L.at(t.index)});
    else
      w.push_back({HolonomyToken::Glide, t.sign * theta.at(t.index)});
  }
  return w;
}

// Element sign * X^a Z^b of the group generated by X = [[0,1],[1,0]] and Z = diag(1,-1).
struct Pauli {
  int sign = 1, a = 0, b = 0;
};
static Pauli mul(Pauli p, Pauli q) {
  int s = p.sign * q.sign * ((p.b & q.a) ? -1 : 1);
  return {s, p.a ^ q.a, p.b ^ q.b};
}

double HalfTraceExpansion::eval(const std::vector<double>& L, const std::vector<double>& theta) const {
  double s = 0;
  for (auto& t : terms) {
    double c = 0;
    for (int j = 0; j < r; ++j) c += t.alpha[j] * L[j];
    c = std::cosh(c);
    for (int i = 0; i < nTheta; ++i) c *= t.delta[i] > 0 ? std::cosh(theta[i] / 2) : std::sinh(theta[i] / 2);
    s += c;
  }
  return s;
}

bool HalfTraceExpansion::hasZeroAlphaAtAllPlus() const {
  for (auto& t : terms)
    if (std::all_of(t.delta.begin(), t.delta.end(), [](int d) { return d > 0; }))
      return std::all_of(t.alpha.begin(), t.alpha.end(), [](int a) { return a == 0; });
  return false;
}

bool HalfTraceExpansion::hasAllOnesAlpha() const {
  for (auto& t : terms)
    if (std::all_of(t.alpha.begin(), t.alpha.end(), [](int a) { return a == 1; })) return true;
  return false;
}

HalfTraceExpansion expandHalfTrace(const std::vector<SymbolicToken>& word, int r, int nTheta) {
  HalfTraceExpansion ex;
  ex.r = r;
  ex.nTheta = nTheta;
  std::vector<int> glidePos, turnPos;
  for (size_t i = 0; i < word.size(); ++i) (word[i].turn ? turnPos : glidePos).push_back(static_cast<int>(i));
  std::vector<int> countL(r, 0);
  for (int p : turnPos) ++countL.at(word[p].index);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.1, 2.0);
  std::vector<std::vector<double>> probes(5, std::vector<double>(r));
  for (auto& p : probes)
    for (auto& v : p) v = U(rng);

  // All alpha in {-1,0,1}^r with first non-zero entry positive.
  std::vector<std::vector<int>> alphas;
  {
    int total = 1;
    for (int j = 0; j < r; ++j) total *= 3;
    for (int code = 0; code < total; ++code) {
      std::vector<int> al(r);
      int c = code;
      for (int j = 0; j < r; ++j) al[j] = c % 3 - 1, c /= 3;
      auto nz = std::find_if(al.begin(), al.end(), [](int v) { return v != 0; });
      if (nz == al.end() || *nz > 0) alphas.push_back(al);
    }
  }

  int overall = 0;
  for (unsigned dmask = 0; dmask < (1u << glidePos.size()); ++dmask) {
    // Coefficient polynomial in c_j = cosh(L_j/2), s_j = sinh(L_j/2), keyed by s-exponents.
    std::map<std::vector<int>, int> poly;
    for (unsigned gmask = 0; gmask < (1u << turnPos.size()); ++gmask) {
      Pauli p;
      std::vector<int> key(r, 0);
      int gi = 0, ti = 0;
      for (size_t i = 0; i < word.size(); ++i) {
        const auto& t = word[i];
        if (!t.turn) {
          bool sinhTerm = (dmask >> gi++) & 1;
          if (sinhTerm) p = mul(p, Pauli{t.sign, 0, 1});
        } else {
          bool sinhTerm = (gmask >> ti++) & 1;
          if (sinhTerm) {
            p = mul(p, Pauli{t.sign, 1, 0});
            ++key[t.index];
          }
        }
      }
      if (p.a == 0 && p.b == 0) poly[key] += p.sign;
    }
    for (auto it = poly.begin(); it != poly.end();)
      it = it->second == 0 ? poly.erase(it) : std::next(it);
    if (poly.empty()) continue;

    auto evalPoly = [&](const std::vector<double>& L) {
      double s = 0;
      for (auto& [key, c] : poly) {
        double m = c;
        for (int j = 0; j < r; ++j)
          m *= std::pow(std::cosh(L[j] / 2), countL[j] - key[j]) * std::pow(std::sinh(L[j] / 2), key[j]);
        s += m;
      }
      return s;
    };
    std::vector<double> vals;
    for (auto& p : probes) vals.push_back(evalPoly(p));
    int sgn = vals[0] > 0 ? 1 : -1;
    if (overall == 0) overall = sgn;
    bool found = false;
    for (auto& al : alphas) {
      bool match = true;
      for (size_t k = 0; k < probes.size() && match; ++k) {
        double c = 0;
        for (int j = 0; j < r; ++j) c += al[j] * probes[k][j];
        double target = overall * std::cosh(c);
        match = std::abs(vals[k] - target) <= 1e-10 * std::abs(target);
      }
      if (match) {
        HalfTraceTerm t;
        for (size_t g = 0; g < glidePos.size(); ++g) t.delta.push_back((dmask >> g) & 1 ? -1 : 1);
        // Reorder delta by theta index.
        std::vector<int> byIndex(nTheta, 1);
        for (size_t g = 0; g < glidePos.size(); ++g) byIndex.at(word[glidePos[g]].index) = t.delta[g];
        t.delta = byIndex;
        t.alpha = al;
        ex.terms.push_back(t);
        found = true;
        break;
      }
    }
    if (!found) {
      ex.wellFormed = false;
      ex.diagnostic = "coefficient for a delta is not a single cosh(alpha.L)";
    }
  }
  return ex;
}

}  // namespace wpgap
