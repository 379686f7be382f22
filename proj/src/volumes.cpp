#include "wpgap/volumes.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace wpgap {

bool operator<(const Signature& a, const Signature& b) {
  if (a.chi() != b.chi()) return a.chi() < b.chi();
  if (a.g != b.g) return a.g < b.g;
  return a.n < b.n;
}

std::string toString(const Signature& s) {
  return "(" + std::to_string(s.g) + "," + std::to_string(s.n) + ")";
}

static void sortDesc(std::vector<int>& d) { std::sort(d.begin(), d.end(), std::greater<int>()); }

static int sum(const std::vector<int>& d) {
  int s = 0;
  for (int x : d) s += x;
  return s;
}

Rational SymmetricVolume::bracket(std::vector<int> d) const {
  sortDesc(d);
  auto it = b_.find(d);
  return it == b_.end() ? Rational(0) : it->second;
}

void SymmetricVolume::setBracket(std::vector<int> d, const Rational& q) {
  if (static_cast<int>(d.size()) != sig_.n) throw std::invalid_argument("bracket arity mismatch");
  sortDesc(d);
  if (q == 0)
    b_.erase(d);
  else
    b_[d] = q;
}

// prod (2d_i+1)! 4^{d_i}
static mpz_class bracketScale(const std::vector<int>& d) {
  mpz_class s = 1;
  for (int x : d) s *= factorial(2 * x + 1) * (mpz_class(1) << (2 * x));
  return s;
}

PiCoeff SymmetricVolume::coefficient(const std::vector<int>& d) const {
  Rational b = bracket(d);
  if (b == 0) return PiCoeff();
  return PiCoeff(b / Rational(bracketScale(d)), 2 * (dim() - sum(d)));
}

PiPolynomial SymmetricVolume::toPolynomial() const {
  PiPolynomial p(sig_.n);
  for (auto& [d, q] : b_) {
    std::vector<int> perm = d;
    std::sort(perm.begin(), perm.end());
    PiCoeff c = coefficient(d);
    do {
      Exponent e(perm.size());
      for (size_t i = 0; i < perm.size(); ++i) e[i] = 2 * perm[i];
      p.addTerm(e, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return p;
}

double SymmetricVolume::eval(const std::vector<double>& x) const { return VolumeEvaluator(*this)(x); }

VolumeEvaluator::VolumeEvaluator(const SymmetricVolume& v) : n_(v.sig().n) {
  const double pi2 = M_PI * M_PI;
  for (auto& [d, q] : v.brackets()) {
    std::vector<int> perm = d;
    std::sort(perm.begin(), perm.end());
    PiCoeff c = v.coefficient(d);
    double val = 0;
    for (auto& [e, r] : c.terms()) val += r.get_d() * std::pow(pi2, e / 2);
    do {
      for (int k : perm) {
        exps_.push_back(k);
        maxDeg_ = std::max(maxDeg_, k);
      }
      coefs_.push_back(val);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

double VolumeEvaluator::operator()(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("volume evaluation arity mismatch");
  // Table of (x_i^2)^k, then one product per monomial.
  const int w = maxDeg_ + 1;
  thread_local std::vector<double> pw;
  pw.resize(static_cast<size_t>(n_) * w);
  for (int i = 0; i < n_; ++i) {
    double sq = x[i] * x[i], p = 1;
    for (int k = 0; k < w; ++k) pw[i * w + k] = p, p *= sq;
  }
  double s = 0;
  const int* e = exps_.data();
  for (double c : coefs_) {
    double m = c;
    for (int i = 0; i < n_; ++i) m *= pw[i * w + e[i]];
    e += n_;
    s += m;
  }
  return s;
}

bool ConsistencyReport::allPass() const {
  for (auto& r : records)
    if (!r.pass) return false;
  return true;
}

std::filesystem::path defaultCacheDir() {
  if (const char* e = std::getenv("WPGAP_CACHE_DIR")) return e;
  return "wpgap-cache";
}

VolumeTable::VolumeTable(std::filesystem::path cacheDir) : cacheDir_(std::move(cacheDir)) {}

bool VolumeTable::has(Signature s) const { return table_.count(s) > 0; }

void VolumeTable::put(const SymmetricVolume& v) {
  std::lock_guard lk(mu_);
  table_[v.sig()] = v;
  evals_.erase(v.sig());
  closed_.clear();
}

std::vector<Signature> VolumeTable::signatures() const {
  std::vector<Signature> r;
  for (auto& [s, v] : table_) r.push_back(s);
  return r;
}

const SymmetricVolume& VolumeTable::get(Signature s) {
  std::lock_guard lk(mu_);
  if (s.g < 0 || s.n < 0 || s.chi() <= 0)
    throw std::invalid_argument("unstable signature " + toString(s));
  auto it = table_.find(s);
  if (it != table_.end()) return it->second;
  if (!loadCached(s)) {
    SymmetricVolume v = recurse(s);
    table_[s] = v;
    storeCached(v);
  }
  return table_.at(s);
}

const VolumeEvaluator& VolumeTable::evaluator(Signature s) {
  std::lock_guard lk(mu_);
  auto it = evals_.find(s);
  if (it != evals_.end()) return it->second;
  return evals_.emplace(s, VolumeEvaluator(get(s))).first->second;
}

void VolumeTable::fill(int maxChi) {
  for (int chi = 1; chi <= maxChi; ++chi)
    for (int g = 0; 2 * g - 2 < chi; ++g) get({g, chi - 2 * g + 2});
}

// rational part of a_L = zeta(2L)(1 - 2^{1-2L}), with a_0 = 1/2
static const Rational& alpha(int L) {
  static std::vector<Rational> cache;
  static std::mutex m;
  std::lock_guard lk(m);
  while (static_cast<int>(cache.size()) <= L) {
    int k = static_cast<int>(cache.size());
    Rational two = k == 0 ? Rational(2) : Rational(1, mpz_class(1) << (2 * k - 1));
    cache.push_back(zetaEvenOverPi(k) * (Rational(1) - two));
  }
  return cache[L];
}

// The recursion runs on the orbifold normalization, where V_{1,1} carries weight 1/2.
static Rational recursionBracket(const SymmetricVolume& v, const std::vector<int>& d) {
  Rational b = v.bracket(d);
  if (v.sig() == Signature{1, 1}) b /= 2;
  return b;
}

SymmetricVolume VolumeTable::recurse(Signature s) {
  SymmetricVolume v(s);
  const int dim = v.dim();
  if (s == Signature{0, 3}) {
    v.setBracket({0, 0, 0}, 1);
    return v;
  }
  if (s == Signature{1, 1}) {
    v.setBracket({1}, 1);
    v.setBracket({0}, Rational(1, 6));
    return v;
  }

  // Sub-tables the recursion reads from.
  Signature sa{s.g, s.n - 1}, sb{s.g - 1, s.n + 1};
  const SymmetricVolume* a = sa.n >= 1 && sa.chi() > 0 ? &get(sa) : nullptr;
  const SymmetricVolume* b = sb.g >= 0 && sb.chi() > 0 ? &get(sb) : nullptr;
  for (int g1 = 0; g1 <= s.g; ++g1)
    for (int n1 = 1; n1 <= s.n; ++n1) {
      Signature s1{g1, n1}, s2{s.g - g1, s.n + 1 - n1};
      if (s1.chi() > 0 && s2.chi() > 0) get(s1), get(s2);
    }

  // [tau_k tau_I] as a vector in k over a common denominator, shared between all
  // targets with the same split.
  struct Side {
    std::vector<mpz_class> num;
    mpz_class den = 1;
  };
  std::map<std::pair<int, std::vector<int>>, Side> sideCache;
  auto side = [&](int g1, const std::vector<int>& I) -> const Side& {
    auto key = std::make_pair(g1, I);
    auto it = sideCache.find(key);
    if (it != sideCache.end()) return it->second;
    const SymmetricVolume& w = table_.at({g1, static_cast<int>(I.size()) + 1});
    int m = w.dim() - sum(I);
    std::vector<Rational> p(std::max(m + 1, 0));
    std::vector<int> k = I;
    k.push_back(0);
    Side out;
    for (int x = 0; x <= m; ++x) {
      k.back() = x;
      p[x] = recursionBracket(w, k);
      mpz_lcm(out.den.get_mpz_t(), out.den.get_mpz_t(), p[x].get_den_mpz_t());
    }
    for (auto& q : p) out.num.push_back(q.get_num() * (out.den / q.get_den()));
    return sideCache.emplace(key, std::move(out)).first->second;
  };

  // Enumerate the other boundaries D (non-increasing); the first boundary d1 >= D[0]
  // then ranges over what is left of the degree budget.
  std::vector<int> D(s.n - 1);
  std::function<void(int, int, int)> gen = [&](int pos, int maxv, int left) {
    if (pos < s.n - 1) {
      for (int x = std::min(maxv, left); x >= 0; --x) {
        D[pos] = x;
        gen(pos + 1, x, left - x);
      }
      return;
    }
    const int sD = sum(D);
    const int lo = D.empty() ? 0 : D[0];
    const int hi = dim - sD;
    if (lo > hi) return;

    // Q[t] collects the cut terms for t = L + d1 - 2.
    const int tmax = hi - 2 + hi + 2;
    std::vector<Rational> Q(tmax + 1);
    if (b) {
      std::vector<int> key = D;
      key.push_back(0);
      key.push_back(0);
      int budget = b->dim() - sD;
      for (int t = 0; t <= std::min(tmax, budget); ++t) {
        Rational inner = 0;
        for (int k1 = 0; k1 <= t; ++k1) {
          key[key.size() - 2] = k1;
          key[key.size() - 1] = t - k1;
          inner += b->bracket(key);
        }
        Q[t] += inner;
      }
    }
    {
      std::vector<int> vals, mults;
      for (size_t j = 0; j < D.size(); ++j) {
        if (j > 0 && D[j] == D[j - 1]) {
          ++mults.back();
        } else {
          vals.push_back(D[j]);
          mults.push_back(1);
        }
      }
      struct Pair {
        const Side* p1;
        const Side* p2;
        mpz_class w;
      };
      std::vector<Pair> pairs;
      mpz_class cutDen = 1;
      std::vector<int> take(vals.size(), 0);
      std::function<void(size_t)> split = [&](size_t t) {
        if (t < vals.size()) {
          for (int i = 0; i <= mults[t]; ++i) {
            take[t] = i;
            split(t + 1);
          }
          return;
        }
        std::vector<int> I, J;
        mpz_class w = 1;
        for (size_t u = 0; u < vals.size(); ++u) {
          for (int i = 0; i < take[u]; ++i) I.push_back(vals[u]);
          for (int i = take[u]; i < mults[u]; ++i) J.push_back(vals[u]);
          mpz_class c;
          mpz_bin_uiui(c.get_mpz_t(), mults[u], take[u]);
          w *= c;
        }
        for (int g1 = 0; g1 <= s.g; ++g1) {
          Signature s1{g1, static_cast<int>(I.size()) + 1}, s2{s.g - g1, static_cast<int>(J.size()) + 1};
          if (s1.chi() <= 0 || s2.chi() <= 0) continue;
          const Side& p1 = side(g1, I);
          const Side& p2 = side(s.g - g1, J);
          if (p1.num.empty() || p2.num.empty()) continue;
          pairs.push_back({&p1, &p2, w});
          mpz_class den = p1.den * p2.den;
          mpz_lcm(cutDen.get_mpz_t(), cutDen.get_mpz_t(), den.get_mpz_t());
        }
      };
      split(0);
      // Accumulate every split over one common denominator.
      std::vector<mpz_class> acc(tmax + 1);
      mpz_class inner, scale;
      for (auto& [p1, p2, w] : pairs) {
        int m1 = static_cast<int>(p1->num.size()) - 1, m2 = static_cast<int>(p2->num.size()) - 1;
        scale = cutDen / (p1->den * p2->den) * w;
        for (int t = 0; t <= std::min(tmax, m1 + m2); ++t) {
          inner = 0;
          for (int x = std::max(0, t - m2); x <= std::min(t, m1); ++x)
            mpz_addmul(inner.get_mpz_t(), p1->num[x].get_mpz_t(), p2->num[t - x].get_mpz_t());
          mpz_addmul(acc[t].get_mpz_t(), inner.get_mpz_t(), scale.get_mpz_t());
        }
      }
      for (int t = 0; t <= tmax; ++t)
        if (acc[t] != 0) {
          Rational term(acc[t], cutDen);
          term.canonicalize();
          Q[t] += term;
        }
    }

    std::vector<int> d(s.n);
    std::copy(D.begin(), D.end(), d.begin() + 1);
    for (int d1 = lo; d1 <= hi; ++d1) {
      Rational total = 0;
      // Boundary j joins boundary 1 across a pair of pants.
      if (a) {
        for (size_t j = 0; j < D.size(); ++j) {
          if (j > 0 && D[j] == D[j - 1]) continue;
          int mult = static_cast<int>(std::count(D.begin(), D.end(), D[j]));
          std::vector<int> rest = D;
          rest.erase(rest.begin() + j);
          const int restSum = sum(rest);
          rest.push_back(0);
          Rational acc = 0;
          for (int L = 0;; ++L) {
            int k = d1 + D[j] + L - 1;
            if (k < 0) continue;
            if (k + restSum > a->dim()) break;
            rest.back() = k;
            Rational br = recursionBracket(*a, rest);
            if (br != 0) acc += alpha(L) * br;
          }
          total += 8 * (2 * D[j] + 1) * mult * acc;
        }
      }
      Rational cut = 0;
      for (int L = 0; L + d1 - 2 <= tmax; ++L) {
        int t = L + d1 - 2;
        if (t < 0 || Q[t] == 0) continue;
        cut += alpha(L) * Q[t];
      }
      total += 16 * cut;
      d[0] = d1;
      v.setBracket(d, total);
    }
  };
  gen(0, dim, dim);
  return v;
}

// Cache I/O

std::string symmetricToJson(const SymmetricVolume& v, bool stringOk, bool dilatonOk) {
  nlohmann::ordered_json j;
  j["g"] = v.sig().g;
  j["n"] = v.sig().n;
  j["provenance"] = VolumeTable::kProvenance;
  j["symmetric"] = true;
  j["terms"] = nlohmann::ordered_json::array();
  for (auto& [d, q] : v.brackets()) {
    nlohmann::ordered_json t;
    std::vector<int> e;
    for (int x : d) e.push_back(2 * x);
    t["exp"] = e;
    t["pi"] = nlohmann::ordered_json::array();
    PiCoeff c = v.coefficient(d);
    for (auto& [k, r] : c.terms()) t["pi"].push_back({k, toString(r)});
    j["terms"].push_back(t);
  }
  j["checks"] = {{"string", stringOk}, {"dilaton", dilatonOk}};
  return j.dump();
}

SymmetricVolume symmetricFromJson(const std::string& s) {
  auto j = nlohmann::json::parse(s);
  SymmetricVolume v({j.at("g").get<int>(), j.at("n").get<int>()});
  for (auto& t : j.at("terms")) {
    std::vector<int> d;
    for (int e : t.at("exp").get<std::vector<int>>()) {
      if (e % 2) throw std::invalid_argument("odd exponent in cache file");
      d.push_back(e / 2);
    }
    Rational c = 0;
    for (auto& pr : t.at("pi")) c += parseRational(pr.at(1).get<std::string>());
    v.setBracket(d, c * Rational(bracketScale(d)));
  }
  return v;
}

static std::filesystem::path cacheFile(const std::filesystem::path& dir, Signature s) {
  return dir / ("V_" + std::to_string(s.g) + "_" + std::to_string(s.n) + ".json");
}

bool VolumeTable::loadCached(Signature s) {
  if (!cacheDir_) return false;
  auto f = cacheFile(*cacheDir_, s);
  std::ifstream in(f);
  if (!in) return false;
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    auto j = nlohmann::json::parse(ss.str());
    if (j.value("provenance", "") != kProvenance) return false;
    if (!j.at("checks").at("string").get<bool>() || !j.at("checks").at("dilaton").get<bool>()) return false;
    table_[s] = symmetricFromJson(ss.str());
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

static bool checkPair(VolumeTable& t, Signature upper, std::string& detail, bool dilaton);

void VolumeTable::storeCached(const SymmetricVolume& v) {
  if (!cacheDir_) return;
  std::string detail;
  bool st = true, dl = true;
  Signature lower{v.sig().g, v.sig().n - 1};
  if (lower.n == 0 || lower.chi() > 0) {
    st = checkPair(*this, v.sig(), detail, false);
    dl = checkPair(*this, v.sig(), detail, true);
  }
  std::filesystem::create_directories(*cacheDir_);
  auto f = cacheFile(*cacheDir_, v.sig());
  auto tmp = f;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << symmetricToJson(v, st, dl) << "\n";
  }
  std::filesystem::rename(tmp, f);
}

// Identities

static Rational minusFourPow(int d) {
  mpz_class p;
  mpz_pow_ui(p.get_mpz_t(), mpz_class(4).get_mpz_t(), d);
  return d % 2 ? Rational(-p) : Rational(p);
}

PiPolynomial evalAtTwoPiI(const PiPolynomial& p, int var) {
  PiPolynomial r(p.nvars() - 1);
  for (auto& [e, c] : p.terms()) {
    Exponent rest = e;
    rest.erase(rest.begin() + var);
    int d = e[var] / 2;
    r.addTerm(rest, c * PiCoeff(minusFourPow(d), 2 * d));
  }
  return r;
}

PiPolynomial dilatonSide(const PiPolynomial& p, int var) {
  PiPolynomial r(p.nvars() - 1);
  for (auto& [e, c] : p.terms()) {
    int d = e[var] / 2;
    if (d == 0) continue;
    Exponent rest = e;
    rest.erase(rest.begin() + var);
    r.addTerm(rest, c * PiCoeff(Rational(2 * d) * minusFourPow(d - 1), 2 * d - 2));
  }
  return r;
}

PiPolynomial stringSide(const PiPolynomial& p) {
  PiPolynomial r(p.nvars());
  for (auto& [e, c] : p.terms())
    for (int k = 0; k < p.nvars(); ++k) {
      Exponent f = e;
      f[k] += 2;
      r.addTerm(f, c * Rational(1, f[k]));
    }
  return r;
}

// Both identities are checked coefficient-wise on symmetric representatives, so no
// full expansion is needed. V_{1,1} enters with the orbifold weight 1/2.
static bool checkPair(VolumeTable& t, Signature upper, std::string& detail, bool dilaton) {
  Signature lower{upper.g, upper.n - 1};
  const SymmetricVolume& up = t.get(upper);
  auto fail = [&](const std::vector<int>& e, const PiCoeff& diff) {
    std::ostringstream os;
    os << (dilaton ? "dilaton" : "string") << " mismatch at " << toString(upper) << " monomial [";
    for (size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << 2 * e[i];
    os << "] diff " << diff.str();
    detail = os.str();
    return false;
  };
  // Sum over the exponent k of the last variable, evaluated at 2 pi i.
  auto lastAtTwoPiI = [&](const std::vector<int>& e) {
    PiCoeff c;
    std::vector<int> d = e;
    d.push_back(0);
    for (int k = 0; k <= up.dim(); ++k) {
      d.back() = k;
      PiCoeff u = up.coefficient(d);
      if (u.isZero()) continue;
      if (dilaton) {
        if (k > 0) c = c + u * PiCoeff(Rational(2 * k) * minusFourPow(k - 1), 2 * k - 2);
      } else {
        c = c + u * PiCoeff(minusFourPow(k), 2 * k);
      }
    }
    return c;
  };
  if (lower.n == 0) {
    if (dilaton) return true;  // defines V_g
    PiCoeff c = lastAtTwoPiI({});
    return c.isZero() ? true : fail({}, c);
  }
  const SymmetricVolume& low = t.get(lower);
  const Rational w = lower == Signature{1, 1} ? Rational(1, 2) : Rational(1);
  // Every lower exponent vector with |e| <= dim(upper) is compared (both sides may vanish).
  std::vector<int> e(lower.n);
  bool ok = true;
  std::function<void(int, int, int)> gen = [&](int pos, int maxv, int left) {
    if (!ok) return;
    if (pos == lower.n) {
      PiCoeff lhs = lastAtTwoPiI(e);
      PiCoeff rhs;
      if (dilaton) {
        rhs = low.coefficient(e) * (w * lower.chi());
      } else {
        for (int i = 0; i < lower.n; ++i) {
          if (e[i] == 0) continue;
          std::vector<int> f = e;
          --f[i];
          rhs = rhs + low.coefficient(f) * (w * Rational(1, 2 * e[i]));
        }
      }
      if (!(lhs == rhs)) ok = fail(e, lhs - rhs);
      return;
    }
    for (int x = std::min(maxv, left); x >= 0; --x) {
      e[pos] = x;
      gen(pos + 1, x, left - x);
    }
  };
  gen(0, up.dim(), up.dim());
  return ok;
}

ConsistencyReport consistencyCheck(VolumeTable& table, int maxChi) {
  ConsistencyReport rep;
  for (Signature up : table.signatures()) {
    if (up.chi() > maxChi) continue;
    Signature lower{up.g, up.n - 1};
    bool lowerOk = lower.n >= 0 && (lower.chi() > 0 || lower.n == 0) && (lower.n == 0 || table.has(lower));
    if (!lowerOk || up == Signature{0, 3} || up == Signature{1, 1}) continue;
    for (bool dil : {false, true}) {
      if (lower.n == 0 && dil) continue;
      CheckRecord r;
      r.identity = dil ? "dilaton" : "string";
      r.sig = up;
      r.pass = checkPair(table, up, r.detail, dil);
      rep.records.push_back(r);
    }
  }
  return rep;
}

PiCoeff VolumeTable::closedVolume(int g) {
  if (g < 2) throw std::invalid_argument("closed volume needs g >= 2");
  PiPolynomial p = get({g, 1}).toPolynomial();
  PiPolynomial d = dilatonSide(p, 0);
  return d.coeff({}) * Rational(1, 2 * g - 2);
}

double VolumeTable::closedVolumeDouble(int g) {
  std::lock_guard lk(mu_);
  auto it = closed_.find(g);
  if (it != closed_.end()) return it->second;
  double v = closedVolume(g).evalDouble();
  closed_[g] = v;
  return v;
}

}  // namespace wpgap
