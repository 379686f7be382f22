#include "wpgap/exact.hpp"

#include <nlohmann/json.hpp>

#include <mpfr.h>

#include <boost/math/constants/constants.hpp>

#include <sstream>

namespace wpgap {

std::string toString(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parseRational(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

Real50 toReal(const Rational& q) {
  Real50 r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

Real50 pi50() { return boost::math::constants::pi<Real50>(); }

mpz_class factorial(int n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return f;
}

static mpz_class binom(int n, int k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

Rational bernoulli(int n) {
  static std::vector<Rational> cache{Rational(1)};
  while (static_cast<int>(cache.size()) <= n) {
    int m = static_cast<int>(cache.size());
    Rational s = 0;
    for (int k = 0; k < m; ++k) s += Rational(binom(m + 1, k)) * cache[k];
    Rational b = -s / Rational(m + 1);
    cache.push_back(b);
  }
  return cache[n];
}

Rational zetaEvenOverPi(int k) {
  if (k == 0) return Rational(-1, 2);
  // zeta(2k) = (-1)^{k+1} B_{2k} (2pi)^{2k} / (2 (2k)!)
  Rational r = bernoulli(2 * k) * Rational(mpz_class(1) << (2 * k - 1)) / Rational(factorial(2 * k));
  if (k % 2 == 0) r = -r;
  return r;
}

// PiCoeff

PiCoeff::PiCoeff(const Rational& q, int piExp) {
  if (piExp < 0 || piExp % 2) throw std::invalid_argument("pi exponent must be even and >= 0");
  if (q != 0) {
    terms_[piExp] = q;
    terms_[piExp].canonicalize();
  }
}

Rational PiCoeff::at(int piExp) const {
  auto it = terms_.find(piExp);
  return it == terms_.end() ? Rational(0) : it->second;
}

void PiCoeff::addTerm(int piExp, const Rational& q) {
  if (piExp < 0 || piExp % 2) throw std::invalid_argument("pi exponent must be even and >= 0");
  if (q == 0) return;
  auto [it, inserted] = terms_.try_emplace(piExp, q);
  if (inserted) it->second.canonicalize();
  if (!inserted) {
    it->second += q;
    if (it->second == 0) terms_.erase(it);
  }
}

PiCoeff PiCoeff::operator+(const PiCoeff& o) const {
  PiCoeff r = *this;
  for (auto& [e, q] : o.terms_) r.addTerm(e, q);
  return r;
}

PiCoeff PiCoeff::operator-(const PiCoeff& o) const {
  PiCoeff r = *this;
  for (auto& [e, q] : o.terms_) r.addTerm(e, -q);
  return r;
}

PiCoeff PiCoeff::operator*(const PiCoeff& o) const {
  PiCoeff r;
  for (auto& [e1, q1] : terms_)
    for (auto& [e2, q2] : o.terms_) r.addTerm(e1 + e2, q1 * q2);
  return r;
}

PiCoeff PiCoeff::operator*(const Rational& qIn) const {
  PiCoeff r;
  Rational q = qIn;
  q.canonicalize();
  if (q == 0) return r;
  for (auto& [e, c] : terms_) r.terms_[e] = c * q;
  return r;
}

Real50 PiCoeff::eval() const {
  Real50 pi2 = pi50() * pi50();
  Real50 s = 0;
  for (auto& [e, q] : terms_) s += toReal(q) * pow(pi2, e / 2);
  return s;
}

double PiCoeff::evalDouble() const { return static_cast<double>(eval()); }

std::string PiCoeff::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [e, q] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << q.get_str();
    if (e) os << "*pi^" << e;
  }
  return os.str();
}

// PiPolynomial

PiPolynomial::PiPolynomial(int nvars) : n_(nvars) {
  if (nvars < 0) throw std::invalid_argument("negative variable count");
}

PiPolynomial PiPolynomial::constant(int nvars, const PiCoeff& c) {
  PiPolynomial p(nvars);
  p.addTerm(Exponent(nvars, 0), c);
  return p;
}

PiPolynomial PiPolynomial::monomial(const Exponent& e, const PiCoeff& c) {
  PiPolynomial p(static_cast<int>(e.size()));
  p.addTerm(e, c);
  return p;
}

void PiPolynomial::check(const Exponent& e) const {
  if (static_cast<int>(e.size()) != n_)
    throw std::invalid_argument("exponent arity " + std::to_string(e.size()) + " != " + std::to_string(n_));
  for (int k : e)
    if (k < 0 || k % 2) throw std::invalid_argument("odd or negative exponent in even polynomial");
}

PiCoeff PiPolynomial::coeff(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? PiCoeff() : it->second;
}

void PiPolynomial::addTerm(const Exponent& e, const PiCoeff& c) {
  check(e);
  if (c.isZero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.isZero()) terms_.erase(it);
  }
}

int PiPolynomial::totalDegree() const {
  int d = 0;
  for (auto& [e, c] : terms_) {
    int s = 0;
    for (int k : e) s += k;
    d = std::max(d, s);
  }
  return d;
}

static void requireSame(int a, int b) {
  if (a != b)
    throw std::invalid_argument("variable-count mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

PiPolynomial PiPolynomial::operator+(const PiPolynomial& o) const {
  requireSame(n_, o.n_);
  PiPolynomial r = *this;
  for (auto& [e, c] : o.terms_) r.addTerm(e, c);
  return r;
}

PiPolynomial PiPolynomial::operator-(const PiPolynomial& o) const {
  return *this + o.scale(PiCoeff(-1));
}

PiPolynomial PiPolynomial::operator*(const PiPolynomial& o) const {
  requireSame(n_, o.n_);
  PiPolynomial r(n_);
  Exponent e(n_);
  for (auto& [e1, c1] : terms_)
    for (auto& [e2, c2] : o.terms_) {
      for (int i = 0; i < n_; ++i) e[i] = e1[i] + e2[i];
      r.addTerm(e, c1 * c2);
    }
  return r;
}

PiPolynomial PiPolynomial::scale(const PiCoeff& c) const {
  PiPolynomial r(n_);
  for (auto& [e, c1] : terms_) r.addTerm(e, c1 * c);
  return r;
}

PiPolynomial PiPolynomial::tensor(const PiPolynomial& o) const {
  PiPolynomial r(n_ + o.n_);
  for (auto& [e1, c1] : terms_)
    for (auto& [e2, c2] : o.terms_) {
      Exponent e = e1;
      e.insert(e.end(), e2.begin(), e2.end());
      r.addTerm(e, c1 * c2);
    }
  return r;
}

Real50 PiPolynomial::eval(const std::vector<Real50>& x) const {
  if (static_cast<int>(x.size()) != n_)
    throw std::invalid_argument("evaluation point arity " + std::to_string(x.size()) + " != " + std::to_string(n_));
  Real50 s = 0;
  for (auto& [e, c] : terms_) {
    Real50 m = c.eval();
    for (int i = 0; i < n_; ++i)
      if (e[i]) m *= pow(x[i], e[i]);
    s += m;
  }
  return s;
}

double PiPolynomial::evalDouble(const std::vector<double>& x) const {
  std::vector<Real50> xr(x.begin(), x.end());
  return static_cast<double>(eval(xr));
}

std::string PiPolynomial::toJson() const {
  nlohmann::ordered_json j;
  j["n"] = n_;
  j["terms"] = nlohmann::ordered_json::array();
  for (auto& [e, c] : terms_) {
    nlohmann::ordered_json t;
    t["exp"] = e;
    t["pi"] = nlohmann::ordered_json::array();
    for (auto& [k, q] : c.terms()) t["pi"].push_back({k, toString(q)});
    j["terms"].push_back(t);
  }
  return j.dump();
}

PiPolynomial PiPolynomial::fromJson(const std::string& s) {
  auto j = nlohmann::json::parse(s);
  PiPolynomial p(j.at("n").get<int>());
  for (auto& t : j.at("terms")) {
    Exponent e = t.at("exp").get<Exponent>();
    PiCoeff c;
    for (auto& pr : t.at("pi")) c.addTerm(pr.at(0).get<int>(), parseRational(pr.at(1).get<std::string>()));
    p.addTerm(e, c);
  }
  return p;
}

PiPolynomial polyAdd(const PiPolynomial& p, const PiPolynomial& q) { return p + q; }
PiPolynomial polyMul(const PiPolynomial& p, const PiPolynomial& q) { return p * q; }
PiPolynomial polyScale(const PiPolynomial& p, const PiCoeff& c) { return p.scale(c); }
Real50 polyEval(const PiPolynomial& p, const std::vector<Real50>& x) { return p.eval(x); }

PiCoeff kernelMoment(Kernel k, int deg) {
  // int_0^inf x^{2d+1} e^{-c x} dx = (2d+1)!/c^{2d+2}, summed over the geometric expansion.
  Rational z = zetaEvenOverPi(deg + 1) * Rational(factorial(2 * deg + 1));
  mpz_class p2 = mpz_class(1) << (2 * deg + 2);
  switch (k) {
    case Kernel::MirzakhaniH0:
      return PiCoeff(z * Rational(2 * p2 - 4), 2 * deg + 2);
    case Kernel::InverseSinhHalf:
      return PiCoeff(z * Rational(2 * (p2 - 1)), 2 * deg + 2);
  }
  throw std::invalid_argument("unregistered kernel");
}

PiPolynomial polyIntegrateMonomialWeighted(const PiPolynomial& p, int var, int kernelId) {
  if (kernelId < 0 || kernelId > static_cast<int>(Kernel::InverseSinhHalf))
    throw std::invalid_argument("unregistered kernel id " + std::to_string(kernelId));
  return polyIntegrateMonomialWeighted(p, var, static_cast<Kernel>(kernelId));
}

PiPolynomial polyIntegrateMonomialWeighted(const PiPolynomial& p, int var, Kernel k) {
  if (var < 0 || var >= p.nvars()) throw std::invalid_argument("variable index out of range");
  PiPolynomial r(p.nvars() - 1);
  for (auto& [e, c] : p.terms()) {
    Exponent rest = e;
    rest.erase(rest.begin() + var);
    r.addTerm(rest, c * kernelMoment(k, e[var] / 2));
  }
  return r;
}

}  // namespace wpgap
