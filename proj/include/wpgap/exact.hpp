#pragma once

#include <gmpxx.h>

#include <boost/multiprecision/mpfr.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace wpgap {

using Rational = mpq_class;
using Real50 = boost::multiprecision::mpfr_float_50;

std::string toString(const Rational& q);
Rational parseRational(const std::string& s);
Real50 toReal(const Rational& q);
Real50 pi50();

// Element of Q[pi^2]: map from even pi-exponent 2k to its rational coefficient.
class PiCoeff {
public:
  PiCoeff() = default;
  PiCoeff(const Rational& q, int piExp = 0);

  const std::map<int, Rational>& terms() const { return terms_; }
  bool isZero() const { return terms_.empty(); }
  Rational at(int piExp) const;
  void addTerm(int piExp, const Rational& q);

  PiCoeff operator+(const PiCoeff& o) const;
  PiCoeff operator-(const PiCoeff& o) const;
  PiCoeff operator*(const PiCoeff& o) const;
  PiCoeff operator*(const Rational& q) const;
  bool operator==(const PiCoeff& o) const { return terms_ == o.terms_; }

  Real50 eval() const;
  double evalDouble() const;
  std::string str() const;

private:
  std::map<int, Rational> terms_;
};

using Exponent = std::vector<int>;

// Multivariate polynomial, even in every variable, with PiCoeff coefficients.
class PiPolynomial {
public:
  PiPolynomial() = default;
  explicit PiPolynomial(int nvars);
  static PiPolynomial constant(int nvars, const PiCoeff& c);
  static PiPolynomial monomial(const Exponent& e, const PiCoeff& c);

  int nvars() const { return n_; }
  const std::map<Exponent, PiCoeff>& terms() const { return terms_; }
  bool isZero() const { return terms_.empty(); }
  PiCoeff coeff(const Exponent& e) const;
  void addTerm(const Exponent& e, const PiCoeff& c);
  int totalDegree() const;

  PiPolynomial operator+(const PiPolynomial& o) const;
  PiPolynomial operator-(const PiPolynomial& o) const;
  // Product over the same variables.
  PiPolynomial operator*(const PiPolynomial& o) const;
  PiPolynomial scale(const PiCoeff& c) const;
  bool operator==(const PiPolynomial& o) const { return n_ == o.n_ && terms_ == o.terms_; }

  // Product over disjoint variable sets: variables of o are appended after ours.
  PiPolynomial tensor(const PiPolynomial& o) const;

  Real50 eval(const std::vector<Real50>& x) const;
  double evalDouble(const std::vector<double>& x) const;

  std::string toJson() const;
  static PiPolynomial fromJson(const std::string& s);

private:
  int n_ = 0;
  std::map<Exponent, PiCoeff> terms_;
  void check(const Exponent& e) const;
};

PiPolynomial polyAdd(const PiPolynomial& p, const PiPolynomial& q);
PiPolynomial polyMul(const PiPolynomial& p, const PiPolynomial& q);
PiPolynomial polyScale(const PiPolynomial& p, const PiCoeff& c);
Real50 polyEval(const PiPolynomial& p, const std::vector<Real50>& x);

// Kernels used by the volume recursion, each with an exact moment table
// int_0^inf x^{2k+1} K(x) dx = rational * pi^{2k+2}.
enum class Kernel {
  // K(x) = 2/(1+e^{x/2}), i.e. H(x,0) of the recursion.
  MirzakhaniH0,
  // K(x) = 1/sinh(x/2)... moments (2k+1)! * 2^{2k+2} * 2 * (1-2^{-2k-2}) zeta(2k+2)
  InverseSinhHalf,
};

PiCoeff kernelMoment(Kernel k, int deg);  // moment of x^{2 deg + 1}
PiPolynomial polyIntegrateMonomialWeighted(const PiPolynomial& p, int var, Kernel k);
PiPolynomial polyIntegrateMonomialWeighted(const PiPolynomial& p, int var, int kernelId);

// Exact helpers.
Rational bernoulli(int n);
// zeta(2k)/pi^{2k}, with zeta(0) = -1/2.
Rational zetaEvenOverPi(int k);
mpz_class factorial(int n);

}  // namespace wpgap
