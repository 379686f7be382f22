#pragma once

#include "wpgap/exact.hpp"

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace wpgap {

struct Signature {
  int g = 0;
  int n = 0;
  int chi() const { return 2 * g - 2 + n; }
  bool operator==(const Signature&) const = default;
};

// Order by complexity 2g-2+n, ties broken by genus.
bool operator<(const Signature& a, const Signature& b);
std::string toString(const Signature& s);

// V_{g,n} stored through its symmetric coefficients. Writing
//   V_{g,n}(2L) = sum_d [tau_d] prod L_i^{2 d_i} / (2 d_i + 1)!,
// the bracket [tau_d] equals rational * pi^{2(3g-3+n-|d|)}; only the rational is kept,
// keyed by the non-increasing exponent vector d.
class SymmetricVolume {
public:
  SymmetricVolume() = default;
  explicit SymmetricVolume(Signature s) : sig_(s) {}

  Signature sig() const { return sig_; }
  int dim() const { return 3 * sig_.g - 3 + sig_.n; }
  const std::map<std::vector<int>, Rational>& brackets() const { return b_; }
  Rational bracket(std::vector<int> d) const;  // any order
  void setBracket(std::vector<int> d, const Rational& q);

  PiPolynomial toPolynomial() const;
  // Coefficient of prod x_i^{2 d_i} (d in any order) as a PiCoeff.
  PiCoeff coefficient(const std::vector<int>& d) const;
  double eval(const std::vector<double>& x) const;

private:
  Signature sig_;
  std::map<std::vector<int>, Rational> b_;
};

// Fast double evaluation of a volume polynomial in a few variables.
class VolumeEvaluator {
public:
  VolumeEvaluator() = default;
  explicit VolumeEvaluator(const SymmetricVolume& v);
  double operator()(const std::vector<double>& x) const;
  double operator()(double x) const { return (*this)(std::vector<double>{x}); }
  double operator()(double x, double y) const { return (*this)(std::vector<double>{x, y}); }
  double operator()(double x, double y, double z) const { return (*this)(std::vector<double>{x, y, z}); }
  int nvars() const { return n_; }

private:
  int n_ = 0;
  int maxDeg_ = 0;
  std::vector<int> exps_;  // n_ exponents of x_i^2 per monomial
  std::vector<double> coefs_;
};

struct CheckRecord {
  std::string identity;  // "string" or "dilaton"
  Signature sig;         // the (g, n+1) side
  bool pass = false;
  std::string detail;
};

struct ConsistencyReport {
  std::vector<CheckRecord> records;
  bool allPass() const;
};

class VolumeTable {
public:
  static constexpr const char* kProvenance = "mirzakhani-bracket-v1;V11=(x^2+4pi^2)/24";

  VolumeTable() = default;
  explicit VolumeTable(std::filesystem::path cacheDir);

  const SymmetricVolume& get(Signature s);
  PiPolynomial computeVolume(Signature s) { return get(s).toPolynomial(); }
  PiCoeff closedVolume(int g);
  double closedVolumeDouble(int g);
  const VolumeEvaluator& evaluator(Signature s);

  bool has(Signature s) const;
  void put(const SymmetricVolume& v);  // used by tests for fault injection
  std::vector<Signature> signatures() const;

  // Compute everything with 2g-2+n <= maxChi, n >= 1.
  void fill(int maxChi);

  const std::optional<std::filesystem::path>& cacheDir() const { return cacheDir_; }

private:
  std::map<Signature, SymmetricVolume> table_;
  std::map<Signature, VolumeEvaluator> evals_;
  std::map<int, double> closed_;
  std::optional<std::filesystem::path> cacheDir_;
  std::recursive_mutex mu_;

  SymmetricVolume recurse(Signature s);
  bool loadCached(Signature s);
  void storeCached(const SymmetricVolume& v);
};

// Exact string and dilaton identity checks on every pair (g,n) -> (g,n+1) present
// in the table with 2g-2+(n+1) <= maxChi.
ConsistencyReport consistencyCheck(VolumeTable& table, int maxChi);

// Polynomial identities used by the checks, exposed for testing.
// Evaluate variable `var` at 2*pi*i (even polynomial, so the result lies in Q[pi^2]).
PiPolynomial evalAtTwoPiI(const PiPolynomial& p, int var);
// (d/dx_var p)(..., 2 pi i, ...) / (2 pi i).
PiPolynomial dilatonSide(const PiPolynomial& p, int var);
// sum_k int_0^{x_k} x_k p dx_k.
PiPolynomial stringSide(const PiPolynomial& p);

SymmetricVolume symmetricFromJson(const std::string& s);
std::string symmetricToJson(const SymmetricVolume& v, bool stringOk, bool dilatonOk);

std::filesystem::path defaultCacheDir();

}  // namespace wpgap
