#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wpgap {

using Real100 = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<100>>;

// Figure-eight filling a pair of pants with boundary lengths x1, x2, x3.
double lengthFigureEight(double x1, double x2, double x3);
double orthoT(double x1, double x2, double x3);
double lengthViaT(double x1, double x2, double T);
// Inverse of orthoT in the third argument; nullopt outside the coordinate domain.
std::optional<double> x3FromT(double x1, double x2, double T);

struct JacobianReport {
  double closedForm = 0;
  double finiteDifference = 0;
  double relError = 0;
  bool degenerate = false;
};
// Determinant of (x1,x2,x3) -> (T,x1,x2), i.e. dT/dx3, at the point with coordinates (x1,x2,T).
JacobianReport jacobianAudit(double x1, double x2, double T);

enum class Hyp { Minus, Zero, Plus };
using HypSignVector = std::vector<Hyp>;
template <class R>
R hyp(Hyp e, const R& x) {
  using std::cosh, std::sinh;
  switch (e) {
    case Hyp::Minus: return sinh(x);
    case Hyp::Plus: return cosh(x);
    default: return R(1);
  }
}

// Non-negative coefficients indexed by sign vectors in {+,-}^n (bit i set means minus at i).
struct BetaFamily {
  int n = 0;
  std::map<unsigned, double> coeff;
  static BetaFamily plusOnly(int n);
  bool valid() const;
};

double hBeta(const BetaFamily& beta, const std::vector<double>& x);
Real100 hBeta(const BetaFamily& beta, const std::vector<Real100>& x);

struct EClassNorm {
  unsigned alpha = 0;             // bit i set means alpha_i = 1
  std::vector<double> supByExtent;  // sup of e^{alpha.x}|d^alpha (h - L_n)| on [a,E]^n per extent E
  bool bounded = false;
};
struct EClassReport {
  int n = 0;
  double a = 1;
  std::vector<double> extents;
  std::vector<EClassNorm> norms;
  int skipped = 0;
  std::vector<std::string> diagnostics;
  bool allBounded() const;
  double maxNorm() const;
};
struct GridSpec {
  std::vector<double> extents{5, 10, 15, 20, 25, 30};
  // Per-axis sample positions beyond a; sup over [a,E]^n uses those <= E.
  std::vector<double> axis{0, 0.5, 1, 2, 3, 5, 7, 10, 14, 19, 24, 29};
};
using RealFn = std::function<Real100(const std::vector<Real100>&)>;
EClassReport eClassAudit(const RealFn& h, int n, double a, const GridSpec& grid);

// 2x2 holonomy words.
struct HolonomyToken {
  enum Kind { Glide, Turn } kind;
  double value;  // glide: signed length theta; turn: bar length L, negative for reversed traversal
};
using HolonomyWord = std::vector<HolonomyToken>;
using Mat2 = std::array<double, 4>;
Mat2 tokenMatrix(const HolonomyToken& t);
double halfTrace(const HolonomyWord& w);
// nullopt when |half-trace| < 1 (elliptic or parabolic).
std::optional<double> holonomyLength(const HolonomyWord& w);
HolonomyWord figureEightWord(double x1, double x2, double T);

// Symbolic word: glides indexed into theta, turns into L with a traversal sign.
struct SymbolicToken {
  bool turn = false;
  int index = 0;
  int sign = 1;
};
struct HalfTraceTerm {
  std::vector<int> delta;  // +1 cosh, -1 sinh, one per glide in word order
  std::vector<int> alpha;  // in {-1,0,1}^r, normalized so the first non-zero entry is +1
};
struct HalfTraceExpansion {
  int r = 0;
  int nTheta = 0;
  std::vector<HalfTraceTerm> terms;
  bool wellFormed = true;  // every delta-coefficient is a single cosh(alpha.L)
  std::string diagnostic;
  double eval(const std::vector<double>& L, const std::vector<double>& theta) const;
  bool hasZeroAlphaAtAllPlus() const;
  bool hasAllOnesAlpha() const;
};
HalfTraceExpansion expandHalfTrace(const std::vector<SymbolicToken>& word, int r, int nTheta);
HolonomyWord instantiate(const std::vector<SymbolicToken>& word, const std::vector<double>& L,
                         const std::vector<double>& theta);

}  // namespace wpgap
