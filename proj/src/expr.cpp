#include "wpgap/expr.hpp"

#include <cctype>
#include <stdexcept>

namespace wpgap {

namespace {

class Parser {
public:
  explicit Parser(const std::string& s) : s_(s) {}

  ExpPolyFunction parse() {
    auto f = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return f;
  }

private:
  const std::string& s_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression error at " + std::to_string(pos_) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool startsAtom() {
    skip();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '.';
  }

  ExpPolyFunction expr() {
    auto f = term();
    for (;;) {
      if (eat('+')) f = f + term();
      else if (eat('-')) f = f - term();
      else return f;
    }
  }

  ExpPolyFunction term() {
    auto f = unary();
    for (;;) {
      if (eat('*')) {
        f = f * unary();
      } else if (eat('/')) {
        auto d = unary();
        f = f * Rational(1 / constantOf(d, "division"));
      } else if (startsAtom()) {
        f = f * power();
      } else {
        return f;
      }
    }
  }

  ExpPolyFunction unary() {
    if (eat('-')) return unary() * Rational(-1);
    if (eat('+')) return unary();
    return power();
  }

  ExpPolyFunction power() {
    auto base = atom();
    if (!eat('^')) return base;
    auto e = unary();
    Rational q = constantOf(e, "exponent");
    if (q.get_den() != 1 || q < 0 || q > 64) fail("exponent must be an integer in [0, 64]");
    auto out = ExpPolyFunction::constant(1);
    for (long i = 0; i < q.get_num().get_si(); ++i) out = out * base;
    return out;
  }

  ExpPolyFunction atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      auto f = expr();
      if (!eat(')')) fail("missing ')'");
      return f;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return ExpPolyFunction::constant(number());
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      if (name == "l") return ExpPolyFunction::monomial(1, 1, 0);
      if (name == "e") {
        if (!eat('^')) fail("bare e; write e^(...)");
        return expOf(rateOf(unary()), 1);
      }
      if (name == "exp" || name == "sinh" || name == "cosh") {
        if (!eat('(')) fail("missing '(' after " + name);
        Rational q = rateOf(expr());
        if (!eat(')')) fail("missing ')'");
        if (name == "exp") return expOf(q, 1);
        Rational half(1, 2);
        auto plus = expOf(q, half);
        auto minus = expOf(-q, half);
        return name == "sinh" ? plus - minus : plus + minus;
      }
      pos_ = start;
      fail("unknown name '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Rational number() {
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string digits = s_.substr(start, pos_ - start);
    std::string frac;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      size_t f = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      frac = s_.substr(f, pos_ - f);
    }
    if (digits.empty() && frac.empty()) fail("malformed number");
    mpz_class num(digits.empty() && !frac.empty() ? "0" + frac : digits + frac, 10);
    mpz_class den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  Rational constantOf(const ExpPolyFunction& f, const char* what) {
    if (f.isZero()) {
      if (std::string(what) == "division") fail("division by zero");
      return 0;
    }
    if (f.terms().size() != 1 || f.terms().begin()->first != 0 || f.maxDegree() != 0)
      fail(std::string(what) + " must be a constant");
    return f.terms().begin()->second.at(0);
  }

  // Argument q*l of exp, sinh or cosh.
  Rational rateOf(const ExpPolyFunction& f) {
    if (f.isZero()) return 0;
    if (f.terms().size() != 1 || f.terms().begin()->first != 0) fail("argument must be linear in l");
    const RatPoly& p = f.terms().begin()->second;
    if (p.size() > 2 || (!p.empty() && p[0] != 0)) fail("argument must be q*l without a constant");
    return p.size() == 2 ? p[1] : Rational(0);
  }

  static ExpPolyFunction expOf(const Rational& rate, const Rational& coeff) {
    return ExpPolyFunction::monomial(coeff, 0, rate);
  }
};

}  // namespace

ExpPolyFunction parseExpPoly(const std::string& text) { return Parser(text).parse(); }

}  // namespace wpgap
