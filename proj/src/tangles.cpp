#include "wpgap/tangles.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wpgap {

using nlohmann::json;

namespace {

bool componentLess(const Component& a, const Component& b) {
  bool ac = std::holds_alternative<Circle>(a), bc = std::holds_alternative<Circle>(b);
  if (ac || bc) return ac && !bc;
  return std::get<Surface2D>(a).sig < std::get<Surface2D>(b).sig;
}

Rational fallingFactorial(int n, int j) {
  Rational r = 1;
  for (int i = 0; i < j; ++i) r *= n - i;
  return r;
}

}  // namespace

CSurface CSurface::fromJson(const std::string& s) {
  CSurface z;
  for (const auto& c : json::parse(s)) {
    std::string kind = c.at("kind");
    if (kind == "circle") {
      z.components.push_back(Circle{c.at("len").get<double>()});
    } else if (kind == "surf") {
      Surface2D t;
      t.sig = {c.at("g").get<int>(), c.at("n").get<int>()};
      t.boundary = c.at("boundary").get<std::vector<double>>();
      z.components.push_back(t);
    } else {
      throw std::invalid_argument("unknown component kind " + kind);
    }
  }
  z.validate();
  return z;
}

std::string CSurface::toJson() const {
  json out = json::array();
  for (const auto& c : components) {
    if (auto* ci = std::get_if<Circle>(&c)) {
      out.push_back({{"kind", "circle"}, {"len", ci->length}});
    } else {
      const auto& t = std::get<Surface2D>(c);
      out.push_back({{"kind", "surf"}, {"g", t.sig.g}, {"n", t.sig.n}, {"boundary", t.boundary}});
    }
  }
  return out.dump();
}

void CSurface::validate() const {
  if (components.empty()) throw std::invalid_argument("empty c-surface");
  for (const auto& c : components) {
    if (auto* ci = std::get_if<Circle>(&c)) {
      if (!(ci->length > 0)) throw std::invalid_argument("circle length must be positive");
      continue;
    }
    const auto& t = std::get<Surface2D>(c);
    if (t.sig.g < 0 || t.sig.n < 1 || 2 - 2 * t.sig.g - t.sig.n >= 0)
      throw std::invalid_argument("component " + toString(t.sig) + " has non-negative Euler characteristic");
    if (static_cast<int>(t.boundary.size()) != t.sig.n)
      throw std::invalid_argument("boundary count mismatch on " + toString(t.sig));
    for (double b : t.boundary)
      if (!(b > 0)) throw std::invalid_argument("boundary length must be positive");
  }
  if (!std::is_sorted(components.begin(), components.end(), componentLess))
    throw std::invalid_argument("components not ordered by signature");
}

int CSurface::absChi() const {
  int s = 0;
  for (const auto& t : surfaces()) s += t.absChi();
  return s;
}

std::vector<double> CSurface::circleLengths() const {
  std::vector<double> out;
  for (const auto& c : components)
    if (auto* ci = std::get_if<Circle>(&c)) out.push_back(ci->length);
  return out;
}

std::vector<Surface2D> CSurface::surfaces() const {
  std::vector<Surface2D> out;
  for (const auto& c : components)
    if (auto* t = std::get_if<Surface2D>(&c)) out.push_back(*t);
  return out;
}

void TangleParams::validate() const {
  if (!(kappa > 0) || !(omega > 0)) throw std::invalid_argument("kappa and omega must be positive");
  if (!(kappa < omega)) throw std::invalid_argument("kappa must be below omega");
  if (!(kappa < 2 * std::asinh(1.0))) throw std::invalid_argument("kappa must be below 2 asinh 1");
}

bool isTangle(const CSurface& z, const TangleParams& p) {
  if (z.components.size() != 1) throw std::invalid_argument("isTangle needs a single component");
  const auto& c = z.components.front();
  if (auto* ci = std::get_if<Circle>(&c)) return ci->length <= p.kappa;
  const auto& t = std::get<Surface2D>(c);
  if (t.absChi() != 1) return false;
  return *std::max_element(t.boundary.begin(), t.boundary.end()) <= p.omega;
}

Rational muCircles(int j, const std::vector<double>& lengths, double kappa) {
  if (j < 1 || static_cast<int>(lengths.size()) != j)
    throw std::invalid_argument("muCircles needs j lengths, j >= 1");
  if (*std::max_element(lengths.begin(), lengths.end()) > kappa) return 0;
  Rational r = 1 / (Rational(mpz_class(1) << j) * Rational(factorial(j)));
  return j % 2 == 1 ? r : Rational(-r);
}

bool MuReport::boundsHold() const {
  return std::all_of(bounds.begin(), bounds.end(), [](const BoundCheck& b) { return b.holds; });
}

std::string MuReport::toJson() const {
  json j;
  j["value"] = value ? json(toString(*value)) : json(nullptr);
  j["holes"] = holes;
  j["bounds"] = json::array();
  for (const auto& b : bounds)
    j["bounds"].push_back({{"absChi", b.absChi}, {"value", b.value}, {"bound", b.bound}, {"holds", b.holds}});
  return j.dump();
}

MuReport muComposite(const CSurface& z, const Mu2d& mu2d, const TangleParams& p, const GrowthFn& U,
                     const GrowthFn& V) {
  z.validate();
  p.validate();
  MuReport r;
  auto circles = z.circleLengths();
  auto surfaces = z.surfaces();
  auto bound = [&](int chi, double value) {
    double b = U(chi) * std::exp(p.omega * V(chi));
    return BoundCheck{chi, value, b, std::abs(value) <= b};
  };
  if (surfaces.empty()) {
    r.value = muCircles(static_cast<int>(circles.size()), circles, p.kappa);
    r.bounds.push_back(bound(0, r.value->get_d()));
    return r;
  }
  auto m = mu2d(surfaces);
  if (!m) {
    for (const auto& t : surfaces) r.holes.push_back(toString(t.sig));
    return r;
  }
  r.bounds.push_back(bound(z.absChi(), m->get_d()));
  // With no circles mu(Z) is the 2d value itself.
  Rational mc = circles.empty() ? Rational(-1) : muCircles(static_cast<int>(circles.size()), circles, p.kappa);
  r.value = -mc * *m;
  r.bounds.push_back(bound(z.absChi(), r.value->get_d()));
  return r;
}

bool InclusionExclusionReport::correctedAll() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.correctedHolds; });
}

std::vector<int> InclusionExclusionReport::printedFailures() const {
  std::vector<int> out;
  for (const auto& r : rows)
    if (!r.printedHolds) out.push_back(r.N);
  return out;
}

std::string InclusionExclusionReport::toJson() const {
  json j = json::array();
  for (const auto& r : rows)
    j.push_back({{"N", r.N},
                 {"corrected", toString(r.corrected)},
                 {"printed", toString(r.printed)},
                 {"correctedHolds", r.correctedHolds},
                 {"printedHolds", r.printedHolds}});
  return json{{"rows", j}, {"printedFailures", printedFailures()}}.dump();
}

InclusionExclusionReport inclusionExclusionAudit(int nMax) {
  if (nMax < 0 || nMax > 12) throw std::invalid_argument("nMax must lie in [0,12]");
  InclusionExclusionReport rep;
  for (int N = 0; N <= nMax; ++N) {
    InclusionExclusionRow row;
    row.N = N;
    Rational tail = 0;
    for (int j = 1; j <= N; ++j) {
      Rational t = fallingFactorial(N, j) / Rational(factorial(j));
      tail += j % 2 == 0 ? t : Rational(-t);
    }
    Rational indicator = N == 0 ? 1 : 0;
    row.corrected = 1 + tail;
    row.printed = 1 - tail;
    row.correctedHolds = row.corrected == indicator;
    row.printedHolds = row.printed == indicator;
    rep.rows.push_back(row);
  }
  return rep;
}

std::string MoebiusReport::toJson() const {
  return json{{"j", j}, {"tuples", tuples}, {"total", toString(total)}, {"exact", exact}}.dump();
}

MoebiusReport moebiusIdentityCircles(const std::vector<double>& lengths, double kappa) {
  int j = static_cast<int>(lengths.size());
  if (j < 1 || j > 6) throw std::invalid_argument("j must lie in [1,6]");
  MoebiusReport rep;
  rep.j = j;
  std::vector<int> pick;
  std::vector<bool> used(j, false);
  auto visit = [&](auto&& self) -> void {
    if (!pick.empty()) {
      std::vector<double> sub;
      for (int i : pick) sub.push_back(lengths[i]);
      Rational mu = muCircles(static_cast<int>(sub.size()), sub, kappa);
      if (mu != 0) {
        for (unsigned o = 0; o < (1u << pick.size()); ++o) {
          rep.total += mu;
          ++rep.tuples;
        }
      }
    }
    for (int i = 0; i < j; ++i) {
      if (used[i]) continue;
      used[i] = true;
      pick.push_back(i);
      self(self);
      pick.pop_back();
      used[i] = false;
    }
  };
  visit(visit);
  rep.exact = rep.total == 1;
  return rep;
}

MoebiusReport moebiusIdentityCircles(int j, double kappa) {
  return moebiusIdentityCircles(std::vector<double>(std::max(j, 0), kappa / 2), kappa);
}

}  // namespace wpgap
