#include "wpgap/diagrams.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace wpgap {

void Diagram::validate() const {
  if (N <= 0 || static_cast<int>(points.size()) != N) throw std::invalid_argument("diagram: bad curve count");
  if (bars.empty()) throw std::invalid_argument("diagram: r must be >= 1");
  if (!diskSide.empty() && static_cast<int>(diskSide.size()) != N) throw std::invalid_argument("diagram: bad diskSide");
  std::vector<std::vector<int>> used(N);
  for (int c = 0; c < N; ++c) {
    if (points[c] <= 0) throw std::invalid_argument("diagram: curve without attachment points");
    used[c].assign(points[c], 0);
  }
  auto mark = [&](int c, int p) {
    if (c < 0 || c >= N || p < 0 || p >= points[c]) throw std::invalid_argument("diagram: attachment out of range");
    if (used[c][p]++) throw std::invalid_argument("diagram: attachment point used twice");
  };
  for (auto& b : bars) {
    mark(b.fc, b.fp);
    mark(b.tc, b.tp);
  }
  for (auto& u : used)
    for (int x : u)
      if (x != 1) throw std::invalid_argument("diagram: unused attachment point");
}

bool Diagram::connected() const {
  std::vector<int> parent(N);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (auto& b : bars) parent[find(b.fc)] = find(b.tc);
  for (int c = 0; c < N; ++c)
    if (find(c) != find(0)) return false;
  return true;
}

std::string Diagram::toJson() const {
  nlohmann::ordered_json j;
  j["N"] = N;
  j["points"] = points;
  j["bars"] = nlohmann::ordered_json::array();
  for (auto& b : bars) j["bars"].push_back({{"fc", b.fc}, {"fp", b.fp}, {"tc", b.tc}, {"tp", b.tp}});
  if (!diskSide.empty()) j["diskSide"] = diskSide;
  return j.dump();
}

Diagram Diagram::fromJson(const std::string& s) {
  auto j = nlohmann::json::parse(s);
  Diagram d;
  d.N = j.at("N").get<int>();
  for (auto& b : j.at("bars"))
    d.bars.push_back({b.at("fc").get<int>(), b.at("fp").get<int>(), b.at("tc").get<int>(), b.at("tp").get<int>()});
  if (j.contains("points")) {
    d.points = j.at("points").get<std::vector<int>>();
  } else {
    d.points.assign(d.N, 0);
    for (auto& b : d.bars) {
      d.points[b.fc] = std::max(d.points[b.fc], b.fp + 1);
      d.points[b.tc] = std::max(d.points[b.tc], b.tp + 1);
    }
  }
  if (j.contains("diskSide")) d.diskSide = j.at("diskSide").get<std::vector<int>>();
  d.validate();
  return d;
}

// Which bar end sits at each attachment point.
struct PointInfo {
  int bar;
  bool isFrom;
};
static std::vector<std::vector<PointInfo>> pointTable(const Diagram& d) {
  std::vector<std::vector<PointInfo>> t(d.N);
  for (int c = 0; c < d.N; ++c) t[c].resize(d.points[c]);
  for (int j = 0; j < d.r(); ++j) {
    t[d.bars[j].fc][d.bars[j].fp] = {j, true};
    t[d.bars[j].tc][d.bars[j].tp] = {j, false};
  }
  return t;
}

// Terminus of B_j^eps.
static std::pair<int, int> terminus(const Diagram& d, PathToken t) {
  const Bar& b = d.bars[t.bar];
  return t.eps > 0 ? std::make_pair(b.tc, b.tp) : std::make_pair(b.fc, b.fp);
}

static PathToken successor(const Diagram& d, const std::vector<std::vector<PointInfo>>& pts, PathToken t) {
  auto [c, p] = terminus(d, t);
  int q = (p + 1) % d.points[c];
  const PointInfo& info = pts[c][q];
  // The next path starts where the arc ends: B^+ from a from-point, B^- from a to-point.
  return {info.bar, info.isFrom ? 1 : -1};
}

std::vector<Walk> reconstructComponents(const Diagram& d) {
  d.validate();
  auto pts = pointTable(d);
  std::vector<Walk> out;
  std::set<std::pair<int, int>> seen;
  for (int j = 0; j < d.r(); ++j)
    for (int e : {1, -1}) {
      if (seen.count({j, e})) continue;
      Walk w;
      PathToken t{j, e};
      while (!seen.count({t.bar, t.eps})) {
        seen.insert({t.bar, t.eps});
        w.push_back(t);
        t = successor(d, pts, t);
      }
      if (!(t == w.front())) throw std::logic_error("diagram walk does not close");
      out.push_back(w);
    }
  return out;
}

Walk reconstructLoop(const Diagram& d) {
  auto comps = reconstructComponents(d);
  if (comps.size() != 1) throw std::logic_error("diagram closes into " + std::to_string(comps.size()) + " components");
  return comps.front();
}

FaceTrace traceFaces(const Diagram& d) {
  d.validate();
  auto pts = pointTable(d);
  FaceTrace ft;
  ft.arcOffset.assign(d.N, 0);
  int V = 0;
  for (int c = 0; c < d.N; ++c) {
    ft.arcOffset[c] = V;
    V += d.points[c];
  }
  // Half-edges per vertex v: 3v out-arc, 3v+1 in-arc, 3v+2 bar end.
  auto vid = [&](int c, int p) { return ft.arcOffset[c] + p; };
  std::vector<int> alpha(3 * V), sigma(3 * V);
  std::vector<int> barOther(d.r() * 2);
  for (int c = 0; c < d.N; ++c)
    for (int p = 0; p < d.points[c]; ++p) {
      int v = vid(c, p), w = vid(c, (p + 1) % d.points[c]);
      alpha[3 * v] = 3 * w + 1;
      alpha[3 * w + 1] = 3 * v;
      const int out = 3 * v, in = 3 * v + 1, bar = 3 * v + 2;
      if (pts[c][p].isFrom) {  // bar on the left: ccw order out, bar, in
        sigma[out] = bar, sigma[bar] = in, sigma[in] = out;
      } else {  // bar on the right: ccw order out, in, bar
        sigma[out] = in, sigma[in] = bar, sigma[bar] = out;
      }
    }
  for (auto& b : d.bars) {
    int u = 3 * vid(b.fc, b.fp) + 2, w = 3 * vid(b.tc, b.tp) + 2;
    alpha[u] = w;
    alpha[w] = u;
  }
  std::vector<int> face(3 * V, -1);
  for (int h = 0; h < 3 * V; ++h) {
    if (face[h] >= 0) continue;
    int x = h;
    while (face[x] < 0) {
      face[x] = ft.faceCount;
      x = sigma[alpha[x]];
    }
    ++ft.faceCount;
  }
  ft.leftFace.resize(V);
  ft.rightFace.resize(V);
  for (int c = 0; c < d.N; ++c)
    for (int p = 0; p < d.points[c]; ++p) {
      int v = vid(c, p), w = vid(c, (p + 1) % d.points[c]);
      ft.rightFace[v] = face[3 * v];
      ft.leftFace[v] = face[3 * w + 1];
    }
  ft.diskFace.assign(ft.faceCount, false);
  if (!d.diskSide.empty())
    for (int c = 0; c < d.N; ++c) {
      if (d.diskSide[c] == 0) continue;
      for (int p = 0; p < d.points[c]; ++p) {
        int v = vid(c, p);
        ft.diskFace[d.diskSide[c] > 0 ? ft.leftFace[v] : ft.rightFace[v]] = true;
      }
    }
  return ft;
}

Signature fillingSignature(const Diagram& d) {
  FaceTrace ft = traceFaces(d);
  int r = d.r(), n = ft.faceCount;
  if ((r + 2 - n) % 2 != 0 || r + 2 - n < 0) throw std::logic_error("face count inconsistent with Euler characteristic");
  return {(r + 2 - n) / 2, n};
}

bool isGeneralizedEight(const Diagram& d) {
  FaceTrace ft = traceFaces(d);
  return std::none_of(ft.diskFace.begin(), ft.diskFace.end(), [](bool b) { return b; });
}

PortionsReport simplePortionsReport(const Diagram& d) {
  FaceTrace ft = traceFaces(d);
  PortionsReport rep;
  bool all = true;
  for (auto& comp : reconstructComponents(d))
    for (auto& t : comp) {
      auto [c, p] = terminus(d, t);
      int a = ft.arcOffset[c] + p;
      Portion po{t, c, p, ft.diskFace[ft.leftFace[a]] || ft.diskFace[ft.rightFace[a]]};
      all = all && po.shielded;
      rep.portions.push_back(po);
    }
  rep.doubleFilling = all;
  rep.comparison = all ? "sum x_i <= l(c)" : "sum x_i <= 2 l(c)";
  return rep;
}

std::vector<SymbolicToken> holonomyWord(const Diagram& d) {
  std::vector<SymbolicToken> w;
  for (auto& t : reconstructLoop(d)) {
    w.push_back({true, t.bar, t.eps});
    w.push_back({false, 2 * t.bar + (t.eps > 0 ? 0 : 1), 1});
  }
  return w;
}

// Canonical form: minimum encoding over curve relabelings, cyclic rotations and
// (optionally) reversal of the global orientation.
static std::vector<int> encode(int N, const std::vector<int>& pts, std::vector<Bar> bars) {
  std::sort(bars.begin(), bars.end(), [](const Bar& a, const Bar& b) {
    return std::tie(a.fc, a.fp, a.tc, a.tp) < std::tie(b.fc, b.fp, b.tc, b.tp);
  });
  std::vector<int> e{N};
  e.insert(e.end(), pts.begin(), pts.end());
  for (auto& b : bars) e.insert(e.end(), {b.fc, b.fp, b.tc, b.tp});
  return e;
}

std::string canonicalKey(const Diagram& d, bool withOrientationReversal) {
  d.validate();
  std::vector<int> best;
  std::vector<int> perm(d.N);
  std::iota(perm.begin(), perm.end(), 0);
  for (int rev = 0; rev <= (withOrientationReversal ? 1 : 0); ++rev) {
    // Reversal: positions flip, bars swap ends (left/right sides swap with the orientation).
    std::vector<Bar> base = d.bars;
    if (rev)
      for (auto& b : base) b = {b.tc, d.points[b.tc] - 1 - b.tp, b.fc, d.points[b.fc] - 1 - b.fp};
    std::sort(perm.begin(), perm.end());
    do {
      std::vector<int> pts(d.N);
      std::vector<int> inv(d.N);
      for (int i = 0; i < d.N; ++i) inv[perm[i]] = i, pts[i] = d.points[perm[i]];
      std::vector<int> rot(d.N, 0);
      std::function<void(int)> rotate = [&](int c) {
        if (c < d.N) {
          for (rot[c] = 0; rot[c] < d.points[c]; ++rot[c]) rotate(c + 1);
          return;
        }
        std::vector<Bar> bs;
        for (auto& b : base)
          bs.push_back({inv[b.fc], (b.fp + rot[b.fc]) % d.points[b.fc], inv[b.tc], (b.tp + rot[b.tc]) % d.points[b.tc]});
        auto e = encode(d.N, pts, bs);
        if (best.empty() || e < best) best = e;
      };
      rotate(0);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  static const char* hex = "0123456789abcdef";
  std::string key;
  for (int x : best) {
    key += hex[(x >> 4) & 15];
    key += hex[x & 15];
  }
  return key;
}

Enumeration enumerateDiagrams(int r, bool reverseOrder) {
  if (r < 0 || r > 3) throw std::invalid_argument("enumeration supports r <= 3");
  Enumeration out;
  if (r == 0) return out;
  std::vector<Diagram> raw;
  // Curve sizes as non-increasing compositions of 2r.
  std::vector<std::vector<int>> shapes;
  std::vector<int> cur;
  std::function<void(int, int)> parts = [&](int left, int maxp) {
    if (left == 0) {
      shapes.push_back(cur);
      return;
    }
    for (int k = std::min(left, maxp); k >= 1; --k) {
      cur.push_back(k);
      parts(left - k, k);
      cur.pop_back();
    }
  };
  parts(2 * r, 2 * r);
  for (auto& shape : shapes) {
    std::vector<std::pair<int, int>> slots;
    for (int c = 0; c < static_cast<int>(shape.size()); ++c)
      for (int p = 0; p < shape[c]; ++p) slots.push_back({c, p});
    std::vector<bool> used(slots.size(), false);
    std::vector<Bar> bars;
    std::function<void()> match = [&]() {
      int first = -1;
      for (size_t i = 0; i < slots.size(); ++i)
        if (!used[i]) {
          first = static_cast<int>(i);
          break;
        }
      if (first < 0) {
        Diagram d{static_cast<int>(shape.size()), shape, bars, {}};
        if (d.connected()) raw.push_back(d);
        return;
      }
      used[first] = true;
      for (size_t k = first + 1; k < slots.size(); ++k) {
        if (used[k]) continue;
        used[k] = true;
        auto [c1, p1] = slots[first];
        auto [c2, p2] = slots[k];
        bars.push_back({c1, p1, c2, p2});
        match();
        bars.back() = {c2, p2, c1, p1};
        match();
        bars.pop_back();
        used[k] = false;
      }
      used[first] = false;
    };
    match();
  }
  if (reverseOrder) std::reverse(raw.begin(), raw.end());
  out.rawDiagrams = static_cast<int>(raw.size());
  std::map<std::string, LocalType> classes;
  std::set<std::string> oriented;
  for (auto& d : raw) {
    oriented.insert(canonicalKey(d, false));
    std::string key = canonicalKey(d, true);
    if (classes.count(key)) continue;
    LocalType t;
    t.fillingSignature = fillingSignature(d);
    t.diagram = d;
    t.canonicalKey = key;
    t.components = static_cast<int>(reconstructComponents(d).size());
    t.generalizedEight = isGeneralizedEight(d);
    classes.emplace(key, t);
  }
  for (auto& [k, t] : classes) out.types.push_back(t);
  out.countWithoutReversal = static_cast<int>(oriented.size());
  return out;
}

Diagram figureEightPants() { return Diagram{2, {1, 1}, {{0, 0, 1, 0}}, {}}; }
Diagram torusDiagram() { return Diagram{1, {2}, {{0, 0, 0, 1}}, {}}; }

}  // namespace wpgap
