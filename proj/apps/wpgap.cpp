#include "wpgap/densities.hpp"
#include "wpgap/expr.hpp"
#include "wpgap/io.hpp"
#include "wpgap/suite.hpp"
#include "wpgap/trace.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <iostream>
#include <regex>
#include <sstream>

using namespace wpgap;
namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kIo = 1, kVerify = 2, kUsage = 64 };

// Raised for failed checks; carries a JSON diagnostic.
struct VerificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string configFile, cacheDir, out = "out";
  double quadratureTol = 0;
  int precisionDigits = 0;
  bool serial = false;
  Config cfg;
};

void resolveConfig(Globals& g) {
  Config c;
  if (!g.configFile.empty()) c = loadConfig(g.configFile, c);
  applyEnvironment(c);
  if (!g.cacheDir.empty()) c.cacheDir = g.cacheDir;
  if (g.quadratureTol != 0) c.quadratureTol = g.quadratureTol;
  if (g.precisionDigits != 0) c.precisionDigits = g.precisionDigits;
  c.validate();
  g.cfg = c;
}

void emit(const fs::path& file, const std::string& content) {
  atomicWrite(file, content);
  std::cerr << "wrote " << file.string() << "\n";
}

void emitPlot(const fs::path& csvFile, const std::string& csv, const PlotOptions& opt) {
  emit(csvFile, csv);
  fs::path svg = csvFile;
  svg.replace_extension(".svg");
  emit(svg, renderSvg(parseCsv(csv), opt));
}

std::string csvOf(const std::vector<std::string>& header, const std::vector<std::vector<double>>& cols) {
  std::ostringstream s;
  for (size_t i = 0; i < header.size(); ++i) s << (i ? "," : "") << header[i];
  s << "\n";
  for (size_t r = 0; r < cols[0].size(); ++r) {
    for (size_t i = 0; i < cols.size(); ++i) s << (i ? "," : "") << fmt(cols[i][r]);
    s << "\n";
  }
  return s.str();
}

std::string tag(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

// volumes

std::optional<Signature> signatureOfCacheFile(const fs::path& p) {
  static const std::regex re(R"(V_(\d+)_(\d+)\.json)");
  std::smatch m;
  std::string name = p.filename().string();
  if (!std::regex_match(name, m, re)) return std::nullopt;
  return Signature{std::stoi(m[1]), std::stoi(m[2])};
}

int cmdVolumes(Globals& g, int gmax, int nmax) {
  const fs::path dir = g.cfg.cacheDir;
  if (fs::exists(dir)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      auto sig = signatureOfCacheFile(f);
      if (!sig) continue;
      try {
        auto v = symmetricFromJson(readFile(f));
        if (!(v.sig() == *sig)) throw std::runtime_error("signature field does not match the file name");
      } catch (const std::exception& e) {
        throw VerificationFailure(ojson{{"error", "corrupted cache file"},
                                        {"signature", toString(*sig)},
                                        {"file", f.string()},
                                        {"detail", e.what()}}
                                      .dump());
      }
    }
  }
  VolumeTable t(dir);
  ojson index;
  index["gmax"] = gmax;
  index["nmax"] = nmax;
  int maxChi = 0;
  for (int gg = 0; gg <= gmax; ++gg)
    for (int n = 0; n <= nmax; ++n) {
      Signature s{gg, n};
      if (s.chi() <= 0) continue;
      maxChi = std::max(maxChi, s.chi());
      if (n == 0) {
        index["closed"][std::to_string(gg)] = t.closedVolume(gg).str();
        continue;
      }
      t.get(s);
      index["volumes"].push_back({{"signature", toString(s)},
                                  {"file", "V_" + std::to_string(gg) + "_" + std::to_string(n) + ".json"}});
    }
  // The check set depends on what is resident; fill it so warm and cold runs agree.
  t.fill(maxChi);
  auto rep = consistencyCheck(t, maxChi);
  ojson checks = ojson::array();
  std::vector<std::string> failed;
  for (const auto& r : rep.records) {
    checks.push_back({{"identity", r.identity}, {"signature", toString(r.sig)}, {"pass", r.pass}});
    if (!r.pass) failed.push_back(toString(r.sig) + " " + r.identity + ": " + r.detail);
  }
  index["checks"] = checks;
  index["allPass"] = rep.allPass();
  emit(fs::path(g.out) / "volumes" / "index.json", index.dump(1) + "\n");
  if (!failed.empty()) throw VerificationFailure(ojson{{"error", "consistency check failed"}, {"failures", failed}}.dump());
  std::cout << rep.records.size() << " string/dilaton checks passed\n";
  return kOk;
}

// density

std::vector<double> lengthGrid(double lo, double hi, int samples) {
  if (samples < 2 || !(hi > lo)) throw std::invalid_argument("need --samples >= 2 and an increasing range");
  std::vector<double> grid;
  for (int i = 0; i < samples; ++i) grid.push_back(lo + (hi - lo) * i / (samples - 1));
  return grid;
}

int cmdDensity(Globals& g, const std::string& kind, int genus, double lmax, int samples, std::string csv, int m) {
  VolumeTable t(g.cfg.cacheDir);
  Exec exec = g.serial ? Exec::Serial : Exec::Parallel;
  if (kind == "simple") {
    if (genus < 2) throw std::invalid_argument("--g must be at least 2");
    auto grid = lengthGrid(lmax / samples, lmax, samples);
    std::vector<double> ratio, asym;
    for (double l : grid) {
      ratio.push_back(simpleDensity(genus, l, t));
      asym.push_back(4 / l * std::sinh(l / 2) * std::sinh(l / 2));
    }
    if (csv.empty()) csv = (fs::path(g.out) / ("density_simple_g" + std::to_string(genus) + ".csv")).string();
    emitPlot(csv, csvOf({"l", "Vs_over_Vg", "asymptotic"}, {grid, ratio, asym}),
             {"simple density, g = " + std::to_string(genus), true});
    return kOk;
  }
  if (genus < 3) throw std::invalid_argument("--g must be at least 3 for the figure-eight");
  auto grid = lengthGrid(2, lmax, samples);
  auto d1 = figureEightDensity(genus, Route::Direct, grid, t, m, EightKernel::Genus, exec);
  auto d2 = figureEightDensity(genus, Route::ChangeOfVariables, grid, t, m, EightKernel::Genus, exec);
  double scale = 0, worst = 0;
  for (double v : d2.ac) scale = std::max(scale, std::abs(v));
  for (size_t i = 0; i < grid.size(); ++i)
    worst = std::max(worst, std::abs(d1.ac[i] - d2.ac[i]) / std::max(std::abs(d2.ac[i]), 1e-12 * scale));
  if (csv.empty()) csv = (fs::path(g.out) / ("density_eight_g" + std::to_string(genus) + ".csv")).string();
  emitPlot(csv, csvOf({"l", "direct", "change_of_variables", "delta"}, {grid, d1.ac, d2.ac, d1.delta}),
           {"figure-eight density, g = " + std::to_string(genus), false});
  if (worst > g.cfg.quadratureTol)
    throw VerificationFailure(ojson{{"error", "routes disagree"}, {"relDifference", worst}, {"tolerance", g.cfg.quadratureTol}}.dump());
  return kOk;
}

// expand

int cmdExpand(Globals& g, int kmax, int gmin, int gmax, const std::vector<double>& x) {
  if (x.size() != 3) throw std::invalid_argument("--x needs three lengths a,b,c");
  if (gmin < 3 || gmax < gmin) throw std::invalid_argument("need 3 <= gmin <= gmax");
  VolumeTable t(g.cfg.cacheDir);
  std::map<int, std::vector<double>> samples;
  for (int gg = gmin; gg <= gmax; ++gg) {
    auto v = phiPairOfPants(gg, {x[0], x[1], x[2]}, t);
    samples[gg] = {gg * v.ac, gg * v.delta[0], gg * v.delta[1], gg * v.delta[2]};
  }
  auto fit = fitExpansion(samples, {0, 1, 2, 3}, kmax);
  ojson out;
  out["x"] = x;
  out["series"] = {"g*ac", "g*delta(i3=1)", "g*delta(i3=2)", "g*delta(i3=3)"};
  out["targets"] = {std::sinh(x[0] / 2) * std::sinh(x[1] / 2) * std::sinh(x[2] / 2), std::sinh(x[0] / 2),
                    std::sinh(x[1] / 2), std::sinh(x[2] / 2)};
  out["fit"] = ojson::parse(fit.toJson());
  emit(fs::path(g.out) / "expand_pants.json", out.dump(1) + "\n");
  std::cout << out.dump(1) << "\n";
  if (!fit.pass) throw VerificationFailure(ojson{{"error", "truncation residual does not decay at the fitted order"}}.dump());
  return kOk;
}

// trace

int cmdTrace(Globals& g, double L, int m) {
  TestFunction tf(L);
  auto rep = cancellationDemo(tf, m);
  std::vector<double> ls, dm;
  for (int i = 0; i <= 400; ++i) {
    ls.push_back(L * i / 400);
    dm.push_back(tf.DmHL(m, ls.back()));
  }
  std::string base = "trace_cancel_L" + tag(L) + "_m" + std::to_string(m);
  emit(fs::path(g.out) / (base + ".json"), rep.toJson() + "\n");
  emitPlot(fs::path(g.out) / (base + ".csv"), csvOf({"l", "DmHL"}, {ls, dm}), {"D^m H_L, L = " + tag(L), false});
  std::cout << rep.toJson() << "\n";
  if (rep.deviation > 1e-8)
    throw VerificationFailure(ojson{{"error", "cancellation identity off"}, {"deviation", rep.deviation}}.dump());
  return kOk;
}

// params

int cmdParams(Globals& g, double alpha, double eps, int chi2) {
  auto p = selectParameters(alpha, eps, chi2);
  emit(fs::path(g.out) / "params.json", p.toJson() + "\n");
  std::cout << p.toJson() << "\n";
  if (!p.feasible || !p.selfAudit())
    throw VerificationFailure(ojson{{"error", "parameter choice fails its own inequalities"}}.dump());
  return kOk;
}

// fr-check

int cmdFrCheck(Globals& g, const std::string& text, int m, double c) {
  auto f = parseExpPoly(text);
  auto d = frMembership(f, m, c);
  ojson out;
  out["f"] = f.str();
  out["decomposition"] = ojson::parse(d.toJson());
  emit(fs::path(g.out) / "fr_check.json", out.dump(1) + "\n");
  std::cout << out.dump(1) << "\n";
  return kOk;
}

// verify

int cmdVerify(Globals& g, const std::string& suite, const std::string& self) {
  auto ids = suiteCriteria(suite);
  SuiteContext ctx;
  ctx.cacheDir = g.cfg.cacheDir;
  ctx.exec = g.serial ? Exec::Serial : Exec::Parallel;
  ctx.cliPath = self;
  ctx.scratchDir = fs::path(g.out) / "determinism-scratch";
  ojson summary;
  summary["suite"] = suite;
  bool all = true;
  for (int id : ids) {
    auto r = runCriterion(id, ctx);
    all = all && r.pass;
    std::cout << (r.pass ? "PASS" : "FAIL") << " [" << id << "] " << r.name << ": " << r.summary << " (" << r.seconds
              << " s)" << std::endl;
    atomicWrite(fs::path(g.out) / criterionFileName(id), r.artifact + "\n");
    summary["criteria"].push_back({{"id", id}, {"name", r.name}, {"pass", r.pass}});
  }
  summary["allPass"] = all;
  atomicWrite(fs::path(g.out) / "summary.json", summary.dump(1) + "\n");
  return all ? kOk : kVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weil-Petersson volumes, length densities and trace-method bookkeeping"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.configFile, "key = value configuration file");
  app.add_option("--cache-dir", g.cacheDir, "volume cache directory");
  app.add_option("--quadrature-tol", g.quadratureTol, "tolerance for numeric cross-checks");
  app.add_option("--precision-digits", g.precisionDigits, "working precision for high-precision audits");
  app.add_option("--out", g.out, "artifact directory");
  app.add_flag("--serial", g.serial, "use the serial reference kernels");

  auto* vol = app.add_subcommand("volumes", "compute, cache and check volume polynomials");
  int gmax = 0, nmax = 3;
  vol->add_option("--gmax", gmax)->required()->check(CLI::Range(0, 20));
  vol->add_option("--nmax", nmax)->check(CLI::Range(0, 12));

  auto* den = app.add_subcommand("density", "length densities as CSV and SVG");
  std::string kind, csv;
  int genus = 0, samples = 0, m = 0;
  double lmax = 0;
  den->add_option("kind", kind)->required()->check(CLI::IsMember({"simple", "eight"}));
  den->add_option("--g", genus)->required();
  den->add_option("--lmax", lmax);
  den->add_option("--samples", samples);
  den->add_option("--csv", csv);
  den->add_option("--m", m, "figure-eight normalization");

  auto* ex = app.add_subcommand("expand", "1/g expansion of the pair-of-pants density");
  std::string expKind;
  int kmax = 2, gmin = 0, gmaxE = 0;
  std::vector<double> x;
  ex->add_option("kind", expKind)->required()->check(CLI::IsMember({"pants"}));
  ex->add_option("--kmax", kmax)->check(CLI::Range(0, 8));
  ex->add_option("--gmin", gmin);
  ex->add_option("--gmax", gmaxE);
  ex->add_option("--x", x)->required()->delimiter(',');

  auto* tr = app.add_subcommand("trace", "cancellation demonstration");
  std::string trKind;
  double L = 0;
  int trM = 0;
  tr->add_option("kind", trKind)->required()->check(CLI::IsMember({"cancel"}));
  tr->add_option("--L", L)->required()->check(CLI::PositiveNumber);
  tr->add_option("--m", trM)->check(CLI::Range(1, 6));

  auto* par = app.add_subcommand("params", "parameter-selection arithmetic");
  double alpha = 0, eps = 0;
  int chi2 = 100;
  par->add_option("--alpha", alpha)->required();
  par->add_option("--eps", eps)->required();
  par->add_option("--chi2", chi2, "chi+'' (no closed form; an input)")->check(CLI::PositiveNumber);

  auto* fr = app.add_subcommand("fr-check", "Friedman-Ramanujan membership of an exponential polynomial");
  std::string frText;
  int frM = 1;
  double frC = 1;
  fr->add_option("--f", frText)->required();
  fr->add_option("--m", frM)->check(CLI::Range(0, 8));
  fr->add_option("--c", frC);

  auto* ver = app.add_subcommand("verify", "run acceptance criteria");
  std::string suite = "all";
  ver->add_option("--suite", suite)->check(CLI::IsMember(suiteNames()));

  for (auto* s : app.get_subcommands({})) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    resolveConfig(g);
    if (*vol) return cmdVolumes(g, gmax, nmax);
    if (*den) {
      bool eight = kind == "eight";
      return cmdDensity(g, kind, genus, lmax > 0 ? lmax : (eight ? 10 : 6), samples > 0 ? samples : (eight ? 17 : 50),
                        csv, m > 0 ? m : g.cfg.defaultM);
    }
    if (*ex)
      return cmdExpand(g, kmax, gmin > 0 ? gmin : g.cfg.gRange.first, gmaxE > 0 ? gmaxE : g.cfg.gRange.second, x);
    if (*tr) return cmdTrace(g, L, trM > 0 ? trM : g.cfg.defaultM);
    if (*par) return cmdParams(g, alpha, eps, chi2);
    if (*fr) return cmdFrCheck(g, frText, frM, frC);
    if (*ver) return cmdVerify(g, suite, fs::canonical("/proc/self/exe").string());
  } catch (const VerificationFailure& e) {
    std::cerr << e.what() << "\n";
    return kVerify;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const fs::filesystem_error& e) {
    std::cerr << ojson{{"error", "io"}, {"detail", e.what()}}.dump() << "\n";
    return kIo;
  } catch (const IoError& e) {
    std::cerr << ojson{{"error", "io"}, {"detail", e.what()}}.dump() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << ojson{{"error", "numeric"}, {"detail", e.what()}}.dump() << "\n";
    return kVerify;
  }
  return kUsage;
}
