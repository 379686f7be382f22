#include "wpgap/io.hpp"
#include "wpgap/suite.hpp"

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <string>
#include <sys/wait.h>

using namespace wpgap;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string output;
};

// Runs the CLI in dir with stdout and stderr merged.
Run cli(const fs::path& dir, const std::string& args, const std::string& env = "") {
  std::string cmd = "cd '" + dir.string() + "' && " + env + " '" WPGAP_CLI_PATH "' " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string out;
  std::array<char, 4096> buf;
  while (size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path freshDir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("wpgap-unit-cli-" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("config parsing") {
  auto c = parseConfig("# comment\ncache_dir = /tmp/x\nquadrature_tol = 1e-9\nprecision_digits = 60\ng_range = 4,8\ndefault_m = 2\n");
  CHECK(c.cacheDir == "/tmp/x");
  CHECK(c.quadratureTol == 1e-9);
  CHECK(c.precisionDigits == 60);
  CHECK(c.gRange == std::pair{4, 8});
  CHECK(c.defaultM == 2);
  CHECK(parseConfig("").quadratureTol == 1e-8);
  CHECK_THROWS_AS(parseConfig("colour = red"), std::invalid_argument);
  CHECK_THROWS_AS(parseConfig("quadrature_tol = -1"), std::invalid_argument);
  CHECK_THROWS_AS(parseConfig("precision_digits = 200"), std::invalid_argument);
  CHECK_THROWS_AS(parseConfig("default_m = 7"), std::invalid_argument);
  CHECK_THROWS_AS(parseConfig("g_range = 8,4"), std::invalid_argument);
  CHECK_THROWS_AS(parseConfig("quadrature_tol 1e-8"), std::invalid_argument);
}

TEST_CASE("environment overrides the cache dir") {
  Config c;
  setenv("WPGAP_CACHE_DIR", "/tmp/from-env", 1);
  applyEnvironment(c);
  unsetenv("WPGAP_CACHE_DIR");
  CHECK(c.cacheDir == "/tmp/from-env");
}

TEST_CASE("atomic write leaves no temporary file") {
  auto d = freshDir("atomic");
  atomicWrite(d / "a.txt", "one");
  atomicWrite(d / "a.txt", "two");
  CHECK(readFile(d / "a.txt") == "two");
  CHECK(std::distance(fs::directory_iterator(d), fs::directory_iterator{}) == 1);
  CHECK_THROWS_AS(readFile(d / "missing"), IoError);
}

TEST_CASE("csv and svg") {
  auto t = parseCsv("l,a,b\n1,2,3\n2,4,5\n");
  CHECK(t.header.size() == 3);
  CHECK(t.column(1) == std::vector<double>{2, 4});
  CHECK_THROWS(parseCsv("l,a\n1\n"));
  auto svg = renderSvg(t, {"test <plot>", false});
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("test &lt;plot&gt;") != std::string::npos);
  CHECK(svg == renderSvg(t, {"test <plot>", false}));
  CHECK(fmt(0.5) == "5.000000000000e-01");
}

TEST_CASE("tree comparison") {
  auto a = freshDir("tree-a"), b = freshDir("tree-b");
  atomicWrite(a / "x" / "f", "1");
  atomicWrite(b / "x" / "f", "1");
  CHECK(compareTrees(a, b).empty());
  atomicWrite(b / "x" / "f", "2");
  CHECK(compareTrees(a, b).size() == 1);
  atomicWrite(b / "g", "2");
  CHECK(compareTrees(a, b).size() == 2);
}

TEST_CASE("suite names") {
  CHECK(suiteCriteria("all").size() == 10);
  CHECK(suiteCriteria("determinism") == std::vector<int>{11});
  CHECK(suiteCriteria("tangles") == std::vector<int>{9});
  CHECK_THROWS(suiteCriteria("nope"));
  CHECK(criterionFileName(3).rfind("c03_", 0) == 0);
}

TEST_CASE("cli: params") {
  auto d = freshDir("params");
  auto r = cli(d, "params --alpha 0.1 --eps 0.01");
  CHECK(r.code == 0);
  auto j = readFile(d / "out" / "params.json");
  CHECK(j.find("\"K\":4") != std::string::npos);
  CHECK(j.find("\"A\":12") != std::string::npos);
  CHECK(cli(d, "params --alpha 0.7 --eps 0.01").code == 64);
}

TEST_CASE("cli: usage errors exit 64") {
  auto d = freshDir("usage");
  CHECK(cli(d, "params --bogus 1").code == 64);
  CHECK(cli(d, "frobnicate").code == 64);
  CHECK(cli(d, "--help").code == 0);
}

TEST_CASE("cli: trace cancel") {
  auto d = freshDir("trace");
  auto r = cli(d, "trace cancel --L 10 --m 1");
  CHECK(r.code == 0);
  std::set<std::string> ext;
  for (const auto& e : fs::directory_iterator(d / "out"))
    if (e.path().filename().string().rfind("trace_cancel_", 0) == 0) ext.insert(e.path().extension().string());
  CHECK(ext == std::set<std::string>{".csv", ".json", ".svg"});
}

TEST_CASE("cli: volumes are deterministic and corrupted caches are named") {
  auto d = freshDir("volumes");
  std::string env = "WPGAP_CACHE_DIR='" + (d / "cache").string() + "'";
  REQUIRE(cli(d, "--out o1 volumes --gmax 2 --nmax 2", env).code == 0);
  REQUIRE(cli(d, "--out o2 volumes --gmax 2 --nmax 2", env).code == 0);
  CHECK(compareTrees(d / "o1", d / "o2").empty());

  atomicWrite(d / "cache" / "V_1_3.json", "{\"not\": \"a volume\"");
  auto r = cli(d, "volumes --gmax 2 --nmax 2", env);
  CHECK(r.code == 2);
  CHECK(r.output.find(toString(Signature{1, 3})) != std::string::npos);
}

TEST_CASE("cli: fr-check and a module suite") {
  auto d = freshDir("frcheck");
  CHECK(cli(d, "fr-check --f 'sinh(l/2)^2' --m 1 --c 1").code == 0);
  CHECK(readFile(d / "out" / "fr_check.json").find("true") != std::string::npos);
  auto v = cli(d, "verify --suite tangles", "WPGAP_CACHE_DIR='" + (d / "cache").string() + "'");
  CHECK(v.code == 0);
  CHECK(v.output.find("PASS [9]") != std::string::npos);
  CHECK(fs::exists(d / "out" / "summary.json"));
}
