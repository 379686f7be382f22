// One PASS/FAIL line per acceptance criterion. Criteria 1-10 run in process against a
// cold cache; criterion 11 runs the command-line verify twice in fresh directories.

#include "wpgap/suite.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  std::string work = (fs::temp_directory_path() / "wpgap-acceptance").string();
  bool verbose = false;
  app.add_option("--only", only, "criterion ids to run")->delimiter(',')->check(CLI::Range(1, wpgap::kCriteria));
  app.add_option("--work", work, "scratch directory, wiped first");
  app.add_flag("-v,--verbose", verbose, "print the artifact of failing criteria");
  CLI11_PARSE(app, argc, argv);

  fs::remove_all(work);
  fs::create_directories(work);
  wpgap::SuiteContext ctx;
  ctx.cacheDir = fs::path(work) / "cache";
  ctx.cliPath = WPGAP_CLI_PATH;
  ctx.scratchDir = fs::path(work) / "determinism";

  if (only.empty())
    for (int i = 1; i <= wpgap::kCriteria; ++i) only.push_back(i);
  int failed = 0;
  for (int id : only) {
    auto r = wpgap::runCriterion(id, ctx);
    if (!r.pass) ++failed;
    std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << r.name << "): " << r.summary << " ["
              << r.seconds << " s]" << std::endl;
    if (verbose && !r.pass) std::cout << r.artifact << std::endl;
  }
  std::cout << (only.size() - failed) << "/" << only.size() << " criteria pass" << std::endl;
  return failed ? 1 : 0;
}
