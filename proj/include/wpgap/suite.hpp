#pragma once

#include "wpgap/frcalc.hpp"
#include "wpgap/volumes.hpp"

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace wpgap {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string summary;   // one line, may include timings
  std::string artifact;  // deterministic JSON written by verify
  double seconds = 0;
};

struct SuiteContext {
  std::filesystem::path cacheDir;
  Exec exec = Exec::Parallel;
  // Command-line binary, needed by the determinism criterion only.
  std::filesystem::path cliPath;
  std::filesystem::path scratchDir;

  VolumeTable& table();

private:
  std::unique_ptr<VolumeTable> table_;
};

inline constexpr int kCriteria = 11;

// Criterion ids for "all" (1..10; 11 runs "all" itself), a module name, or "determinism".
std::vector<int> suiteCriteria(const std::string& suite);
std::vector<std::string> suiteNames();
CriterionResult runCriterion(int id, SuiteContext& ctx);
std::string criterionFileName(int id);

// Recursive byte comparison; lists the first differences found.
std::vector<std::string> compareTrees(const std::filesystem::path& a, const std::filesystem::path& b);

}  // namespace wpgap
