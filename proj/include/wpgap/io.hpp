#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wpgap {

struct Config {
  std::filesystem::path cacheDir = "wpgap-cache";
  double quadratureTol = 1e-8;
  int precisionDigits = 50;
  std::pair<int, int> gRange{6, 12};
  int defaultM = 1;

  static constexpr int kMaxPrecisionDigits = 100;  // compiled working precision of the audits
  // Throws invalid_argument on a non-positive tolerance, precision outside [30, 100],
  // an empty g range or m outside [1, 6].
  void validate() const;
};

// Line-based "key = value" file; '#' starts a comment. Unknown keys are errors.
Config parseConfig(const std::string& text, Config base = {});
Config loadConfig(const std::filesystem::path& file, Config base = {});
// WPGAP_CACHE_DIR replaces cache_dir when set.
void applyEnvironment(Config& c);

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Write to a sibling temporary file, then rename over the target.
void atomicWrite(const std::filesystem::path& file, const std::string& content);
std::string readFile(const std::filesystem::path& file);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<double> column(size_t i) const;
};
CsvTable parseCsv(const std::string& text);

struct PlotOptions {
  std::string title;
  bool logY = false;
  int width = 640, height = 400;
};
// Static SVG 1.1 line plot: first column on x, every other column as a series.
std::string renderSvg(const CsvTable& t, const PlotOptions& opt);

// Fixed-format number for CSV output, identical across runs.
std::string fmt(double x);

}  // namespace wpgap
