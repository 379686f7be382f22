// Serial reference vs OpenMP kernels for the quadrature-heavy paths.

#include "wpgap/densities.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <filesystem>

using namespace wpgap;

namespace {

VolumeTable& table() {
  static VolumeTable t(std::filesystem::temp_directory_path() / "wpgap-bench-cache");
  return t;
}

std::vector<double> grid(int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(4 + 6.0 * i / (n - 1));
  return g;
}

HPhiSpec threeFold() {
  HPhiSpec s;
  for (int i = 0; i < 3; ++i) s.fs.push_back({[](double x) { return std::sinh(x / 2); }});
  s.h = [](const std::vector<double>& x) { return x[0] + x[1] + x[2]; };
  s.dhLast = [](const std::vector<double>&) { return 1.0; };
  s.phi = [](const std::vector<double>& x) { return std::exp(-(x[0] + x[1] + x[2]) / 2); };
  s.lo = {0, 0, 0};
  s.hi = {12, 12, 12};
  return s;
}

void hPhi(benchmark::State& st, Exec exec) {
  auto spec = threeFold();
  auto g = grid(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(hPhiConvolve(spec, g, exec));
}

void eight(benchmark::State& st, Exec exec, Route route) {
  auto g = grid(static_cast<int>(st.range(0)));
  table().evaluator({3, 3});  // warm the volumes outside the timed loop
  figureEightDensity(6, route, {5}, table(), 1, EightKernel::Genus, Exec::Serial);
  for (auto _ : st) benchmark::DoNotOptimize(figureEightDensity(6, route, g, table(), 1, EightKernel::Genus, exec));
}

}  // namespace

BENCHMARK_CAPTURE(hPhi, serial, Exec::Serial)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(hPhi, parallel, Exec::Parallel)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(eight, direct_serial, Exec::Serial, Route::Direct)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(eight, direct_parallel, Exec::Parallel, Route::Direct)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(eight, cov_serial, Exec::Serial, Route::ChangeOfVariables)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(eight, cov_parallel, Exec::Parallel, Route::ChangeOfVariables)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
