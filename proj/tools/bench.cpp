// SPDX-License-Identifier: Apache-2.0
//
// Benchmark: serial branch-and-bound GH search against the OpenMP
// root-split version on matched near-isometric pairs. The two must agree on
// every value; the parallel witness may differ.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "metriclab/gh.hpp"
#include "metriclab/random_instances.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace metriclab;

namespace {

double msSince(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
  bool quick = argc > 1 && std::string(argv[1]) == "--quick";
  std::vector<int> sizes = quick ? std::vector<int>{6, 8} : std::vector<int>{8, 10, 12, 14};
  int reps = quick ? 2 : 3;

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (OpenMP disabled)\n");
#endif
  std::printf("%6s %10s %12s %12s %9s %s\n", "n", "gh", "serial(ms)", "parallel(ms)", "speedup",
              "agree");

  int disagreements = 0;
  for (int n : sizes) {
    for (int r = 0; r < reps; ++r) {
      uint64_t seed = (uint64_t)n * 1000 + (uint64_t)r;
      MetricSpace M = random_space({n, 1.0, 3.0, seed});
      MetricSpace N = perturb_space(M, 0.05, 1.0, 3.0, seed + 7);

      auto t0 = std::chrono::steady_clock::now();
      SearchOptions serialOpt;
      serialOpt.budget = std::numeric_limits<uint64_t>::max();
      auto serial = gh_exact(M, N, serialOpt);
      double serialMs = msSince(t0);

      t0 = std::chrono::steady_clock::now();
      SearchOptions parOpt;
      parOpt.parallel = true;
      auto parallel = gh_exact(M, N, parOpt);
      double parallelMs = msSince(t0);

      bool agree = std::fabs(serial.value - parallel.value) <= 1e-12;
      if (!agree) ++disagreements;
      std::printf("%6d %10.6f %12.2f %12.2f %8.2fx %s\n", n, serial.value, serialMs, parallelMs,
                  parallelMs > 0 ? serialMs / parallelMs : 0.0, agree ? "yes" : "NO");
    }
  }
  if (disagreements) {
    std::printf("FAIL: %d value disagreements between serial and parallel search\n",
                disagreements);
    return 1;
  }
  std::printf("serial and parallel searches agree on all values\n");
  return 0;
}
