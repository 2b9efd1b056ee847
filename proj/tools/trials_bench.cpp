// Compares the OpenMP trial runner against the serial reference on one
// benchmark cell: checks that both produce the same records, then reports
// wall time and speedup.

#include "slcp/bench.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace slcp;

namespace {

double run_timed(TrialSet (*runner)(const BenchmarkDef&, const TrialConfig&),
                 const BenchmarkDef& def, const TrialConfig& cfg,
                 TrialSet* out) {
  const auto t0 = std::chrono::steady_clock::now();
  *out = runner(def, cfg);
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

TrialSet run_parallel_all_cores(const BenchmarkDef& def,
                                const TrialConfig& cfg) {
  return run_trials(def, cfg, 0);
}

bool same_records(const TrialSet& a, const TrialSet& b) {
  if (a.records.size() != b.records.size()) return false;
  for (size_t i = 0; i < a.records.size(); ++i) {
    const TrialRecord &ra = a.records[i], &rb = b.records[i];
    if (ra.seed != rb.seed || ra.converged != rb.converged ||
        ra.iterations != rb.iterations || ra.termination != rb.termination ||
        ra.f_final != rb.f_final || ra.x0 != rb.x0) {
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  std::string benchmark = "floudas";
  int trials = 64;
  double band = 0.5;
  for (int i = 1; i + 1 < argc; i += 2) {
    if (!std::strcmp(argv[i], "--benchmark")) benchmark = argv[i + 1];
    if (!std::strcmp(argv[i], "--trials")) trials = std::atoi(argv[i + 1]);
    if (!std::strcmp(argv[i], "--band")) band = std::atof(argv[i + 1]);
  }

  const auto id = parse_benchmark(benchmark);
  if (!id) {
    std::fprintf(stderr, "unknown benchmark %s\n", benchmark.c_str());
    return 2;
  }
  const BenchmarkDef def = load_benchmark(*id);

  TrialConfig cfg;
  cfg.benchmark = def.id;
  cfg.algorithm = Algorithm::SLCP;
  cfg.n_trials = trials;
  cfg.band = band;
  cfg.base_seed = 20240805;

  TrialSet serial, parallel;
  const double t_serial = run_timed(run_trials_serial, def, cfg, &serial);
  const double t_parallel =
      run_timed(run_parallel_all_cores, def, cfg, &parallel);

  const bool identical = same_records(serial, parallel);
#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  std::printf("benchmark=%s trials=%d band=%g threads=%d\n",
              benchmark.c_str(), trials, band, threads);
  std::printf("serial:   %.3f s\n", t_serial);
  std::printf("parallel: %.3f s  (speedup %.2fx)\n", t_parallel,
              t_serial / t_parallel);
  std::printf("records identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
