#pragma once

#include "slcp/problems.hpp"

#include <cstdint>
#include <utility>

namespace slcp {

/// One cell of the trial methodology: n_trials solves of one benchmark with
/// one algorithm, starting points drawn coordinate-wise uniform within
/// +/- band of the stored optimum (clipped to variable bounds), seeds
/// base_seed + trial.
struct TrialConfig {
  BenchmarkId benchmark{};
  Algorithm algorithm = Algorithm::SLCP;
  int n_trials = 100;
  double band = 0.10;
  std::uint64_t base_seed = 0;
  SolveOptions options;
  /// A trial counts as converged only if the solver reports success and the
  /// final objective is within this relative tolerance of the reference.
  double success_rel_tol = 1e-4;
};

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  Vec x0;
  bool converged = false;
  int iterations = 0;
  Termination termination = Termination::MaxIter;
  double f_final = 0.0;
  double wall_ms = 0.0;
};

struct TrialSet {
  TrialConfig config;
  std::vector<TrialRecord> records;

  int num_converged() const;
  double success_rate() const;
  /// Mean iterations over converged trials; absent when none converged.
  std::optional<double> mean_iterations() const;
};

/// Runs the cell with OpenMP across trials (jobs <= 0 means all cores).
/// Records land in trial order, so the result is independent of the
/// schedule and identical to the serial reference.
TrialSet run_trials(const BenchmarkDef& def, const TrialConfig& cfg,
                    int jobs = 0);

/// Plain sequential loop over the same per-trial kernel; kept as the
/// reference implementation for testing and benchmarking the parallel path.
TrialSet run_trials_serial(const BenchmarkDef& def, const TrialConfig& cfg);

/// The deterministic starting point of one trial.
Vec trial_start_point(const BenchmarkDef& def, const TrialConfig& cfg,
                      int trial);

/// Nondecreasing step curve: fraction of trials converged within k
/// iterations, for k = 1..max_iter. Empty input yields an empty curve.
std::vector<std::pair<int, double>> convergence_curve(const TrialSet& ts);

struct SummaryRow {
  Algorithm algorithm = Algorithm::SQP;
  int n_trials = 0;
  int n_converged = 0;
  std::optional<double> mean_iterations;
  std::optional<double> pct_vs_sqp;   // 100 * (mean - mean_sqp) / mean_sqp
  std::optional<double> pct_vs_lsqp;  // 100 * (mean - mean_lsqp) / mean_lsqp
};

struct SummaryTable {
  BenchmarkId benchmark{};
  double band = 0.0;
  std::vector<SummaryRow> rows;
};

/// Mean iterations among converged trials per algorithm plus percent
/// changes against the SQP and LSQP baselines when those are present.
/// All sets must share one benchmark and band.
SummaryTable summarize(const std::vector<TrialSet>& sets);

/// CSV with header `trial,seed,converged,iterations,termination,f_final,
/// wall_ms`.
std::string trials_csv(const TrialSet& ts);
std::vector<TrialRecord> parse_trials_csv(const std::string& text);

std::string summary_csv(const SummaryTable& table);

/// Static SVG of convergence curves, one polyline per labelled series.
std::string curves_svg(
    const std::string& title,
    const std::vector<std::pair<std::string,
                                std::vector<std::pair<int, double>>>>& series,
    int max_iter);

std::optional<Termination> parse_termination(const std::string& s);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace slcp
