#include "slcp/bench.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace {

using namespace slcp;

std::string band_label(double band) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", band);
  return buf;
}

int fail_usage(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  std::cerr << "valid benchmarks:";
  for (BenchmarkId id : all_benchmarks()) std::cerr << ' ' << to_string(id);
  std::cerr << "\nvalid algorithms: sqp lsqp slcp\n";
  return 2;
}

BenchmarkId need_benchmark(const std::string& name) {
  const auto id = parse_benchmark(name);
  if (!id) throw CLI::ValidationError("unknown benchmark `" + name + "`");
  return *id;
}

Algorithm need_algorithm(const std::string& name) {
  const auto algo = parse_algorithm(name);
  if (!algo) throw CLI::ValidationError("unknown algorithm `" + name + "`");
  return *algo;
}

void print_summary(const SummaryTable& table) {
  std::printf("benchmark=%s band=%g\n", to_string(table.benchmark).c_str(),
              table.band);
  std::printf("  %-6s %8s %10s %12s %12s\n", "algo", "conv", "mean_iter",
              "vs_sqp[%]", "vs_lsqp[%]");
  for (const SummaryRow& row : table.rows) {
    std::printf("  %-6s %4d/%-4d", to_string(row.algorithm).c_str(),
                row.n_converged, row.n_trials);
    if (row.mean_iterations) {
      std::printf(" %10.2f", *row.mean_iterations);
    } else {
      std::printf(" %10s", "-");
    }
    if (row.pct_vs_sqp) {
      std::printf(" %+12.2f", *row.pct_vs_sqp);
    } else {
      std::printf(" %12s", "-");
    }
    if (row.pct_vs_lsqp) {
      std::printf(" %+12.2f", *row.pct_vs_lsqp);
    } else {
      std::printf(" %12s", "-");
    }
    std::printf("\n");
  }
}

int cmd_solve(const std::string& benchmark, const std::string& algo,
              const std::string& x0_csv, bool trace, SolveOptions opts,
              const std::string& data_dir, const std::string& history_path) {
  const BenchmarkDef def = load_benchmark(need_benchmark(benchmark), data_dir);
  opts.algorithm = need_algorithm(algo);

  Vec x0 = def.nominal_x0;
  if (!x0_csv.empty()) {
    std::vector<double> vals;
    std::stringstream ss(x0_csv);
    std::string field;
    while (std::getline(ss, field, ',')) vals.push_back(std::stod(field));
    if (static_cast<int>(vals.size()) != def.problem.num_vars()) {
      throw CLI::ValidationError(
          "--x0 needs " + std::to_string(def.problem.num_vars()) +
          " comma-separated values for " + def.name);
    }
    x0 = Eigen::Map<Vec>(vals.data(), vals.size());
  }

  if (trace) {
    opts.iteration_callback = [](const IterationRecord& r) {
      std::printf(
          "iter %3d  f=%.10e  |d|=%.3e  alpha=%.3e  merit=%.6e  "
          "viol=%.3e  |gradL|=%.3e  sub_kkt=%.2e\n",
          r.iter, r.f, r.step_norm, r.alpha, r.merit, r.max_violation,
          r.grad_lagrangian, r.sub_kkt);
    };
  }

  const SolveResult res = solve(def.problem, x0, opts);
  std::printf("benchmark:   %s\n", def.name.c_str());
  std::printf("algorithm:   %s\n", to_string(opts.algorithm).c_str());
  std::printf("termination: %s\n", to_string(res.termination).c_str());
  std::printf("iterations:  %d\n", res.iterations);
  std::printf("objective:   %.12e\n", res.f_star);
  if (def.reference) {
    std::printf("reference:   %.12e (rel gap %.3e)\n",
                def.reference->objective,
                std::abs(res.f_star - def.reference->objective) /
                    std::abs(def.reference->objective));
  }
  std::printf("x*:\n");
  for (const Variable& v : def.problem.variables) {
    std::printf("  %-14s %.10e\n", v.name.c_str(), res.x_star[v.index]);
  }
  if (!history_path.empty()) {
    write_text_file(history_path, history_csv(res));
  }
  const bool ok = res.termination == Termination::GradLagrangian ||
                  res.termination == Termination::StepSize;
  return ok ? 0 : 1;
}

int cmd_bench(const std::string& benchmark,
              const std::vector<std::string>& algos, double band, int trials,
              std::uint64_t seed, const std::string& out_dir, int jobs,
              const std::string& data_dir, SolveOptions opts) {
  const BenchmarkDef def = load_benchmark(need_benchmark(benchmark), data_dir);
  std::filesystem::create_directories(out_dir);

  std::vector<TrialSet> sets;
  for (const std::string& a : algos) {
    TrialConfig cfg;
    cfg.benchmark = def.id;
    cfg.algorithm = need_algorithm(a);
    cfg.n_trials = trials;
    cfg.band = band;
    cfg.base_seed = seed;
    cfg.options = opts;
    TrialSet ts = run_trials(def, cfg, jobs);
    const std::string path = out_dir + "/" + def.name + "_" + a + "_" +
                             band_label(band) + ".csv";
    write_text_file(path, trials_csv(ts));
    std::printf("wrote %s (%d/%d converged)\n", path.c_str(),
                ts.num_converged(), trials);
    sets.push_back(std::move(ts));
  }
  const SummaryTable table = summarize(sets);
  const std::string spath = out_dir + "/" + def.name + "_" +
                            band_label(band) + "_summary.csv";
  write_text_file(spath, summary_csv(table));
  print_summary(table);
  return 0;
}

int cmd_curves(const std::string& benchmark,
               const std::vector<std::string>& algos,
               const std::vector<double>& bands, int trials,
               std::uint64_t seed, const std::string& out_dir, int jobs,
               const std::string& data_dir, SolveOptions opts) {
  const BenchmarkDef def = load_benchmark(need_benchmark(benchmark), data_dir);
  std::filesystem::create_directories(out_dir);

  std::vector<std::pair<std::string, std::vector<std::pair<int, double>>>>
      series;
  int xmax = 1;
  for (double band : bands) {
    for (const std::string& a : algos) {
      TrialConfig cfg;
      cfg.benchmark = def.id;
      cfg.algorithm = need_algorithm(a);
      cfg.n_trials = trials;
      cfg.band = band;
      cfg.base_seed = seed;
      cfg.options = opts;
      TrialSet ts = run_trials(def, cfg, jobs);
      auto curve = convergence_curve(ts);
      for (const TrialRecord& r : ts.records) {
        if (r.converged) xmax = std::max(xmax, r.iterations);
      }
      series.emplace_back(a + " +/-" + band_label(band), std::move(curve));
    }
  }
  xmax = std::min(opts.max_iter, xmax + 5);
  // Trim trailing flat tail so the interesting region fills the plot.
  for (auto& [label, curve] : series) {
    if (static_cast<int>(curve.size()) > xmax) curve.resize(xmax);
  }
  const std::string path = out_dir + "/" + def.name + "_curves.svg";
  write_text_file(
      path, curves_svg("Probability of convergence: " + def.name, series,
                       xmax));
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

int cmd_recompute(const std::string& benchmark, bool force, double tol,
                  const std::string& data_dir) {
  std::vector<BenchmarkId> ids;
  if (benchmark == "all") {
    ids = all_benchmarks();
  } else {
    ids.push_back(need_benchmark(benchmark));
  }
  std::filesystem::create_directories(data_dir + "/references");
  for (BenchmarkId id : ids) {
    BenchmarkDef def;
    switch (id) {
      case BenchmarkId::SimpleExample:
        def = build_simple_example(data_dir);
        break;
      case BenchmarkId::Floudas: def = build_floudas(data_dir); break;
      case BenchmarkId::KirschenOzturk:
        def = build_kirschen_ozturk(data_dir);
        break;
      case BenchmarkId::Hoburg0: def = build_hoburg(0, data_dir); break;
      case BenchmarkId::Hoburg1: def = build_hoburg(1, data_dir); break;
      case BenchmarkId::Hoburg3: def = build_hoburg(3, data_dir); break;
    }
    const std::string path = data_dir + "/references/" + def.name + ".txt";
    if (std::filesystem::exists(path) && !force) {
      std::fprintf(stderr,
                   "refusing to overwrite %s without --force\n",
                   path.c_str());
      return 1;
    }

    // Coarse solve from the shipped start, then a tight polish restart.
    SolveOptions opts;
    opts.algorithm = Algorithm::SLCP;
    opts.max_iter = 2000;
    SolveResult coarse = solve(def.problem, def.nominal_x0, opts);
    SolveOptions tight = opts;
    tight.eps_gl = tol;
    tight.eps_dx = 1e-15;
    tight.subsolver.tol = std::min(1e-11, tol * 0.1);
    tight.subsolver.max_newton = 500;
    SolveResult res = solve(def.problem, coarse.x_star, tight);

    ReferenceOptimum ref;
    ref.x = res.x_star;
    ref.objective = res.f_star;
    const double viol = constraint_violation(def.problem, ref.x);
    const double stat = kkt_stationarity(def.problem, ref.x);
    std::string note =
        "generated by recompute-references; termination=" +
        to_string(res.termination) +
        ", iterations=" + std::to_string(coarse.iterations) + "+" +
        std::to_string(res.iterations) +
        ", max constraint violation=" + std::to_string(viol) +
        ", |grad L|_inf=" + std::to_string(stat);
    save_reference(def, ref, data_dir, note);
    std::printf("%s: f*=%.12e viol=%.2e |gradL|=%.2e (%s)\n",
                def.name.c_str(), ref.objective, viol, stat,
                to_string(res.termination).c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential log-convex programming toolkit"};
  app.require_subcommand(1);

  std::string data_dir = slcp::default_data_dir();
  app.add_option("--data", data_dir, "directory with constants/references");

  // Shared solver knobs.
  slcp::SolveOptions opts;
  auto add_solver_flags = [&](CLI::App* cmd) {
    cmd->add_option("--max-iter", opts.max_iter, "iteration cap");
    cmd->add_option("--eps-gl", opts.eps_gl, "Lagrangian-gradient tolerance");
    cmd->add_option("--eps-dx", opts.eps_dx, "step-size tolerance");
    cmd->add_option("--slack-weight", opts.slack_weight,
                    "sub-problem slack penalty K");
  };

  auto* list = app.add_subcommand("list", "list benchmarks and algorithms");

  auto* solve_cmd = app.add_subcommand("solve", "run one solve");
  std::string benchmark, algo = "slcp", x0_csv, history_path;
  bool trace = false;
  solve_cmd->add_option("--benchmark", benchmark, "benchmark id")->required();
  solve_cmd->add_option("--algo", algo, "sqp | lsqp | slcp");
  solve_cmd->add_option("--x0", x0_csv, "comma-separated start point");
  solve_cmd->add_flag("--trace", trace, "print per-iteration trace");
  solve_cmd->add_option("--history", history_path,
                        "write per-iteration CSV here");
  add_solver_flags(solve_cmd);

  auto* bench_cmd = app.add_subcommand("bench", "run seeded trial cells");
  std::vector<std::string> algos{"sqp", "lsqp", "slcp"};
  double band = 0.1;
  int trials = 100;
  std::uint64_t seed = 42;
  std::string out_dir = "out";
  int jobs = 0;
  bench_cmd->add_option("--benchmark", benchmark, "benchmark id")->required();
  bench_cmd->add_option("--algo", algos, "algorithms to run");
  bench_cmd->add_option("--band", band, "start band (0.1 / 0.5 / 0.8)");
  bench_cmd->add_option("--trials", trials, "trials per cell");
  bench_cmd->add_option("--seed", seed, "base seed");
  bench_cmd->add_option("--out", out_dir, "output directory");
  bench_cmd->add_option("--jobs", jobs, "parallel trial workers (0 = cores)");
  add_solver_flags(bench_cmd);

  auto* curves_cmd =
      app.add_subcommand("curves", "write convergence-curve plots");
  std::vector<double> bands{0.1, 0.5, 0.8};
  curves_cmd->add_option("--benchmark", benchmark, "benchmark id")->required();
  curves_cmd->add_option("--algo", algos, "algorithms to plot");
  curves_cmd->add_option("--band", bands, "bands to plot");
  curves_cmd->add_option("--trials", trials, "trials per cell");
  curves_cmd->add_option("--seed", seed, "base seed");
  curves_cmd->add_option("--out", out_dir, "output directory");
  curves_cmd->add_option("--jobs", jobs, "parallel trial workers");
  add_solver_flags(curves_cmd);

  auto* rec_cmd = app.add_subcommand("recompute-references",
                                     "regenerate stored optima");
  bool force = false;
  double ref_tol = 1e-12;
  std::string rec_benchmark = "all";
  rec_cmd->add_option("--benchmark", rec_benchmark, "benchmark id or `all`");
  rec_cmd->add_flag("--force", force, "overwrite existing reference files");
  rec_cmd->add_option("--tol", ref_tol, "gradient tolerance for references");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (list->parsed()) {
      std::printf("benchmarks:");
      for (slcp::BenchmarkId id : slcp::all_benchmarks()) {
        std::printf(" %s", slcp::to_string(id).c_str());
      }
      std::printf("\nalgorithms: sqp lsqp slcp\n");
      return 0;
    }
    if (solve_cmd->parsed()) {
      return cmd_solve(benchmark, algo, x0_csv, trace, opts, data_dir,
                       history_path);
    }
    if (bench_cmd->parsed()) {
      return cmd_bench(benchmark, algos, band, trials, seed, out_dir, jobs,
                       data_dir, opts);
    }
    if (curves_cmd->parsed()) {
      return cmd_curves(benchmark, algos, bands, trials, seed, out_dir, jobs,
                        data_dir, opts);
    }
    if (rec_cmd->parsed()) {
      return cmd_recompute(rec_benchmark, force, ref_tol, data_dir);
    }
  } catch (const CLI::ValidationError& e) {
    return fail_usage(e.what());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
