#include "slcp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace slcp {

int TrialSet::num_converged() const {
  int n = 0;
  for (const TrialRecord& r : records) n += r.converged ? 1 : 0;
  return n;
}

double TrialSet::success_rate() const {
  if (records.empty()) return 0.0;
  return static_cast<double>(num_converged()) /
         static_cast<double>(records.size());
}

std::optional<double> TrialSet::mean_iterations() const {
  double sum = 0.0;
  int n = 0;
  for (const TrialRecord& r : records) {
    if (r.converged) {
      sum += r.iterations;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

namespace {

// Uniform double in [0, 1) from the top 53 bits of a fully specified
// generator, so trial draws reproduce across platforms.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

TrialRecord run_one_trial(const BenchmarkDef& def, const TrialConfig& cfg,
                          int trial) {
  TrialRecord rec;
  rec.trial = trial;
  rec.seed = cfg.base_seed + static_cast<std::uint64_t>(trial);
  rec.x0 = trial_start_point(def, cfg, trial);

  SolveOptions opts = cfg.options;
  opts.algorithm = cfg.algorithm;
  opts.iteration_callback = nullptr;  // per-iteration hooks are not shared

  const auto t0 = std::chrono::steady_clock::now();
  const SolveResult res = solve(def.problem, rec.x0, opts);
  const auto t1 = std::chrono::steady_clock::now();
  rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  rec.iterations = res.iterations;
  rec.termination = res.termination;
  rec.f_final = res.f_star;
  const bool solver_ok = res.termination == Termination::GradLagrangian ||
                         res.termination == Termination::StepSize;
  const double f_ref = def.reference->objective;
  rec.converged = solver_ok &&
                  std::abs(res.f_star - f_ref) <=
                      cfg.success_rel_tol * std::abs(f_ref);
  return rec;
}

}  // namespace

Vec trial_start_point(const BenchmarkDef& def, const TrialConfig& cfg,
                      int trial) {
  if (!def.reference) {
    throw std::runtime_error("benchmark " + def.name +
                             " has no reference optimum; run "
                             "recompute-references first");
  }
  std::mt19937_64 rng(cfg.base_seed + static_cast<std::uint64_t>(trial));
  const Vec& star = def.reference->x;
  Vec x0(star.size());
  for (Eigen::Index i = 0; i < star.size(); ++i) {
    const double u = uniform01(rng);
    const double factor = 1.0 - cfg.band + 2.0 * cfg.band * u;
    const Variable& v = def.problem.variables[static_cast<size_t>(i)];
    x0[i] = std::clamp(star[i] * factor, v.lower, v.upper);
  }
  return x0;
}

TrialSet run_trials_serial(const BenchmarkDef& def, const TrialConfig& cfg) {
  TrialSet ts;
  ts.config = cfg;
  ts.records.resize(cfg.n_trials);
  for (int t = 0; t < cfg.n_trials; ++t) {
    ts.records[t] = run_one_trial(def, cfg, t);
  }
  return ts;
}

TrialSet run_trials(const BenchmarkDef& def, const TrialConfig& cfg,
                    int jobs) {
  TrialSet ts;
  ts.config = cfg;
  ts.records.resize(cfg.n_trials);
#ifdef _OPENMP
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int t = 0; t < cfg.n_trials; ++t) {
    ts.records[t] = run_one_trial(def, cfg, t);
  }
#else
  (void)jobs;
  for (int t = 0; t < cfg.n_trials; ++t) {
    ts.records[t] = run_one_trial(def, cfg, t);
  }
#endif
  return ts;
}

std::vector<std::pair<int, double>> convergence_curve(const TrialSet& ts) {
  std::vector<std::pair<int, double>> curve;
  if (ts.records.empty()) return curve;
  const int max_iter = ts.config.options.max_iter;
  std::vector<int> converged_at(max_iter + 2, 0);
  for (const TrialRecord& r : ts.records) {
    if (r.converged && r.iterations <= max_iter) {
      converged_at[std::max(1, r.iterations)] += 1;
    }
  }
  curve.reserve(max_iter);
  double cum = 0.0;
  const double n = static_cast<double>(ts.records.size());
  for (int k = 1; k <= max_iter; ++k) {
    cum += converged_at[k];
    curve.emplace_back(k, cum / n);
  }
  return curve;
}

SummaryTable summarize(const std::vector<TrialSet>& sets) {
  if (sets.empty()) throw std::invalid_argument("summarize: no trial sets");
  SummaryTable table;
  table.benchmark = sets.front().config.benchmark;
  table.band = sets.front().config.band;
  for (const TrialSet& ts : sets) {
    if (ts.config.benchmark != table.benchmark ||
        ts.config.band != table.band) {
      throw std::invalid_argument(
          "summarize: sets must share one benchmark and band");
    }
  }

  std::optional<double> mean_sqp, mean_lsqp;
  for (const TrialSet& ts : sets) {
    if (ts.config.algorithm == Algorithm::SQP) mean_sqp = ts.mean_iterations();
    if (ts.config.algorithm == Algorithm::LSQP) {
      mean_lsqp = ts.mean_iterations();
    }
  }

  for (const TrialSet& ts : sets) {
    SummaryRow row;
    row.algorithm = ts.config.algorithm;
    row.n_trials = static_cast<int>(ts.records.size());
    row.n_converged = ts.num_converged();
    row.mean_iterations = ts.mean_iterations();
    if (row.mean_iterations) {
      if (mean_sqp && ts.config.algorithm != Algorithm::SQP) {
        row.pct_vs_sqp = 100.0 * (*row.mean_iterations - *mean_sqp) / *mean_sqp;
      }
      if (mean_lsqp && ts.config.algorithm == Algorithm::SLCP) {
        row.pct_vs_lsqp =
            100.0 * (*row.mean_iterations - *mean_lsqp) / *mean_lsqp;
      }
    }
    table.rows.push_back(row);
  }
  return table;
}

std::string trials_csv(const TrialSet& ts) {
  std::ostringstream os;
  os.precision(17);
  os << "trial,seed,converged,iterations,termination,f_final,wall_ms\n";
  for (const TrialRecord& r : ts.records) {
    os << r.trial << ',' << r.seed << ',' << (r.converged ? 1 : 0) << ','
       << r.iterations << ',' << to_string(r.termination) << ',' << r.f_final
       << ',' << r.wall_ms << '\n';
  }
  return os.str();
}

std::optional<Termination> parse_termination(const std::string& s) {
  for (Termination t :
       {Termination::GradLagrangian, Termination::StepSize,
        Termination::MaxIter, Termination::PositivityFailure}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

std::vector<TrialRecord> parse_trials_csv(const std::string& text) {
  std::vector<TrialRecord> records;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    TrialRecord r;
    std::getline(ls, field, ',');
    r.trial = std::stoi(field);
    std::getline(ls, field, ',');
    r.seed = std::stoull(field);
    std::getline(ls, field, ',');
    r.converged = field == "1";
    std::getline(ls, field, ',');
    r.iterations = std::stoi(field);
    std::getline(ls, field, ',');
    if (auto t = parse_termination(field)) r.termination = *t;
    std::getline(ls, field, ',');
    r.f_final = std::stod(field);
    std::getline(ls, field, ',');
    r.wall_ms = std::stod(field);
    records.push_back(std::move(r));
  }
  return records;
}

std::string summary_csv(const SummaryTable& table) {
  std::ostringstream os;
  os.precision(10);
  os << "benchmark,band,algorithm,n_trials,n_converged,mean_iterations,"
        "pct_vs_sqp,pct_vs_lsqp\n";
  for (const SummaryRow& row : table.rows) {
    os << to_string(table.benchmark) << ',' << table.band << ','
       << to_string(row.algorithm) << ',' << row.n_trials << ','
       << row.n_converged << ',';
    if (row.mean_iterations) os << *row.mean_iterations;
    os << ',';
    if (row.pct_vs_sqp) os << *row.pct_vs_sqp;
    os << ',';
    if (row.pct_vs_lsqp) os << *row.pct_vs_lsqp;
    os << '\n';
  }
  return os.str();
}

std::string curves_svg(
    const std::string& title,
    const std::vector<std::pair<std::string,
                                std::vector<std::pair<int, double>>>>& series,
    int max_iter) {
  const int width = 760, height = 480;
  const int ml = 60, mr = 20, mt = 40, mb = 50;
  const double pw = width - ml - mr, ph = height - mt - mb;
  const double xmax = std::max(1, max_iter);
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                           "#9467bd", "#ff7f0e", "#8c564b"};

  auto sx = [&](double it) { return ml + pw * (it / xmax); };
  auto sy = [&](double frac) { return mt + ph * (1.0 - frac); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
     << height << "\">\n";
  os << "<rect width=\"" << width << "\" height=\"" << height
     << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"16\">"
     << title << "</text>\n";

  // Axes and gridlines.
  for (int i = 0; i <= 5; ++i) {
    const double frac = i / 5.0;
    os << "<line x1=\"" << ml << "\" y1=\"" << sy(frac) << "\" x2=\""
       << width - mr << "\" y2=\"" << sy(frac)
       << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << sy(frac) + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
          "font-size=\"11\">"
       << frac << "</text>\n";
  }
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
     << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
     << width - mr << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double it = xmax * i / 5.0;
    os << "<text x=\"" << sx(it) << "\" y=\"" << height - mb + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"11\">"
       << static_cast<int>(it) << "</text>\n";
  }
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"13\">iterations</text>\n";
  os << "<text x=\"16\" y=\"" << mt + ph / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"13\" transform=\"rotate(-90 16 "
     << mt + ph / 2 << ")\">fraction converged</text>\n";

  int color = 0;
  int legend_y = mt + 10;
  for (const auto& [label, curve] : series) {
    const char* stroke = palette[color % 6];
    os << "<polyline fill=\"none\" stroke=\"" << stroke
       << "\" stroke-width=\"1.8\" points=\"";
    double prev = 0.0;
    os << sx(0) << ',' << sy(0.0) << ' ';
    for (const auto& [it, frac] : curve) {
      // Step function: hold the previous level, then jump.
      os << sx(it) << ',' << sy(prev) << ' ';
      os << sx(it) << ',' << sy(frac) << ' ';
      prev = frac;
    }
    os << "\"/>\n";
    os << "<line x1=\"" << width - mr - 150 << "\" y1=\"" << legend_y
       << "\" x2=\"" << width - mr - 120 << "\" y2=\"" << legend_y
       << "\" stroke=\"" << stroke << "\" stroke-width=\"3\"/>\n";
    os << "<text x=\"" << width - mr - 112 << "\" y=\"" << legend_y + 4
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << label
       << "</text>\n";
    legend_y += 18;
    ++color;
  }
  os << "</svg>\n";
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace slcp
