#pragma once

#include "slcp/subsolver.hpp"

#include <optional>
#include <string>

namespace slcp {

enum class Algorithm { SQP, LSQP, SLCP };
enum class Termination { GradLagrangian, StepSize, MaxIter, PositivityFailure };

std::string to_string(Algorithm a);
std::string to_string(Termination t);
std::optional<Algorithm> parse_algorithm(const std::string& s);

/// Global constraint-row order: posy_ineq, mono_ineq, bb_ineq, mono_eq,
/// bb_eq. This coincides with the sub-problem's multiplier order under all
/// three algorithms, so multipliers map back one-to-one.
struct RowLayout {
  int n_posy = 0;
  int n_mono_ineq = 0;
  int n_bb_ineq = 0;
  int n_mono_eq = 0;
  int n_bb_eq = 0;

  static RowLayout of(const StandardFormProblem& p);

  int num_ineq() const { return n_posy + n_mono_ineq + n_bb_ineq; }
  int num_rows() const { return num_ineq() + n_mono_eq + n_bb_eq; }
  bool is_equality(int r) const { return r >= num_ineq(); }
  /// Posynomial or monomial rows: representable exactly in log space, and
  /// therefore excluded from the reduced Lagrangian under SLCP.
  bool is_gp_row(int r) const {
    return r < n_posy + n_mono_ineq ||
           (r >= num_ineq() && r < num_ineq() + n_mono_eq);
  }
};

/// Values and gradients of the objective and every constraint row at one
/// point, in both the raw and the log space. Log-space entries are valid
/// only when `positive` holds.
struct PointEval {
  Vec x;
  Vec y;  // log x
  double f_val = 0.0;
  double f_log = 0.0;
  Vec f_grad_x;
  Vec f_grad_y;
  Vec row_vals;
  Vec row_logs;
  std::vector<Vec> row_grads_x;
  std::vector<Vec> row_grads_y;
  bool positive = false;  // every function value strictly positive
  bool finite = false;    // evaluation succeeded with finite values
};

/// Values-only evaluation used inside the line search.
struct ValueEval {
  double f_val = 0.0;
  Vec row_vals;
  bool finite = false;
  bool positive = false;
};

PointEval evaluate_point(const StandardFormProblem& problem, const Vec& x,
                         bool with_logspace);
ValueEval evaluate_values(const StandardFormProblem& problem, const Vec& x);

struct IterateState {
  PointEval point;
  Vec mu;   // one multiplier per constraint row, global order
  Mat B;    // SPD curvature approximation in the algorithm's own space
  int iter = 0;
  /// l1 merit penalty; ratchets up with the multiplier estimates and never
  /// decreases within one solve.
  double merit_penalty = 0.0;
};

struct SolveOptions {
  Algorithm algorithm = Algorithm::SLCP;
  double eps_gl = 1e-6;   // Lagrangian-gradient tolerance (inf norm)
  double eps_dx = 1e-8;   // step-size tolerance (2-norm of dx)
  int max_iter = 500;
  double slack_weight = 1e6;
  double armijo_c1 = 1e-4;
  double backtrack_factor = 0.5;
  int max_backtracks = 30;
  SubsolverOptions subsolver;
  /// Called once per accepted iteration; feeds the CLI trace and CSV dump.
  std::function<void(const struct IterationRecord&)> iteration_callback;
};

struct IterationRecord {
  int iter = 0;
  double f = 0.0;
  double step_norm = 0.0;
  double alpha = 0.0;
  double merit = 0.0;
  double max_violation = 0.0;
  double grad_lagrangian = 0.0;
  double sub_kkt = 0.0;
  SubStatus sub_status = SubStatus::Optimal;
};

struct SolveResult {
  Vec x_star;
  double f_star = 0.0;
  int iterations = 0;
  Termination termination = Termination::MaxIter;
  double grad_lagrangian_norm = 0.0;
  std::vector<IterationRecord> history;
};

/// Iteration history as CSV (header + one row per iteration, termination
/// reason on the final row).
std::string history_csv(const SolveResult& result);

/// Outer loop shared by SQP, LSQP and SLCP: build the sub-problem at the
/// current iterate, solve it, line-search on an l1 exact-penalty merit,
/// update multipliers and the damped-BFGS curvature model, stop on a small
/// Lagrangian gradient or a small step.
SolveResult solve(const StandardFormProblem& problem, const Vec& x0,
                  const SolveOptions& opts);

/// Sub-problem assembly. SLCP keeps posynomial rows as log-sum-exp and
/// monomial rows as exact affine rows; LSQP linearizes every row in log
/// space; SQP linearizes every row in the raw space.
SubproblemSpec build_subproblem(const IterateState& state,
                                const StandardFormProblem& problem,
                                Algorithm algorithm,
                                double slack_weight = 1e6);

/// Gradient of the Lagrangian at the given evaluated point. When `reduced`
/// and the algorithm is SLCP, posynomial/monomial rows are omitted (their
/// curvature is captured exactly by the sub-problem).
Vec lagrangian_gradient(const PointEval& pt, const Vec& mu,
                        const StandardFormProblem& problem,
                        Algorithm algorithm, bool reduced);

Vec reduced_lagrangian_gradient(const IterateState& state,
                                const StandardFormProblem& problem,
                                Algorithm algorithm);

/// Damped BFGS update with the 0.2 curvature threshold; result stays
/// symmetric positive definite. Returns B unchanged when |s| < 1e-14.
Mat damped_bfgs_update(const Mat& B, const Vec& s, const Vec& z);

struct LineSearchResult {
  double alpha = 0.0;
  bool sufficient_decrease = false;
  bool positive = false;  // function values positive at the returned step
  ValueEval trial;
  double merit0 = 0.0;
  double penalty = 1.0;
};

/// Backtracking Armijo search on the l1 exact-penalty merit. For log-space
/// algorithms the step is additionally halved until every function value is
/// strictly positive. After max_backtracks failures returns alpha = 1e-10
/// with the flags telling the caller which guard failed.
LineSearchResult merit_line_search(const IterateState& state, const Vec& d,
                                   const Vec& mu_target,
                                   const StandardFormProblem& problem,
                                   const SolveOptions& opts);

enum class StepCheck { Continue, GradLagrangian, StepSize };

StepCheck check_termination(const Vec& grad_lagrangian, const Vec& d_x,
                            const SolveOptions& opts);

}  // namespace slcp
