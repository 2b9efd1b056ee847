#pragma once

#include "slcp/transform.hpp"

#include <functional>

namespace slcp {

/// One linearized constraint row of the sub-problem, value + grad.d
/// (<= sigma for inequalities, = sigma for equalities).
struct LinearRow {
  double value = 0.0;
  Vec grad;
};

/// Convex sub-problem shared by all three outer algorithms:
///
///   minimize  1/2 d'Bd + grad0'd + K sum_i sigma_i^2
///   s.t.      lse_j(d)        <= sigma   (log-sum-exp rows, kept exact)
///             A d + b         <= sigma   (monomial rows, exact affine)
///             v + g'd         <= sigma   (linearized inequality rows)
///             v + g'd          = sigma   (linearized equality rows)
///             sigma >= 0 on inequality rows, free on equality rows.
///
/// The slacks make the sub-problem feasible even when the linearizations
/// are inconsistent. Log-sum-exp rows carry their anchor folded into q, so
/// every row is a function of the step d alone. The solver never looks at
/// which space (x or log x) the data came from.
struct SubproblemSpec {
  Vec grad0;
  Mat B;
  std::vector<LseForm> lse_cons;
  std::vector<MonoAffineForm> affine_ineq;
  std::vector<LinearRow> lin_ineq;
  std::vector<LinearRow> lin_eq;
  double slack_weight = 1e6;

  int num_vars() const { return static_cast<int>(grad0.size()); }
  int num_ineq() const {
    return static_cast<int>(lse_cons.size() + affine_ineq.size() +
                            lin_ineq.size());
  }
  int num_rows() const { return num_ineq() + static_cast<int>(lin_eq.size()); }
};

enum class SubStatus { Optimal, MaxIter, Degenerate };

/// Multipliers and slacks are ordered [lse_cons, affine_ineq, lin_ineq,
/// lin_eq]; inequality multipliers are nonnegative at Optimal.
struct SubproblemSolution {
  Vec d_y;
  Vec multipliers;
  Vec sigma;
  SubStatus status = SubStatus::MaxIter;
  double kkt_residual = std::numeric_limits<double>::infinity();
  int newton_iters = 0;
};

struct SubsolverTrace {
  int iter = 0;
  double mu = 0.0;
  double residual = 0.0;
  double min_sigma = 0.0;
};

struct SubsolverOptions {
  double tol = 1e-9;
  int max_newton = 200;
  std::function<void(const SubsolverTrace&)> trace;
};

/// Primal-dual interior-point method: log barriers on the inequality rows,
/// equality rows and their slacks eliminated into the quadratic objective,
/// barrier parameter cut 10x per outer step, Newton steps globalized by
/// residual backtracking (factor 0.5) under a 0.99 fraction-to-boundary
/// rule. B must be positive definite.
SubproblemSolution solve_subproblem(const SubproblemSpec& spec,
                                    const SubsolverOptions& opts = {});

/// Max of stationarity (inf-norm), primal and dual infeasibility, and
/// complementarity for the relaxed sub-problem at the given solution.
double kkt_residual(const SubproblemSpec& spec,
                    const SubproblemSolution& sol);

}  // namespace slcp
