#include "slcp/driver.hpp"

#include <cmath>
#include <sstream>

namespace slcp {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::SQP: return "sqp";
    case Algorithm::LSQP: return "lsqp";
    case Algorithm::SLCP: return "slcp";
  }
  return "?";
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::GradLagrangian: return "grad_lagrangian";
    case Termination::StepSize: return "step_size";
    case Termination::MaxIter: return "max_iter";
    case Termination::PositivityFailure: return "positivity_failure";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(const std::string& s) {
  if (s == "sqp") return Algorithm::SQP;
  if (s == "lsqp") return Algorithm::LSQP;
  if (s == "slcp") return Algorithm::SLCP;
  return std::nullopt;
}

RowLayout RowLayout::of(const StandardFormProblem& p) {
  RowLayout l;
  l.n_posy = static_cast<int>(p.posy_ineq.size());
  l.n_mono_ineq = static_cast<int>(p.mono_ineq.size());
  l.n_bb_ineq = static_cast<int>(p.bb_ineq.size());
  l.n_mono_eq = static_cast<int>(p.mono_eq.size());
  l.n_bb_eq = static_cast<int>(p.bb_eq.size());
  return l;
}

namespace {

// Applies fn(row_index, value, x_grad_fn, is_mono, exponents) over rows in
// the global order. Gradients are requested lazily so the values-only path
// stays cheap.
template <typename F>
void for_each_row(const StandardFormProblem& p, F&& fn) {
  int r = 0;
  for (const Posynomial& c : p.posy_ineq) fn(r++, c);
  for (const Monomial& c : p.mono_ineq) fn(r++, c);
  for (const BlackBoxFn& c : p.bb_ineq) fn(r++, c);
  for (const Monomial& c : p.mono_eq) fn(r++, c);
  for (const BlackBoxFn& c : p.bb_eq) fn(r++, c);
}

}  // namespace

PointEval evaluate_point(const StandardFormProblem& problem, const Vec& x,
                         bool with_logspace) {
  const int nr = problem.num_rows();
  PointEval pt;
  pt.x = x;
  pt.row_vals.resize(nr);
  pt.row_logs = Vec::Constant(nr, std::numeric_limits<double>::quiet_NaN());
  pt.row_grads_x.resize(nr);
  pt.row_grads_y.resize(nr);

  bool positive = true;
  bool finite = true;
  try {
    pt.f_val = problem.eval_objective(x);
    pt.f_grad_x = problem.objective_grad(x);
    finite = std::isfinite(pt.f_val) && pt.f_grad_x.allFinite();
    for_each_row(problem, [&](int r, const auto& c) {
      pt.row_vals[r] = c.eval(x);
      pt.row_grads_x[r] = c.grad(x);
      finite = finite && std::isfinite(pt.row_vals[r]) &&
               pt.row_grads_x[r].allFinite();
      if (!(pt.row_vals[r] > 0.0)) positive = false;
    });
  } catch (const PositivityError&) {
    pt.positive = false;
    pt.finite = false;
    return pt;
  }
  if (!(pt.f_val > 0.0)) positive = false;
  pt.finite = finite;
  pt.positive = positive && finite;

  if (with_logspace && positive) {
    pt.y = x.array().log().matrix();
    pt.f_log = std::log(pt.f_val);
    pt.f_grad_y = logspace_gradient(pt.f_val, pt.f_grad_x, x);
    pt.row_logs = pt.row_vals.array().log().matrix();
    int r = 0;
    for (const Posynomial& c : problem.posy_ineq) {
      (void)c;
      pt.row_grads_y[r] =
          logspace_gradient(pt.row_vals[r], pt.row_grads_x[r], x);
      ++r;
    }
    // Monomial rows are affine in log space: the gradient is the exponent
    // vector, exactly and everywhere.
    for (const Monomial& c : problem.mono_ineq) pt.row_grads_y[r++] = c.exponents;
    for (const BlackBoxFn& c : problem.bb_ineq) {
      (void)c;
      pt.row_grads_y[r] =
          logspace_gradient(pt.row_vals[r], pt.row_grads_x[r], x);
      ++r;
    }
    for (const Monomial& c : problem.mono_eq) pt.row_grads_y[r++] = c.exponents;
    for (const BlackBoxFn& c : problem.bb_eq) {
      (void)c;
      pt.row_grads_y[r] =
          logspace_gradient(pt.row_vals[r], pt.row_grads_x[r], x);
      ++r;
    }
  } else if (with_logspace) {
    pt.y = x.array().log().matrix();
  }
  return pt;
}

ValueEval evaluate_values(const StandardFormProblem& problem, const Vec& x) {
  ValueEval ev;
  ev.row_vals.resize(problem.num_rows());
  try {
    ev.f_val = problem.eval_objective(x);
    bool finite = std::isfinite(ev.f_val);
    bool positive = ev.f_val > 0.0;
    for_each_row(problem, [&](int r, const auto& c) {
      ev.row_vals[r] = c.eval(x);
      finite = finite && std::isfinite(ev.row_vals[r]);
      positive = positive && ev.row_vals[r] > 0.0;
    });
    ev.finite = finite;
    ev.positive = finite && positive;
  } catch (const PositivityError&) {
    ev.finite = false;
    ev.positive = false;
  }
  return ev;
}

namespace {

double row_violation(double value, bool equality, bool logspace) {
  const double c = logspace ? std::log(value) : value - 1.0;
  return equality ? std::abs(c) : std::max(0.0, c);
}

double total_violation(const Vec& row_vals, const RowLayout& layout,
                       bool logspace) {
  double v = 0.0;
  for (int r = 0; r < layout.num_rows(); ++r) {
    v += row_violation(row_vals[r], layout.is_equality(r), logspace);
  }
  return v;
}

double max_violation(const Vec& row_vals, const RowLayout& layout,
                     bool logspace) {
  double v = 0.0;
  for (int r = 0; r < layout.num_rows(); ++r) {
    v = std::max(v,
                 row_violation(row_vals[r], layout.is_equality(r), logspace));
  }
  return v;
}

double merit_value(double f_val, const Vec& row_vals, const RowLayout& layout,
                   bool logspace, double penalty) {
  const double obj = logspace ? std::log(f_val) : f_val;
  return obj + penalty * total_violation(row_vals, layout, logspace);
}

}  // namespace

SubproblemSpec build_subproblem(const IterateState& state,
                                const StandardFormProblem& problem,
                                Algorithm algorithm, double slack_weight) {
  const PointEval& pt = state.point;
  const RowLayout layout = RowLayout::of(problem);
  SubproblemSpec spec;
  spec.B = state.B;
  spec.slack_weight = slack_weight;

  if (algorithm == Algorithm::SQP) {
    spec.grad0 = pt.f_grad_x;
    for (int r = 0; r < layout.num_rows(); ++r) {
      LinearRow row{pt.row_vals[r] - 1.0, pt.row_grads_x[r]};
      if (layout.is_equality(r)) {
        spec.lin_eq.push_back(std::move(row));
      } else {
        spec.lin_ineq.push_back(std::move(row));
      }
    }
    return spec;
  }

  spec.grad0 = pt.f_grad_y;
  if (algorithm == Algorithm::LSQP) {
    for (int r = 0; r < layout.num_rows(); ++r) {
      LinearRow row{pt.row_logs[r], pt.row_grads_y[r]};
      if (layout.is_equality(r)) {
        spec.lin_eq.push_back(std::move(row));
      } else {
        spec.lin_ineq.push_back(std::move(row));
      }
    }
    return spec;
  }

  // SLCP: posynomials stay log-sum-exp, monomial inequalities stay affine,
  // monomial equalities are affine so their "linearization" is exact, and
  // only genuine black boxes are linearized.
  for (const Posynomial& p : problem.posy_ineq) {
    LseForm f = posynomial_to_lse(p);
    f.q += f.P * pt.y;  // fold the anchor: rows become functions of d
    spec.lse_cons.push_back(std::move(f));
  }
  for (const Monomial& m : problem.mono_ineq) {
    MonoAffineForm f = monomial_to_affine(m);
    f.b += f.A.dot(pt.y);
    spec.affine_ineq.push_back(std::move(f));
  }
  int r = layout.n_posy + layout.n_mono_ineq;
  for (size_t i = 0; i < problem.bb_ineq.size(); ++i, ++r) {
    spec.lin_ineq.push_back(LinearRow{pt.row_logs[r], pt.row_grads_y[r]});
  }
  for (size_t i = 0; i < problem.mono_eq.size(); ++i, ++r) {
    spec.lin_eq.push_back(LinearRow{pt.row_logs[r], pt.row_grads_y[r]});
  }
  for (size_t i = 0; i < problem.bb_eq.size(); ++i, ++r) {
    spec.lin_eq.push_back(LinearRow{pt.row_logs[r], pt.row_grads_y[r]});
  }
  return spec;
}

Vec lagrangian_gradient(const PointEval& pt, const Vec& mu,
                        const StandardFormProblem& problem,
                        Algorithm algorithm, bool reduced) {
  const RowLayout layout = RowLayout::of(problem);
  Vec g = (algorithm == Algorithm::SQP) ? pt.f_grad_x : pt.f_grad_y;
  for (int r = 0; r < layout.num_rows(); ++r) {
    if (reduced && algorithm == Algorithm::SLCP && layout.is_gp_row(r)) {
      continue;
    }
    g += mu[r] * ((algorithm == Algorithm::SQP) ? pt.row_grads_x[r]
                                                : pt.row_grads_y[r]);
  }
  return g;
}

Vec reduced_lagrangian_gradient(const IterateState& state,
                                const StandardFormProblem& problem,
                                Algorithm algorithm) {
  return lagrangian_gradient(state.point, state.mu, problem, algorithm,
                             /*reduced=*/true);
}

Mat damped_bfgs_update(const Mat& B, const Vec& s, const Vec& z) {
  if (s.norm() < 1e-14) return B;
  const Vec bs = B * s;
  const double sbs = s.dot(bs);
  if (!(sbs > 0.0) || !std::isfinite(sbs)) return B;
  const double sz = s.dot(z);

  double theta = 1.0;
  if (sz < 0.2 * sbs) theta = 0.8 * sbs / (sbs - sz);
  const Vec r = theta * z + (1.0 - theta) * bs;
  const double sr = s.dot(r);  // equals 0.2*sbs in the damped branch
  if (!(sr > 0.0) || !std::isfinite(sr)) return B;

  Mat next = B - (bs * bs.transpose()) / sbs + (r * r.transpose()) / sr;
  next = 0.5 * (next + next.transpose());
  return next;
}

LineSearchResult merit_line_search(const IterateState& state, const Vec& d,
                                   const Vec& mu_target,
                                   const StandardFormProblem& problem,
                                   const SolveOptions& opts) {
  const bool logspace = opts.algorithm != Algorithm::SQP;
  const RowLayout layout = RowLayout::of(problem);
  const PointEval& pt = state.point;

  LineSearchResult out;
  out.penalty = std::max({state.merit_penalty,
                          mu_target.size()
                              ? 1.1 * mu_target.cwiseAbs().maxCoeff()
                              : 0.0,
                          1e-8});

  const double viol0 = total_violation(pt.row_vals, layout, logspace);
  const double phi0 = merit_value(pt.f_val, pt.row_vals, layout, logspace,
                                  out.penalty);
  const Vec& obj_grad = logspace ? pt.f_grad_y : pt.f_grad_x;
  const double descent = obj_grad.dot(d) - out.penalty * viol0;
  out.merit0 = phi0;

  auto trial_point = [&](double a) -> Vec {
    if (logspace) return (pt.y + a * d).array().exp().matrix();
    return pt.x + a * d;
  };

  double alpha = 1.0;
  for (int bt = 0; bt < opts.max_backtracks; ++bt) {
    ValueEval trial = evaluate_values(problem, trial_point(alpha));
    if (trial.finite && (!logspace || trial.positive)) {
      const double phi = merit_value(trial.f_val, trial.row_vals, layout,
                                     logspace, out.penalty);
      const bool ok = (descent < 0.0)
                          ? phi <= phi0 + opts.armijo_c1 * alpha * descent
                          : phi < phi0;
      if (ok) {
        out.alpha = alpha;
        out.sufficient_decrease = true;
        out.positive = true;
        out.trial = std::move(trial);
        return out;
      }
    }
    alpha *= opts.backtrack_factor;
  }

  // Give up on decrease; report the smallest usable step, if there is one.
  out.alpha = 1e-10;
  out.trial = evaluate_values(problem, trial_point(out.alpha));
  out.sufficient_decrease = false;
  out.positive = out.trial.finite && (!logspace || out.trial.positive);
  return out;
}

StepCheck check_termination(const Vec& grad_lagrangian, const Vec& d_x,
                            const SolveOptions& opts) {
  const double gl =
      grad_lagrangian.size() ? grad_lagrangian.cwiseAbs().maxCoeff() : 0.0;
  if (gl < opts.eps_gl) return StepCheck::GradLagrangian;
  if (d_x.norm() < opts.eps_dx) return StepCheck::StepSize;
  return StepCheck::Continue;
}

SolveResult solve(const StandardFormProblem& problem, const Vec& x0,
                  const SolveOptions& opts) {
  const bool logspace = opts.algorithm != Algorithm::SQP;
  const RowLayout layout = RowLayout::of(problem);
  const int n = problem.num_vars();
  const int nr = layout.num_rows();

  SolveResult result;
  result.x_star = x0;

  IterateState state;
  state.point = evaluate_point(problem, x0, logspace);
  state.mu = Vec::Ones(nr);
  state.B = Mat::Identity(n, n);

  if (logspace && !state.point.positive) {
    result.termination = Termination::PositivityFailure;
    result.f_star = state.point.f_val;
    return result;
  }
  if (!logspace && !state.point.finite) {
    result.termination = Termination::PositivityFailure;
    return result;
  }
  result.f_star = state.point.f_val;

  for (int k = 0; k < opts.max_iter; ++k) {
    SubproblemSpec spec =
        build_subproblem(state, problem, opts.algorithm, opts.slack_weight);
    spec.slack_weight = opts.slack_weight;
    SubproblemSolution sub = solve_subproblem(spec, opts.subsolver);
    result.iterations = k + 1;
    if (!sub.d_y.allFinite()) {
      result.termination = Termination::MaxIter;
      result.x_star = state.point.x;
      result.f_star = state.point.f_val;
      return result;
    }

    LineSearchResult ls =
        merit_line_search(state, sub.d_y, sub.multipliers, problem, opts);
    if (!ls.positive) {
      result.termination = Termination::PositivityFailure;
      result.x_star = state.point.x;
      result.f_star = state.point.f_val;
      return result;
    }
    state.merit_penalty = ls.penalty;

    const Vec x_new = logspace
                          ? (state.point.y + ls.alpha * sub.d_y)
                                .array()
                                .exp()
                                .matrix()
                          : Vec(state.point.x + ls.alpha * sub.d_y);
    PointEval pt_new = evaluate_point(problem, x_new, logspace);
    if ((logspace && !pt_new.positive) || !pt_new.finite) {
      result.termination = Termination::PositivityFailure;
      result.x_star = state.point.x;
      result.f_star = state.point.f_val;
      return result;
    }

    Vec mu_new = state.mu + ls.alpha * (sub.multipliers - state.mu);
    for (int r = 0; r < layout.num_ineq(); ++r) {
      mu_new[r] = std::max(mu_new[r], 0.0);
    }

    const Vec grad_l =
        lagrangian_gradient(pt_new, mu_new, problem, opts.algorithm, false);
    const Vec d_x = pt_new.x - state.point.x;

    IterationRecord rec;
    rec.iter = k + 1;
    rec.f = pt_new.f_val;
    rec.step_norm = ls.alpha * sub.d_y.norm();
    rec.alpha = ls.alpha;
    rec.merit = merit_value(pt_new.f_val, pt_new.row_vals, layout, logspace,
                            ls.penalty);
    rec.max_violation = max_violation(pt_new.row_vals, layout, logspace);
    rec.grad_lagrangian = grad_l.cwiseAbs().maxCoeff();
    rec.sub_kkt = sub.kkt_residual;
    rec.sub_status = sub.status;
    result.history.push_back(rec);
    if (opts.iteration_callback) opts.iteration_callback(rec);

    const StepCheck check = check_termination(grad_l, d_x, opts);
    if (check != StepCheck::Continue) {
      result.x_star = pt_new.x;
      result.f_star = pt_new.f_val;
      result.grad_lagrangian_norm = rec.grad_lagrangian;
      result.termination = (check == StepCheck::GradLagrangian)
                               ? Termination::GradLagrangian
                               : Termination::StepSize;
      return result;
    }

    // BFGS pair: step in the algorithm's own space, gradient difference of
    // the (reduced) Lagrangian at the new multipliers.
    const Vec z =
        lagrangian_gradient(pt_new, mu_new, problem, opts.algorithm, true) -
        lagrangian_gradient(state.point, mu_new, problem, opts.algorithm,
                            true);
    const Vec s = logspace ? Vec(pt_new.y - state.point.y) : d_x;
    state.B = damped_bfgs_update(state.B, s, z);

    state.point = std::move(pt_new);
    state.mu = std::move(mu_new);
    state.iter = k + 1;
    result.x_star = state.point.x;
    result.f_star = state.point.f_val;
    result.grad_lagrangian_norm = rec.grad_lagrangian;
  }

  result.termination = Termination::MaxIter;
  return result;
}

std::string history_csv(const SolveResult& result) {
  std::ostringstream os;
  os << "iter,f,step_norm,alpha,merit,max_violation,termination\n";
  os.precision(17);
  for (size_t i = 0; i < result.history.size(); ++i) {
    const IterationRecord& r = result.history[i];
    os << r.iter << ',' << r.f << ',' << r.step_norm << ',' << r.alpha << ','
       << r.merit << ',' << r.max_violation << ',';
    if (i + 1 == result.history.size()) os << to_string(result.termination);
    os << '\n';
  }
  return os.str();
}

}  // namespace slcp
