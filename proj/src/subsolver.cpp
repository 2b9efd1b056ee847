#include "slcp/subsolver.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace slcp {

namespace {

struct IneqEval {
  Vec c;                // row values at d
  std::vector<Vec> g;   // row gradients at d
};

// Values and gradients of every inequality row at d. Gradients of affine
// and linear rows never change; they are still collected here so the Newton
// assembly can treat all rows uniformly.
IneqEval eval_ineq(const SubproblemSpec& spec, const Vec& d) {
  IneqEval ev;
  const int m = spec.num_ineq();
  ev.c.resize(m);
  ev.g.resize(m);
  int r = 0;
  for (const LseForm& f : spec.lse_cons) {
    LseEval le = lse_eval(f, d, /*with_hessian=*/false);
    ev.c[r] = le.value;
    ev.g[r] = std::move(le.grad);
    ++r;
  }
  for (const MonoAffineForm& f : spec.affine_ineq) {
    ev.c[r] = f.A.dot(d) + f.b;
    ev.g[r] = f.A.transpose();
    ++r;
  }
  for (const LinearRow& row : spec.lin_ineq) {
    ev.c[r] = row.value + row.grad.dot(d);
    ev.g[r] = row.grad;
    ++r;
  }
  return ev;
}

// Gradient of the objective with the equality rows eliminated:
// Bd + grad0 + sum_j 2K e_j(d) a_j.
Vec objective_grad(const SubproblemSpec& spec, const Vec& d) {
  Vec g = spec.B * d + spec.grad0;
  const double k2 = 2.0 * spec.slack_weight;
  for (const LinearRow& row : spec.lin_eq) {
    g += k2 * (row.value + row.grad.dot(d)) * row.grad;
  }
  return g;
}

struct Residuals {
  Vec rd, rs, rlam, reta;

  double sup_norm() const {
    double v = rd.size() ? rd.cwiseAbs().maxCoeff() : 0.0;
    if (rs.size()) v = std::max(v, rs.cwiseAbs().maxCoeff());
    if (rlam.size()) v = std::max(v, rlam.cwiseAbs().maxCoeff());
    if (reta.size()) v = std::max(v, reta.cwiseAbs().maxCoeff());
    return v;
  }
};

Residuals residuals(const SubproblemSpec& spec, const Vec& d,
                    const IneqEval& ev, const Vec& s, const Vec& lam,
                    const Vec& eta, double mu) {
  const int m = spec.num_ineq();
  Residuals r;
  r.rd = objective_grad(spec, d);
  for (int i = 0; i < m; ++i) r.rd += lam[i] * ev.g[i];
  r.rs = 2.0 * spec.slack_weight * s - lam - eta;
  r.rlam = (lam.array() * (s - ev.c).array() - mu).matrix();
  r.reta = (eta.array() * s.array() - mu).matrix();
  return r;
}

double max_step(const Vec& v, const Vec& dv, double frac) {
  double a = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv[i] < 0.0) a = std::min(a, -frac * v[i] / dv[i]);
  }
  return a;
}

}  // namespace

double kkt_residual(const SubproblemSpec& spec,
                    const SubproblemSolution& sol) {
  const int m = spec.num_ineq();
  const int ne = static_cast<int>(spec.lin_eq.size());
  const Vec& d = sol.d_y;
  const double k2 = 2.0 * spec.slack_weight;

  IneqEval ev = eval_ineq(spec, d);
  double res = 0.0;

  // Stationarity in d over the full Lagrangian of the relaxed problem.
  Vec rd = spec.B * d + spec.grad0;
  for (int i = 0; i < m; ++i) rd += sol.multipliers[i] * ev.g[i];
  for (int j = 0; j < ne; ++j) {
    rd += sol.multipliers[m + j] * spec.lin_eq[j].grad;
  }
  res = rd.size() ? rd.cwiseAbs().maxCoeff() : 0.0;

  for (int i = 0; i < m; ++i) {
    const double lam = sol.multipliers[i];
    const double sig = sol.sigma[i];
    const double eta = k2 * sig - lam;  // sigma-stationarity defines eta
    res = std::max(res, ev.c[i] - sig);          // primal c <= sigma
    res = std::max(res, -sig);                   // primal sigma >= 0
    res = std::max(res, -lam);                   // dual
    res = std::max(res, -eta);                   // dual
    res = std::max(res, std::abs(lam * (sig - ev.c[i])));  // complementarity
    res = std::max(res, std::abs(eta * sig));
  }
  for (int j = 0; j < ne; ++j) {
    const LinearRow& row = spec.lin_eq[j];
    const double e = row.value + row.grad.dot(d);
    res = std::max(res, std::abs(e - sol.sigma[m + j]));
    res = std::max(res, std::abs(k2 * sol.sigma[m + j] -
                                 sol.multipliers[m + j]));
  }
  return res;
}

SubproblemSolution solve_subproblem(const SubproblemSpec& spec,
                                    const SubsolverOptions& opts) {
  const int n = spec.num_vars();
  const int m = spec.num_ineq();
  const int ne = static_cast<int>(spec.lin_eq.size());
  const double kw = spec.slack_weight;
  const double k2 = 2.0 * kw;

  SubproblemSolution sol;

  // Curvature of the eliminated equality penalty is constant; precompute.
  Mat base = spec.B;
  for (const LinearRow& row : spec.lin_eq) {
    base += k2 * row.grad * row.grad.transpose();
  }

  auto finish = [&](const Vec& d, const Vec& lam, const Vec& s, int iters,
                    SubStatus status) {
    sol.d_y = d;
    sol.multipliers.resize(m + ne);
    sol.sigma.resize(m + ne);
    for (int i = 0; i < m; ++i) {
      sol.multipliers[i] = lam[i];
      sol.sigma[i] = s[i];
    }
    for (int j = 0; j < ne; ++j) {
      const double e = spec.lin_eq[j].value + spec.lin_eq[j].grad.dot(d);
      sol.sigma[m + j] = e;
      sol.multipliers[m + j] = k2 * e;
    }
    sol.status = status;
    sol.newton_iters = iters;
  };

  if (m == 0) {
    // Pure equality-penalized quadratic: one linear solve.
    Eigen::LLT<Mat> llt(base);
    if (llt.info() != Eigen::Success) {
      Mat reg = base + 1e-10 * Mat::Identity(n, n);
      llt.compute(reg);
      if (llt.info() != Eigen::Success) {
        finish(Vec::Zero(n), Vec(), Vec(), 0, SubStatus::Degenerate);
        sol.kkt_residual = kkt_residual(spec, sol);
        return sol;
      }
    }
    Vec rhs = -spec.grad0;
    for (const LinearRow& row : spec.lin_eq) rhs -= k2 * row.value * row.grad;
    const Vec d = llt.solve(rhs);
    finish(d, Vec(), Vec(), 1, SubStatus::Optimal);
    sol.kkt_residual = kkt_residual(spec, sol);
    if (sol.kkt_residual > opts.tol) sol.status = SubStatus::Degenerate;
    return sol;
  }

  // Strictly interior start: d = 0, slacks clear of both barriers.
  Vec d = Vec::Zero(n);
  IneqEval ev = eval_ineq(spec, d);
  Vec s(m);
  for (int i = 0; i < m; ++i) s[i] = std::max(ev.c[i], 0.0) + 1.0;
  Vec lam = kw * s;  // makes the sigma-stationarity residual start at zero
  Vec eta = kw * s;

  double mu = (lam.dot(s - ev.c) + eta.dot(s)) / (2.0 * m);
  const double mu_min = 0.01 * opts.tol;

  int iters = 0;
  bool degenerate = false;

  while (iters < opts.max_newton) {
    // Check true optimality (mu = 0 residual) before each centering round.
    {
      SubproblemSolution probe;
      probe.d_y = d;
      probe.multipliers.resize(m + ne);
      probe.sigma.resize(m + ne);
      for (int i = 0; i < m; ++i) {
        probe.multipliers[i] = lam[i];
        probe.sigma[i] = s[i];
      }
      for (int j = 0; j < ne; ++j) {
        const double e = spec.lin_eq[j].value + spec.lin_eq[j].grad.dot(d);
        probe.sigma[m + j] = e;
        probe.multipliers[m + j] = k2 * e;
      }
      const double res0 = kkt_residual(spec, probe);
      if (res0 <= opts.tol) {
        finish(d, lam, s, iters, SubStatus::Optimal);
        sol.kkt_residual = res0;
        return sol;
      }
    }

    // Center at the current mu.
    const double inner_tol = std::max(0.1 * mu, 0.01 * opts.tol);
    for (int inner = 0; inner < 50 && iters < opts.max_newton; ++inner) {
      Residuals r = residuals(spec, d, ev, s, lam, eta, mu);
      if (r.sup_norm() <= inner_tol) break;

      // Condensed Newton system in d alone.
      Mat M = base;
      int li = 0;
      for (const LseForm& f : spec.lse_cons) {
        LseEval le = lse_eval(f, d, /*with_hessian=*/true);
        M += lam[li] * le.hess;
        ++li;
      }
      Vec rhs = -r.rd;
      Vec beta(m), gamma(m), tvec(m);
      for (int i = 0; i < m; ++i) {
        beta[i] = k2 * s[i] + eta[i];
        gamma[i] = (s[i] - ev.c[i]) + lam[i] * s[i] / beta[i];
        tvec[i] = -r.rlam[i] + lam[i] * (s[i] * r.rs[i] + r.reta[i]) / beta[i];
        M += (lam[i] / gamma[i]) * ev.g[i] * ev.g[i].transpose();
        rhs -= (tvec[i] / gamma[i]) * ev.g[i];
      }

      Eigen::LLT<Mat> llt(M);
      if (llt.info() != Eigen::Success) {
        M += 1e-10 * Mat::Identity(n, n);
        llt.compute(M);
        if (llt.info() != Eigen::Success) {
          degenerate = true;
          break;
        }
      }
      const Vec dd = llt.solve(rhs);
      Vec dlam(m), ds(m), deta(m);
      for (int i = 0; i < m; ++i) {
        dlam[i] = (lam[i] * ev.g[i].dot(dd) + tvec[i]) / gamma[i];
        ds[i] = (s[i] * dlam[i] - s[i] * r.rs[i] - r.reta[i]) / beta[i];
        deta[i] = k2 * ds[i] - dlam[i] + r.rs[i];
      }
      if (!dd.allFinite() || !dlam.allFinite() || !ds.allFinite() ||
          !deta.allFinite()) {
        degenerate = true;
        break;
      }

      double alpha = std::min({1.0, max_step(s, ds, 0.99),
                               max_step(lam, dlam, 0.99),
                               max_step(eta, deta, 0.99)});
      const double theta0 = r.sup_norm();
      Vec dt, st, lamt, etat;
      IneqEval evt;
      bool accepted = false;
      for (int bt = 0; bt < 30; ++bt) {
        dt = d + alpha * dd;
        st = s + alpha * ds;
        lamt = lam + alpha * dlam;
        etat = eta + alpha * deta;
        evt = eval_ineq(spec, dt);
        const bool interior = ((st - evt.c).array() > 0.0).all();
        if (interior) {
          Residuals rt = residuals(spec, dt, evt, st, lamt, etat, mu);
          if (rt.sup_norm() <= (1.0 - 1e-4 * alpha) * theta0) {
            accepted = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      ++iters;
      if (!accepted) break;  // stalled at this mu; try a smaller one
      d = std::move(dt);
      s = std::move(st);
      lam = std::move(lamt);
      eta = std::move(etat);
      ev = std::move(evt);

      if (opts.trace) {
        Residuals rn = residuals(spec, d, ev, s, lam, eta, mu);
        opts.trace({iters, mu, rn.sup_norm(), s.minCoeff()});
      }
    }

    if (degenerate) break;
    mu = std::max(mu * 0.1, mu_min);
  }

  finish(d, lam, s, iters,
         degenerate ? SubStatus::Degenerate : SubStatus::MaxIter);
  sol.kkt_residual = kkt_residual(spec, sol);
  if (sol.status == SubStatus::MaxIter && sol.kkt_residual <= opts.tol) {
    sol.status = SubStatus::Optimal;
  }
  return sol;
}

}  // namespace slcp
