#include "slcp/model.hpp"

#include <cmath>

namespace slcp {

double Monomial::eval(const Vec& x) const {
  if (x.size() != exponents.size()) {
    throw std::invalid_argument("monomial/point dimension mismatch");
  }
  double v = coefficient;
  for (Eigen::Index i = 0; i < exponents.size(); ++i) {
    const double a = exponents[i];
    if (a == 0.0) continue;
    if (x[i] <= 0.0) {
      throw PositivityError("monomial evaluated at nonpositive component " +
                            std::to_string(i));
    }
    v *= std::pow(x[i], a);
  }
  return v;
}

Vec Monomial::grad(const Vec& x) const {
  const double v = eval(x);
  Vec g = Vec::Zero(x.size());
  for (Eigen::Index i = 0; i < exponents.size(); ++i) {
    if (exponents[i] != 0.0) g[i] = exponents[i] * v / x[i];
  }
  return g;
}

double Posynomial::eval(const Vec& x) const {
  double v = 0.0;
  for (const Monomial& t : terms) v += t.eval(x);
  return v;
}

Vec Posynomial::grad(const Vec& x) const {
  Vec g = Vec::Zero(x.size());
  for (const Monomial& t : terms) g += t.grad(x);
  return g;
}

Vec finite_difference_gradient(const std::function<double(const Vec&)>& f,
                               const Vec& x) {
  Vec g(x.size());
  Vec xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = std::max(1e-9, 1e-6 * std::abs(x[i]));
    xp[i] = x[i] + h;
    const double fp = f(xp);
    xp[i] = x[i] - h;
    const double fm = f(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Vec BlackBoxFn::grad(const Vec& x) const {
  if (gradient) return gradient(x);
  return finite_difference_gradient(evaluator, x);
}

double StandardFormProblem::eval_objective(const Vec& x) const {
  return std::visit([&](const auto& f) { return f.eval(x); }, objective);
}

Vec StandardFormProblem::objective_grad(const Vec& x) const {
  return std::visit([&](const auto& f) { return f.grad(x); }, objective);
}

Vec StandardFormProblem::lower_bounds() const {
  Vec lo(num_vars());
  for (int i = 0; i < num_vars(); ++i) lo[i] = variables[i].lower;
  return lo;
}

Vec StandardFormProblem::upper_bounds() const {
  Vec hi(num_vars());
  for (int i = 0; i < num_vars(); ++i) hi[i] = variables[i].upper;
  return hi;
}

namespace {

void check_exponents(const Vec& a, int n, const std::string& what,
                     ValidationReport& rep) {
  if (a.size() != n) {
    rep.ok = false;
    rep.issues.push_back(what + ": exponent dimension " +
                         std::to_string(a.size()) + " != " +
                         std::to_string(n));
  } else if (!a.allFinite()) {
    rep.ok = false;
    rep.issues.push_back(what + ": nonfinite exponent");
  }
}

void check_monomial(const Monomial& m, int n, const std::string& what,
                    ValidationReport& rep) {
  if (!(m.coefficient > 0.0) || !std::isfinite(m.coefficient)) {
    rep.ok = false;
    rep.issues.push_back(what + ": coefficient " +
                         std::to_string(m.coefficient) + " not positive");
  }
  check_exponents(m.exponents, n, what, rep);
}

}  // namespace

ValidationReport validate(const StandardFormProblem& problem) {
  ValidationReport rep;
  const int n = problem.num_vars();

  for (const Variable& v : problem.variables) {
    if (!(v.lower > 0.0)) {
      rep.ok = false;
      rep.issues.push_back("variable " + v.name + ": lower bound " +
                           std::to_string(v.lower) + " not positive");
    }
    if (!(v.lower <= v.upper)) {
      rep.ok = false;
      rep.issues.push_back("variable " + v.name + ": lower exceeds upper");
    }
  }

  if (const auto* p = std::get_if<Posynomial>(&problem.objective)) {
    if (p->terms.empty()) {
      rep.ok = false;
      rep.issues.push_back("objective posynomial has no terms");
    }
    for (size_t k = 0; k < p->terms.size(); ++k) {
      check_monomial(p->terms[k], n, "objective term " + std::to_string(k),
                     rep);
    }
  }

  for (size_t i = 0; i < problem.posy_ineq.size(); ++i) {
    const Posynomial& p = problem.posy_ineq[i];
    if (p.terms.empty()) {
      rep.ok = false;
      rep.issues.push_back("posynomial constraint " + std::to_string(i) +
                           " has no terms");
    }
    for (size_t k = 0; k < p.terms.size(); ++k) {
      check_monomial(p.terms[k], n,
                     "posynomial constraint " + std::to_string(i) + " term " +
                         std::to_string(k),
                     rep);
    }
  }
  for (size_t i = 0; i < problem.mono_eq.size(); ++i) {
    check_monomial(problem.mono_eq[i], n,
                   "monomial equality " + std::to_string(i), rep);
  }
  for (size_t i = 0; i < problem.mono_ineq.size(); ++i) {
    check_monomial(problem.mono_ineq[i], n,
                   "monomial inequality " + std::to_string(i), rep);
  }
  for (size_t i = 0; i < problem.bb_ineq.size(); ++i) {
    if (!problem.bb_ineq[i].evaluator) {
      rep.ok = false;
      rep.issues.push_back("black-box inequality " + std::to_string(i) +
                           " has no evaluator");
    }
  }
  for (size_t i = 0; i < problem.bb_eq.size(); ++i) {
    if (!problem.bb_eq[i].evaluator) {
      rep.ok = false;
      rep.issues.push_back("black-box equality " + std::to_string(i) +
                           " has no evaluator");
    }
  }

  rep.pure_gp = problem.is_pure_gp();
  return rep;
}

void append_bound_constraints(StandardFormProblem& problem) {
  const int n = problem.num_vars();
  for (const Variable& v : problem.variables) {
    if (v.lower > 0.0 && std::isfinite(v.lower)) {
      Monomial m;
      m.coefficient = v.lower;
      m.exponents = Vec::Zero(n);
      m.exponents[v.index] = -1.0;
      problem.mono_ineq.push_back(std::move(m));
    }
    if (std::isfinite(v.upper)) {
      Monomial m;
      m.coefficient = 1.0 / v.upper;
      m.exponents = Vec::Zero(n);
      m.exponents[v.index] = 1.0;
      problem.mono_ineq.push_back(std::move(m));
    }
  }
}

}  // namespace slcp
