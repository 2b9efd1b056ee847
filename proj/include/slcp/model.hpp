#pragma once

#include <Eigen/Core>

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace slcp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Thrown when a quantity that the log transform requires to be strictly
/// positive is not (nonpositive variable component, nonpositive function
/// value). The outer solvers catch this to trigger step shortening.
class PositivityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A strictly positive design variable. The default lower bound keeps the
/// log transform defined everywhere.
struct Variable {
  int index = 0;
  std::string name;
  double lower = 1e-9;
  double upper = std::numeric_limits<double>::infinity();
};

/// c * prod_i x_i^(a_i), c > 0. Exponents are stored dense over the full
/// variable set; absent variables carry exponent zero.
struct Monomial {
  double coefficient = 1.0;
  Vec exponents;

  /// Value at a strictly positive point. Throws PositivityError if any
  /// component of x with a nonzero exponent is nonpositive.
  double eval(const Vec& x) const;

  /// dm/dx_i = a_i * m(x) / x_i
  Vec grad(const Vec& x) const;
};

/// Sum of monomials, K >= 1 terms, all coefficients positive.
struct Posynomial {
  std::vector<Monomial> terms;

  double eval(const Vec& x) const;
  Vec grad(const Vec& x) const;
};

/// A constraint or objective available only through evaluation. Must return
/// a finite value for in-bounds x; for log-space algorithms the value must
/// additionally be positive, which is the problem author's contract.
/// Evaluators must be pure functions: solves share them across threads.
struct BlackBoxFn {
  std::function<double(const Vec&)> evaluator;
  /// Optional analytic gradient. When absent, central finite differences
  /// with relative step 1e-6 per coordinate (absolute floor 1e-9) are used.
  std::function<Vec(const Vec&)> gradient;
  std::string name;

  double eval(const Vec& x) const { return evaluator(x); }
  Vec grad(const Vec& x) const;
};

/// Objective plus the four constraint classes, all normalized to unity:
///   minimize f(x)
///   s.t. p(x) <= 1, m(x) = 1 or m(x) <= 1, g(x) <= 1, h(x) = 1, x > 0.
/// Immutable after construction by convention; shared read-only between
/// concurrent solves.
struct StandardFormProblem {
  std::vector<Variable> variables;
  std::variant<Posynomial, BlackBoxFn> objective;
  std::vector<Posynomial> posy_ineq;
  std::vector<Monomial> mono_eq;
  std::vector<Monomial> mono_ineq;
  std::vector<BlackBoxFn> bb_ineq;
  std::vector<BlackBoxFn> bb_eq;

  int num_vars() const { return static_cast<int>(variables.size()); }
  int num_rows() const {
    return static_cast<int>(posy_ineq.size() + mono_ineq.size() +
                            bb_ineq.size() + mono_eq.size() + bb_eq.size());
  }

  /// Pure GP: posynomial objective and no black-box constraints.
  bool is_pure_gp() const {
    return std::holds_alternative<Posynomial>(objective) && bb_ineq.empty() &&
           bb_eq.empty();
  }

  double eval_objective(const Vec& x) const;
  Vec objective_grad(const Vec& x) const;

  Vec lower_bounds() const;
  Vec upper_bounds() const;
};

struct ValidationReport {
  bool ok = true;
  bool pure_gp = false;
  std::vector<std::string> issues;
};

/// Structural checks: exponent dimensions, coefficient and bound positivity,
/// bound ordering. Failures are reported, not thrown.
ValidationReport validate(const StandardFormProblem& problem);

/// Appends the finite variable bounds as monomial inequality rows:
/// lower/x <= 1 and x/upper <= 1. Zero-exponent bookkeeping stays dense.
void append_bound_constraints(StandardFormProblem& problem);

/// Central finite differences with relative step 1e-6, absolute floor 1e-9.
Vec finite_difference_gradient(const std::function<double(const Vec&)>& f,
                               const Vec& x);

}  // namespace slcp
