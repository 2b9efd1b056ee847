#pragma once

#include "slcp/model.hpp"

namespace slcp {

/// Log-sum-exp data of a posynomial: value(y) = log sum_j exp(P_j y + q_j).
/// Row j of P is term j's exponent vector, q_j = log c_j.
struct LseForm {
  Mat P;
  Vec q;

  int num_terms() const { return static_cast<int>(P.rows()); }
};

/// Affine log-space form of a monomial: value(y) = A y + b, b = log c.
struct MonoAffineForm {
  Eigen::RowVectorXd A;
  double b = 0.0;

  double value(const Vec& y) const { return A.dot(y) + b; }
};

struct LseEval {
  double value = 0.0;
  Vec grad;
  Mat hess;  // empty unless requested
};

/// Gradient of log f(exp(y)) in y from the x-space gradient:
/// d log f / d y_i = (x_i / f) * df/dx_i. Exact at the given point.
/// Throws PositivityError when f_val <= 0.
Vec logspace_gradient(double f_val, const Vec& grad_x, const Vec& x);

LseForm posynomial_to_lse(const Posynomial& p);
MonoAffineForm monomial_to_affine(const Monomial& m);

/// Value, gradient and (optionally) Hessian of log sum exp(P y + q).
/// Uses max subtraction throughout; the Hessian P^T (diag(w) - w w^T) P is
/// positive semidefinite.
LseEval lse_eval(const LseForm& form, const Vec& y, bool with_hessian = true);

double lse_value(const LseForm& form, const Vec& y);

}  // namespace slcp
