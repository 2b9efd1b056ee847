#include "slcp/transform.hpp"

#include <cmath>

namespace slcp {

Vec logspace_gradient(double f_val, const Vec& grad_x, const Vec& x) {
  if (!(f_val > 0.0) || !std::isfinite(f_val)) {
    throw PositivityError("log-space gradient of nonpositive value " +
                          std::to_string(f_val));
  }
  return (x.array() * grad_x.array() / f_val).matrix();
}

LseForm posynomial_to_lse(const Posynomial& p) {
  const int k = static_cast<int>(p.terms.size());
  const Eigen::Index n = p.terms.front().exponents.size();
  LseForm form;
  form.P.resize(k, n);
  form.q.resize(k);
  for (int j = 0; j < k; ++j) {
    form.P.row(j) = p.terms[j].exponents.transpose();
    form.q[j] = std::log(p.terms[j].coefficient);
  }
  return form;
}

MonoAffineForm monomial_to_affine(const Monomial& m) {
  MonoAffineForm form;
  form.A = m.exponents.transpose();
  form.b = std::log(m.coefficient);
  return form;
}

LseEval lse_eval(const LseForm& form, const Vec& y, bool with_hessian) {
  const Vec z = form.P * y + form.q;
  const double zmax = z.maxCoeff();
  Vec w = (z.array() - zmax).exp();
  const double total = w.sum();
  LseEval out;
  out.value = zmax + std::log(total);
  w /= total;  // softmax weights, sum to 1
  out.grad = form.P.transpose() * w;
  if (with_hessian) {
    // P^T diag(w) P - g g^T
    out.hess = form.P.transpose() * w.asDiagonal() * form.P -
               out.grad * out.grad.transpose();
  }
  return out;
}

double lse_value(const LseForm& form, const Vec& y) {
  const Vec z = form.P * y + form.q;
  const double zmax = z.maxCoeff();
  return zmax + std::log((z.array() - zmax).exp().sum());
}

}  // namespace slcp
