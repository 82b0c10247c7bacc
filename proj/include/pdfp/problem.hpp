#ifndef PDFP_PROBLEM_HPP_
#define PDFP_PROBLEM_HPP_

#include <stdexcept>
#include <string>

#include "pdfp/linear_map.hpp"
#include "pdfp/prox.hpp"
#include "pdfp/vec.hpp"

namespace pdfp {

// The three-block objective f1(x) + f2(Bx) + f3(x): a smooth term, a
// prox-friendly term composed with a linear operator, and a plain
// prox-friendly term. The primal lives in R^{B.in_dim}, the dual for f2 in
// R^{B.out_dim}.
struct ProblemSpec {
  SmoothFn f1;
  ProxFn f2;
  LinearMap B;
  ProxFn f3;

  std::size_t primal_dim() const { return B.in_dim(); }
  std::size_t dual_dim() const { return B.out_dim(); }

  void check() const {
    if (!f1.is_zero() && f1.A().in_dim() != B.in_dim()) {
      throw std::invalid_argument("ProblemSpec: f1 operates on dim " +
                                  std::to_string(f1.A().in_dim()) + " but B expects " +
                                  std::to_string(B.in_dim()));
    }
  }
};

inline double objective(const ProblemSpec& p, const Vec& x) {
  return p.f1.value(x) + p.f2.evaluate(p.B.apply(x)) + p.f3.evaluate(x);
}

// Distance of x from the constraint set described by f3 (sup-norm breach);
// zero when f3 is not an indicator.
inline double feasibility_violation(const ProblemSpec& p, const Vec& x) {
  return p.f3.is_indicator() ? std::max(0.0, p.f3.breach(x)) : 0.0;
}

// First-order optimality residual, evaluated at a fixed internal step pair
// (gamma = 1, lambda = 0.5 / lambda_max(BB^T)) so the number is comparable
// across solvers and step-size choices. `dual` is the f2-scale multiplier:
// a candidate subgradient of f2 at Bx (for an optimal pair it satisfies
// dual in subdiff f2(Bx)). Returns
//   || x - prox_{f3}(x - grad_f1(x) - B^T dual) ||
// + || v - (I - prox_{c f2})(Bx + v) ||,  v = c * dual, c = gamma/lambda.
// Zero exactly at optimal primal-dual pairs.
inline double kkt_residual(const ProblemSpec& p, const Vec& x, const Vec& dual,
                           double bbt_norm_sq) {
  const double lambda_ref = bbt_norm_sq > 0.0 ? 0.5 / bbt_norm_sq : 0.5;
  const double c = 1.0 / lambda_ref;  // gamma_ref / lambda_ref with gamma_ref = 1

  Vec step = sub(x, p.f1.gradient(x));
  axpy(-1.0, p.B.adjoint(dual), step);
  const double primal_term = norm(sub(x, p.f3.prox(step, 1.0)));

  Vec v = scaled(dual, c);
  Vec shrunk = residual_shrink(p.f2, add(p.B.apply(x), v), c);
  const double dual_term = norm(sub(v, shrunk));

  return primal_term + dual_term;
}

inline double kkt_residual(const ProblemSpec& p, const Vec& x, const Vec& dual) {
  return kkt_residual(p, x, dual, op_norm_sq_estimate(p.B).value);
}

}  // namespace pdfp

#endif  // PDFP_PROBLEM_HPP_
