#ifndef PDFP_SOLVER_HPP_
#define PDFP_SOLVER_HPP_

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pdfp/problem.hpp"

namespace pdfp {

enum class Algorithm { pdfp, pdfp2o, pdfp2oc, condat };

inline const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::pdfp: return "pdfp";
    case Algorithm::pdfp2o: return "pdfp2o";
    case Algorithm::pdfp2oc: return "pdfp2oc";
    case Algorithm::condat: return "condat";
  }
  return "?";
}

inline Algorithm algorithm_from_name(const std::string& s) {
  if (s == "pdfp") return Algorithm::pdfp;
  if (s == "pdfp2o") return Algorithm::pdfp2o;
  if (s == "pdfp2oc") return Algorithm::pdfp2oc;
  if (s == "condat") return Algorithm::condat;
  throw std::invalid_argument("unknown algorithm '" + s + "'");
}

struct SolverConfig {
  Algorithm algorithm = Algorithm::pdfp;
  double gamma = 1.0;
  double lambda = 0.25;
  int max_iter = 10000;
  double fp_tol = 1e-10;
  int record_every = 1;
};

// Iterate pair u = (v, x); v2 is the extra dual used only by pdfp2oc
// (empty otherwise). For condat, v holds the conjugate-scale dual.
struct PrimalDualState {
  Vec v;
  Vec x;
  Vec v2;
};

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;
  double fp_residual_lambda = 0.0;
  double kkt_residual = 0.0;
  double feasibility_violation = 0.0;
  double elapsed_ms = 0.0;
};

// Product-space norm sqrt(lambda ||dv||^2 + ||dx||^2).
inline double lambda_norm(const Vec& dv, const Vec& dx, double lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("lambda_norm: lambda must be > 0");
  return std::sqrt(lambda * norm_sq(dv) + norm_sq(dx));
}

// Same norm on a state difference; dual channels (v and, when present, v2)
// both carry the lambda weight.
inline double lambda_norm(const PrimalDualState& a, const PrimalDualState& b, double lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("lambda_norm: lambda must be > 0");
  double s = lambda * norm_sq(sub(a.v, b.v)) + norm_sq(sub(a.x, b.x));
  if (!a.v2.empty() || !b.v2.empty()) {
    check_same_size(a.v2, b.v2, "lambda_norm(v2)");
    s += lambda * norm_sq(sub(a.v2, b.v2));
  }
  return std::sqrt(s);
}

// Norm induced by M = I - lambda B B^T, defined for lambda < 1/lambda_max(BB^T).
// A clearly negative quadratic form signals a lambda outside that range.
inline double m_norm(const Vec& v, const LinearMap& B, double lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("m_norm: lambda must be > 0");
  const double inner = norm_sq(v) - lambda * dot(v, B.apply_bbt(v));
  if (inner < -1e-12) {
    throw std::runtime_error("m_norm: indefinite form (lambda exceeds 1/lambda_max(BB^T))");
  }
  return std::sqrt(std::max(inner, 0.0));
}

inline std::pair<double, double> condat_sigma_tau(const SolverConfig& cfg) {
  return {cfg.lambda / cfg.gamma, cfg.gamma};
}

namespace detail {

inline std::string range_str(double lo, double hi, bool hi_inclusive) {
  return "(" + std::to_string(lo) + ", " +
         (hi == kInf ? std::string("inf") : std::to_string(hi)) + (hi_inclusive ? "]" : ")");
}

}  // namespace detail

// Checks the step-size inequalities for the chosen scheme against the
// estimated lambda_max(B B^T):
//   pdfp:    0 < lambda <  1/opnorm,       0 < gamma < 2 beta
//   pdfp2o:  0 < lambda <= 1/opnorm,       0 < gamma < 2 beta   (f3 must be 0)
//   pdfp2oc: 0 < lambda <= 1/(opnorm + 1), 0 < gamma < 2 beta   (f3 an indicator)
//   condat:  sigma tau opnorm + tau/(2 beta) <= 1 with sigma = lambda/gamma,
//            tau = gamma; for f1 = 0 this reduces to 0 < lambda <= 1/opnorm.
// The gamma upper bound is waived when f1 is the zero function.
inline SolverConfig validate_config(const ProblemSpec& problem, SolverConfig cfg,
                                    const OpNormEstimate& opnorm) {
  problem.check();
  if (cfg.max_iter < 1) throw std::invalid_argument("config: max_iter must be >= 1");
  if (cfg.fp_tol < 0.0) throw std::invalid_argument("config: fp_tol must be >= 0");
  if (cfg.record_every < 1) throw std::invalid_argument("config: record_every must be >= 1");
  if (cfg.gamma <= 0.0) throw std::invalid_argument("config: gamma must be > 0");
  if (cfg.lambda <= 0.0) throw std::invalid_argument("config: lambda must be > 0");

  const double beta = problem.f1.beta();
  const bool f1_zero = problem.f1.is_zero();
  const double L = opnorm.value;  // lambda_max(B B^T) estimate

  const auto gamma_gate = [&]() {
    if (f1_zero) return;  // 0 < gamma < +inf
    if (!(cfg.gamma < 2.0 * beta)) {
      throw std::invalid_argument("config: gamma violates 0 < gamma < 2*beta; admissible " +
                                  detail::range_str(0.0, 2.0 * beta, false));
    }
  };

  switch (cfg.algorithm) {
    case Algorithm::pdfp: {
      gamma_gate();
      const double bound = L > 0.0 ? 1.0 / L : kInf;
      if (!(cfg.lambda < bound)) {
        throw std::invalid_argument(
            "config: lambda violates 0 < lambda < 1/lambda_max(BB^T); admissible " +
            detail::range_str(0.0, bound, false));
      }
      break;
    }
    case Algorithm::pdfp2o: {
      if (!problem.f3.is_zero()) {
        throw std::invalid_argument("config: pdfp2o requires f3 = 0");
      }
      gamma_gate();
      const double bound = L > 0.0 ? 1.0 / L : kInf;
      if (!(cfg.lambda <= bound)) {
        throw std::invalid_argument(
            "config: lambda violates 0 < lambda <= 1/lambda_max(BB^T); admissible " +
            detail::range_str(0.0, bound, true));
      }
      break;
    }
    case Algorithm::pdfp2oc: {
      if (!problem.f3.is_indicator()) {
        throw std::invalid_argument("config: pdfp2oc requires f3 to be an indicator");
      }
      gamma_gate();
      const double bound = 1.0 / (L + 1.0);
      if (!(cfg.lambda <= bound)) {
        throw std::invalid_argument(
            "config: lambda violates 0 < lambda <= 1/(lambda_max(BB^T)+1); admissible " +
            detail::range_str(0.0, bound, true));
      }
      break;
    }
    case Algorithm::condat: {
      const auto [sigma, tau] = condat_sigma_tau(cfg);
      if (f1_zero) {
        const double bound = L > 0.0 ? 1.0 / L : kInf;
        if (!(sigma * tau <= bound)) {
          throw std::invalid_argument(
              "config: condat requires 0 < sigma*tau <= 1/lambda_max(BB^T); admissible "
              "sigma*tau in " + detail::range_str(0.0, bound, true));
        }
      } else {
        const double lhs = sigma * tau * L + tau / (2.0 * beta);
        if (!(lhs <= 1.0)) {
          throw std::invalid_argument(
              "config: condat requires sigma*tau*lambda_max(BB^T) + tau/(2*beta) <= 1; got " +
              std::to_string(lhs));
        }
      }
      break;
    }
  }
  return cfg;
}

inline PrimalDualState initial_state(const ProblemSpec& problem, Algorithm alg) {
  PrimalDualState u;
  u.v.assign(problem.dual_dim(), 0.0);
  u.x.assign(problem.primal_dim(), 0.0);
  if (alg == Algorithm::pdfp2oc) u.v2.assign(problem.primal_dim(), 0.0);
  return u;
}

struct StepOutput {
  PrimalDualState state;
  Vec y;
};

// One sweep of the three-line symmetric scheme:
//   y  = prox_{gamma f3}(x - gamma grad_f1(x) - lambda B^T v)
//   v+ = (I - prox_{(gamma/lambda) f2})(B y + v)
//   x+ = prox_{gamma f3}(x - gamma grad_f1(x) - lambda B^T v+)
// The gradient is evaluated once and shared by the first and third lines.
inline StepOutput pdfp_step(const ProblemSpec& problem, const SolverConfig& cfg,
                            const PrimalDualState& u) {
  const double g = cfg.gamma, l = cfg.lambda;
  Vec base = u.x;
  axpy(-g, problem.f1.gradient(u.x), base);  // x - gamma grad_f1(x)

  Vec arg = base;
  axpy(-l, problem.B.adjoint(u.v), arg);
  Vec y = problem.f3.prox(arg, g);

  Vec v_next = residual_shrink(problem.f2, add(problem.B.apply(y), u.v), g / l);

  Vec arg2 = std::move(base);
  axpy(-l, problem.B.adjoint(v_next), arg2);
  Vec x_next = problem.f3.prox(arg2, g);

  return {{std::move(v_next), std::move(x_next), {}}, std::move(y)};
}

// The f3 = 0 specialisation: both prox_{gamma f3} applications collapse to
// the identity. Refuses problems whose f3 is not the zero function.
inline StepOutput pdfp2o_step(const ProblemSpec& problem, const SolverConfig& cfg,
                              const PrimalDualState& u) {
  if (!problem.f3.is_zero()) {
    throw std::invalid_argument("pdfp2o_step: requires f3 = 0");
  }
  const double g = cfg.gamma, l = cfg.lambda;
  Vec base = u.x;
  axpy(-g, problem.f1.gradient(u.x), base);

  Vec y = base;
  axpy(-l, problem.B.adjoint(u.v), y);

  Vec v_next = residual_shrink(problem.f2, add(problem.B.apply(y), u.v), g / l);

  Vec x_next = std::move(base);
  axpy(-l, problem.B.adjoint(v_next), x_next);

  return {{std::move(v_next), std::move(x_next), {}}, std::move(y)};
}

// Two-dual variant for f3 = indicator of C: v tracks the f2 dual, v2 the
// constraint dual. The primal update is a plain affine combination, so
// iterates may leave C transiently.
inline PrimalDualState pdfp2oc_step(const ProblemSpec& problem, const SolverConfig& cfg,
                                    const PrimalDualState& u) {
  if (!problem.f3.is_indicator()) {
    throw std::invalid_argument("pdfp2oc_step: requires f3 to be an indicator");
  }
  if (u.v2.size() != problem.primal_dim()) {
    throw std::invalid_argument("pdfp2oc_step: state missing v2 dual");
  }
  const double g = cfg.gamma, l = cfg.lambda;
  Vec base = u.x;
  axpy(-g, problem.f1.gradient(u.x), base);

  Vec y = base;
  axpy(-l, problem.B.adjoint(u.v), y);
  axpy(-l, u.v2, y);

  Vec v_next = residual_shrink(problem.f2, add(problem.B.apply(y), u.v), g / l);
  Vec v2_next = sub(add(y, u.v2), problem.f3.prox(add(y, u.v2), 1.0));  // (I - proj_C)

  Vec x_next = std::move(base);
  axpy(-l, problem.B.adjoint(v_next), x_next);
  axpy(-l, v2_next, x_next);

  return {std::move(v_next), std::move(x_next), std::move(v2_next)};
}

// Condat's primal-dual step (unit relaxation), with sigma = lambda/gamma and
// tau = gamma. The conjugate prox comes from the Moreau decomposition.
inline PrimalDualState condat_step(const ProblemSpec& problem, const SolverConfig& cfg,
                                   const PrimalDualState& u) {
  const auto [sigma, tau] = condat_sigma_tau(cfg);

  Vec dual_arg = add(scaled(problem.B.apply(u.x), sigma), u.v);
  Vec v_next = conjugate_prox_via_moreau(problem.f2, dual_arg, sigma);

  Vec extr(v_next.size());
  for (std::size_t i = 0; i < extr.size(); ++i) extr[i] = 2.0 * v_next[i] - u.v[i];

  Vec arg = u.x;
  axpy(-tau, problem.f1.gradient(u.x), arg);
  axpy(-tau, problem.B.adjoint(extr), arg);
  Vec x_next = problem.f3.prox(arg, tau);

  return {std::move(v_next), std::move(x_next), {}};
}

// Dual iterate expressed as a candidate subgradient of f2 at Bx, the scale
// kkt_residual expects: PDFP-family duals carry a gamma/lambda factor,
// condat's dual is already in that scale.
inline Vec dual_in_f2_scale(const PrimalDualState& u, const SolverConfig& cfg) {
  if (cfg.algorithm == Algorithm::condat) return u.v;
  return scaled(u.v, cfg.lambda / cfg.gamma);
}

// The lambda_max(BB^T) estimate solve() validates against; deriving step
// bounds from this same call keeps caller and solver consistent.
inline OpNormEstimate solver_op_norm_estimate(const LinearMap& B) {
  return op_norm_sq_estimate(B, 1e-10, 100000);
}

struct SolveResult {
  PrimalDualState state;
  std::vector<IterationRecord> history;
  int iterations = 0;
  bool converged = false;
  double fp_residual = kInf;
  double bbt_norm_sq = 0.0;
};

using StateObserver = std::function<void(int iter, const PrimalDualState&)>;

// Picard iteration of the selected scheme from u0 (zeros by default) until
// the lambda-norm fixed-point residual drops to fp_tol or the budget runs
// out. Diagnostics are recorded every record_every iterations and at the
// final one. Deterministic apart from the elapsed_ms timing field.
inline SolveResult solve(const ProblemSpec& problem, const SolverConfig& cfg_in,
                         std::optional<PrimalDualState> init = std::nullopt,
                         const StateObserver& observer = {}) {
  const auto opnorm = solver_op_norm_estimate(problem.B);
  const SolverConfig cfg = validate_config(problem, cfg_in, opnorm);

  PrimalDualState u = init ? std::move(*init) : initial_state(problem, cfg.algorithm);
  if (u.v.size() != problem.dual_dim() || u.x.size() != problem.primal_dim()) {
    throw std::invalid_argument("solve: initial state dimensions do not match problem");
  }
  if (cfg.algorithm == Algorithm::pdfp2oc) {
    if (u.v2.empty()) {
      u.v2.assign(problem.primal_dim(), 0.0);
    } else if (u.v2.size() != problem.primal_dim()) {
      throw std::invalid_argument("solve: v2 has wrong length");
    }
  } else if (!u.v2.empty()) {
    throw std::invalid_argument("solve: v2 is only used by pdfp2oc");
  }

  SolveResult result;
  result.bbt_norm_sq = opnorm.value;
  if (observer) observer(0, u);

  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed_ms = [&t0]() {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  };
  const auto record = [&](int iter, const PrimalDualState& s, double fp_res) {
    IterationRecord r;
    r.iter = iter;
    r.objective = objective(problem, s.x);
    r.fp_residual_lambda = fp_res;
    r.kkt_residual = kkt_residual(problem, s.x, dual_in_f2_scale(s, cfg), opnorm.value);
    r.feasibility_violation = feasibility_violation(problem, s.x);
    r.elapsed_ms = elapsed_ms();
    result.history.push_back(r);
  };

  for (int k = 1; k <= cfg.max_iter; ++k) {
    PrimalDualState next;
    switch (cfg.algorithm) {
      case Algorithm::pdfp: next = pdfp_step(problem, cfg, u).state; break;
      case Algorithm::pdfp2o: next = pdfp2o_step(problem, cfg, u).state; break;
      case Algorithm::pdfp2oc: next = pdfp2oc_step(problem, cfg, u); break;
      case Algorithm::condat: next = condat_step(problem, cfg, u); break;
    }
    const double fp_res = lambda_norm(next, u, cfg.lambda);
    u = std::move(next);
    if (observer) observer(k, u);

    result.iterations = k;
    result.fp_residual = fp_res;
    result.converged = fp_res <= cfg.fp_tol;
    if (k % cfg.record_every == 0 || result.converged || k == cfg.max_iter) {
      record(k, u, fp_res);
    }
    if (result.converged) break;
  }

  result.state = std::move(u);
  return result;
}

}  // namespace pdfp

#endif  // PDFP_SOLVER_HPP_
