#ifndef PDFP_PROX_HPP_
#define PDFP_PROX_HPP_

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>

#include "pdfp/linear_map.hpp"
#include "pdfp/vec.hpp"

namespace pdfp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Componentwise soft threshold: sign(x_i) * max(|x_i| - t, 0).
// A component sitting exactly at |x_i| = t maps to exactly 0.
inline Vec prox_l1(const Vec& x, double t) {
  if (t <= 0.0) throw std::invalid_argument("prox_l1: t must be > 0");
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double m = std::abs(x[i]) - t;
    y[i] = m > 0.0 ? (x[i] > 0.0 ? m : -m) : 0.0;
  }
  return y;
}

// Prox of t * sum_i ||(p_i, q_i)||_2: each 2-vector shrinks by
// max(1 - t/||(p_i,q_i)||, 0). A zero pair stays (0,0) without dividing.
inline std::pair<Vec, Vec> prox_group_l1_pairs(const Vec& p, const Vec& q, double t) {
  if (t <= 0.0) throw std::invalid_argument("prox_group_l1_pairs: t must be > 0");
  check_same_size(p, q, "prox_group_l1_pairs");
  Vec rp(p.size()), rq(q.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double n = std::hypot(p[i], q[i]);
    const double f = n > t ? 1.0 - t / n : 0.0;
    rp[i] = f * p[i];
    rq[i] = f * q[i];
  }
  return {std::move(rp), std::move(rq)};
}

inline Vec project_nonneg(const Vec& x) {
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
  return y;
}

inline Vec project_box(const Vec& x, const Vec& lo, const Vec& hi) {
  if (lo.size() != hi.size()) throw std::invalid_argument("project_box: lo/hi size mismatch");
  const bool scalar = lo.size() == 1;
  if (!scalar) check_same_size(x, lo, "project_box");
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double l = scalar ? lo[0] : lo[i];
    const double h = scalar ? hi[0] : hi[i];
    if (l > h) throw std::invalid_argument("project_box: lo > hi");
    y[i] = x[i] < l ? l : (x[i] > h ? h : x[i]);
  }
  return y;
}

inline Vec project_box(const Vec& x, double lo, double hi) {
  return project_box(x, Vec{lo}, Vec{hi});
}

// Prox of (w/2)||.||^2 with step t: x / (1 + t w).
inline Vec prox_quadratic(const Vec& x, double t, double w) {
  if (t <= 0.0) throw std::invalid_argument("prox_quadratic: t must be > 0");
  if (w < 0.0) throw std::invalid_argument("prox_quadratic: w must be >= 0");
  return scaled(x, 1.0 / (1.0 + t * w));
}

enum class ProxKind { l1, group_l1_pairs, indicator_nonneg, indicator_box, zero, quadratic };

// A prox-friendly convex function: evaluation plus proximity operator.
// Indicator kinds project independently of the step size. Evaluation of an
// indicator tolerates roundoff-scale boundary violations (breach up to
// 1e-9 * (1 + ||x||_inf) counts as feasible) so that objectives stay finite
// along trajectories that approach the set from outside.
class ProxFn {
 public:
  static ProxFn l1(double weight) { return ProxFn(ProxKind::l1, check_weight(weight)); }

  // Isotropic pair norm on a stacked [p; q] vector of even length.
  static ProxFn group_l1_pairs(double weight) {
    return ProxFn(ProxKind::group_l1_pairs, check_weight(weight));
  }

  static ProxFn nonneg() { return ProxFn(ProxKind::indicator_nonneg, 0.0); }

  static ProxFn box(Vec lo, Vec hi) {
    if (lo.size() != hi.size() || lo.empty()) {
      throw std::invalid_argument("ProxFn::box: lo/hi must be equal-sized and nonempty");
    }
    for (std::size_t i = 0; i < lo.size(); ++i) {
      if (lo[i] > hi[i]) throw std::invalid_argument("ProxFn::box: lo > hi");
    }
    ProxFn f(ProxKind::indicator_box, 0.0);
    f.lo_ = std::move(lo);
    f.hi_ = std::move(hi);
    return f;
  }

  static ProxFn box(double lo, double hi) { return box(Vec{lo}, Vec{hi}); }

  static ProxFn zero() { return ProxFn(ProxKind::zero, 0.0); }

  static ProxFn quadratic(double weight) {
    return ProxFn(ProxKind::quadratic, check_weight(weight));
  }

  ProxKind kind() const { return kind_; }
  double weight() const { return weight_; }
  bool is_zero() const { return kind_ == ProxKind::zero; }
  bool is_indicator() const {
    return kind_ == ProxKind::indicator_nonneg || kind_ == ProxKind::indicator_box;
  }

  Vec prox(const Vec& x, double t) const {
    if (t <= 0.0) throw std::invalid_argument("ProxFn::prox: t must be > 0");
    switch (kind_) {
      case ProxKind::l1:
        return weight_ > 0.0 ? prox_l1(x, t * weight_) : x;
      case ProxKind::group_l1_pairs: {
        if (weight_ == 0.0) return x;
        auto [p, q] = split_pairs(x);
        auto [rp, rq] = prox_group_l1_pairs(p, q, t * weight_);
        return join_pairs(rp, rq);
      }
      case ProxKind::indicator_nonneg:
        return project_nonneg(x);
      case ProxKind::indicator_box:
        return project_box(x, lo_, hi_);
      case ProxKind::zero:
        return x;
      case ProxKind::quadratic:
        return prox_quadratic(x, t, weight_);
    }
    throw std::logic_error("unreachable");
  }

  double evaluate(const Vec& x) const {
    switch (kind_) {
      case ProxKind::l1:
        return weight_ * l1_norm(x);
      case ProxKind::group_l1_pairs: {
        auto [p, q] = split_pairs(x);
        double s = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) s += std::hypot(p[i], q[i]);
        return weight_ * s;
      }
      case ProxKind::indicator_nonneg:
      case ProxKind::indicator_box: {
        const double tol = 1e-9 * (1.0 + linf_norm(x));
        return breach(x) > tol ? kInf : 0.0;
      }
      case ProxKind::zero:
        return 0.0;
      case ProxKind::quadratic:
        return 0.5 * weight_ * norm_sq(x);
    }
    throw std::logic_error("unreachable");
  }

  // Largest componentwise constraint violation; 0 for non-indicators.
  double breach(const Vec& x) const {
    if (!is_indicator()) return 0.0;
    double b = 0.0;
    const bool scalar = lo_.size() == 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (kind_ == ProxKind::indicator_nonneg) {
        b = std::max(b, -x[i]);
      } else {
        const double l = scalar ? lo_[0] : lo_[i];
        const double h = scalar ? hi_[0] : hi_[i];
        b = std::max({b, l - x[i], x[i] - h});
      }
    }
    return b;
  }

 private:
  ProxFn(ProxKind k, double w) : kind_(k), weight_(w) {}

  static double check_weight(double w) {
    if (w < 0.0) throw std::invalid_argument("ProxFn: weight must be >= 0");
    return w;
  }

  static std::pair<Vec, Vec> split_pairs(const Vec& x) {
    if (x.size() % 2 != 0) {
      throw std::invalid_argument("group_l1_pairs: stacked vector length must be even");
    }
    const std::size_t half = x.size() / 2;
    return {Vec(x.begin(), x.begin() + half), Vec(x.begin() + half, x.end())};
  }

  static Vec join_pairs(const Vec& p, const Vec& q) {
    Vec r;
    r.reserve(p.size() + q.size());
    r.insert(r.end(), p.begin(), p.end());
    r.insert(r.end(), q.begin(), q.end());
    return r;
  }

  ProxKind kind_;
  double weight_;
  Vec lo_, hi_;  // box bounds; size 1 broadcasts
};

// prox_{t f*}(x) computed through Moreau decomposition:
// prox_{t f*}(x) = x - t * prox_{f/t}(x/t).
inline Vec conjugate_prox_via_moreau(const ProxFn& f, const Vec& x, double t) {
  if (t <= 0.0) throw std::invalid_argument("conjugate_prox_via_moreau: t must be > 0");
  Vec inner = f.prox(scaled(x, 1.0 / t), 1.0 / t);
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - t * inner[i];
  return r;
}

// x - prox_f(x, t), the residual map paired with every prox.
inline Vec residual_shrink(const ProxFn& f, const Vec& x, double t) {
  return sub(x, f.prox(x, t));
}

// Smooth term descriptor: value, gradient, and the cocoercivity constant
// beta (gradient is 1/beta-Lipschitz). least_squares is (1/2)||Ax - a||^2
// with beta = 1/lambda_max(A^T A); the zero function has beta = +inf.
class SmoothFn {
 public:
  static SmoothFn least_squares(LinearMap A, Vec a, std::optional<double> beta = std::nullopt) {
    if (a.size() != A.out_dim()) {
      throw std::invalid_argument("least_squares: data length must match operator out_dim");
    }
    double b;
    if (beta) {
      if (*beta <= 0.0) throw std::invalid_argument("least_squares: beta must be > 0");
      b = *beta;
    } else {
      const auto est = op_norm_sq_estimate(A, 1e-10, 100000);
      b = est.value > 0.0 ? 1.0 / est.value : kInf;
    }
    SmoothFn f;
    f.A_ = std::move(A);
    f.a_ = std::move(a);
    f.beta_ = b;
    return f;
  }

  static SmoothFn zero() { return SmoothFn(); }

  bool is_zero() const { return !A_.has_value(); }
  double beta() const { return beta_; }
  const LinearMap& A() const { return A_.value(); }
  const Vec& data() const { return a_; }

  double value(const Vec& x) const {
    if (is_zero()) return 0.0;
    Vec r = sub(A_->apply(x), a_);
    return 0.5 * norm_sq(r);
  }

  Vec gradient(const Vec& x) const {
    if (is_zero()) return Vec(x.size(), 0.0);
    return A_->adjoint(sub(A_->apply(x), a_));
  }

 private:
  SmoothFn() = default;

  std::optional<LinearMap> A_;
  Vec a_;
  double beta_ = kInf;
};

}  // namespace pdfp

#endif  // PDFP_PROX_HPP_
