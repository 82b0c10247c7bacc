#ifndef PDFP_PROBLEMS_HPP_
#define PDFP_PROBLEMS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "pdfp/problem.hpp"
#include "pdfp/rng.hpp"

namespace pdfp {

// Regression with sparsity in both the coefficients and their successive
// differences:
//   (1/2)||Ax - a||^2 + mu1 ||Bx||_1 + mu2 ||x||_1,  B = first difference.
struct FusedLassoSpec {
  std::size_t r = 50;        // observations
  std::size_t n = 200;       // variables
  double mu1 = 20.0;         // difference penalty
  double mu2 = 2.0;          // coefficient penalty
  double noise_sigma = 0.01;
  std::size_t sparsity = 4;  // nonzero blocks in x_true
  std::uint64_t seed = 1;
};

struct FusedLassoData {
  LinearMap A;
  Vec a;
  Vec x_true;
};

// Draw order from CounterRng(seed): A entries row-major (r*n normals), then
// per block one uniform (start) and one normal (amplitude), then r noise
// normals. Amplitudes are kept away from zero: amp = sign(z) * (1 + |z|).
inline FusedLassoData synthesize_fused_lasso(const FusedLassoSpec& spec) {
  if (spec.r < 1 || spec.n < 2) {
    throw std::invalid_argument("synthesize_fused_lasso: need r >= 1, n >= 2");
  }
  if (spec.mu1 < 0.0 || spec.mu2 < 0.0 || spec.noise_sigma < 0.0) {
    throw std::invalid_argument("synthesize_fused_lasso: negative weight");
  }
  CounterRng rng(spec.seed);

  Vec entries(spec.r * spec.n);
  for (auto& e : entries) e = rng.normal();
  LinearMap A = LinearMap::dense(spec.r, spec.n, std::move(entries));

  Vec x_true(spec.n, 0.0);
  if (spec.sparsity > 0) {
    const std::size_t block_len =
        std::max<std::size_t>(1, spec.n / (4 * std::max<std::size_t>(1, spec.sparsity)));
    for (std::size_t b = 0; b < spec.sparsity; ++b) {
      const std::size_t start = rng.uniform_index(spec.n - block_len + 1);
      const double z = rng.normal();
      const double amp = std::copysign(1.0 + std::abs(z), z);
      for (std::size_t i = start; i < start + block_len; ++i) x_true[i] = amp;
    }
  }

  Vec a = A.apply(x_true);
  for (auto& c : a) c += spec.noise_sigma * rng.normal();
  return {std::move(A), std::move(a), std::move(x_true)};
}

// Zero penalty weights map to the zero function rather than a zero-weight
// norm, so downstream schemes that require f3 = 0 accept the problem.
inline ProblemSpec build_fused_lasso(LinearMap A, Vec a, double mu1, double mu2) {
  if (mu1 < 0.0 || mu2 < 0.0) throw std::invalid_argument("build_fused_lasso: negative mu");
  const std::size_t n = A.in_dim();
  if (a.size() != A.out_dim()) {
    throw std::invalid_argument("build_fused_lasso: data length must match A.out_dim");
  }
  SmoothFn f1 = SmoothFn::least_squares(std::move(A), std::move(a));
  return ProblemSpec{std::move(f1),
                     mu1 > 0.0 ? ProxFn::l1(mu1) : ProxFn::zero(),
                     LinearMap::first_difference(n),
                     mu2 > 0.0 ? ProxFn::l1(mu2) : ProxFn::zero()};
}

// Image restoration with isotropic total variation and an optional
// nonnegativity constraint:
//   min_{x in C} (1/2)||Ax - a||^2 + mu ||Bx||_{2,1},  B = discrete gradient.
struct TvRestorationSpec {
  std::size_t height = 16;
  std::size_t width = 16;
  Vec kernel;                     // blur kernel, empty = no blur (A = I)
  std::size_t kernel_rows = 0;
  std::size_t kernel_cols = 0;
  double mu = 0.05;
  double noise_sigma = 0.01;
  bool nonneg = true;
  std::uint64_t seed = 1;
};

struct TvRestorationData {
  LinearMap A;
  Vec a;
  Vec x_true;
};

inline Vec averaging_kernel(std::size_t k) {
  if (k == 0 || k % 2 == 0) throw std::invalid_argument("averaging_kernel: k must be odd");
  return Vec(k * k, 1.0 / static_cast<double>(k * k));
}

// Ground truth is a 0/1 checkerboard (block = max(2, min(h,w)/4)); the
// observation is its blur plus Gaussian noise. Draw order from
// CounterRng(seed): h*w noise normals.
inline TvRestorationData synthesize_tv_restoration(const TvRestorationSpec& spec) {
  if (spec.height < 2 || spec.width < 2) {
    throw std::invalid_argument("synthesize_tv_restoration: dims must be >= 2");
  }
  if (spec.mu < 0.0 || spec.noise_sigma < 0.0) {
    throw std::invalid_argument("synthesize_tv_restoration: negative weight");
  }
  const std::size_t h = spec.height, w = spec.width;
  const std::size_t block = std::max<std::size_t>(2, std::min(h, w) / 4);

  Vec x_true(h * w);
  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = 0; j < w; ++j) {
      x_true[i * w + j] = ((i / block + j / block) % 2 == 0) ? 1.0 : 0.0;
    }
  }

  LinearMap A = spec.kernel.empty()
                    ? LinearMap::identity(h * w)
                    : LinearMap::conv2d_periodic(spec.kernel, spec.kernel_rows,
                                                 spec.kernel_cols, h, w);

  CounterRng rng(spec.seed);
  Vec a = A.apply(x_true);
  for (auto& c : a) c += spec.noise_sigma * rng.normal();
  return {std::move(A), std::move(a), std::move(x_true)};
}

inline ProblemSpec build_tv_restoration(LinearMap A, Vec a, double mu, bool nonneg,
                                        std::size_t height, std::size_t width) {
  if (mu < 0.0) throw std::invalid_argument("build_tv_restoration: negative mu");
  if (A.in_dim() != height * width) {
    throw std::invalid_argument("build_tv_restoration: operator dims do not match image");
  }
  if (a.size() != A.out_dim()) {
    throw std::invalid_argument("build_tv_restoration: data length must match A.out_dim");
  }
  SmoothFn f1 = SmoothFn::least_squares(std::move(A), std::move(a));
  return ProblemSpec{std::move(f1),
                     mu > 0.0 ? ProxFn::group_l1_pairs(mu) : ProxFn::zero(),
                     LinearMap::grad2d(height, width),
                     nonneg ? ProxFn::nonneg() : ProxFn::zero()};
}

}  // namespace pdfp

#endif  // PDFP_PROBLEMS_HPP_
