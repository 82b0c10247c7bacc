#ifndef PDFP_LINEAR_MAP_HPP_
#define PDFP_LINEAR_MAP_HPP_

#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include "pdfp/rng.hpp"
#include "pdfp/vec.hpp"

namespace pdfp {

enum class MapKind { dense, first_difference, grad2d, conv2d_periodic, identity, zero };

// Immutable linear operator with forward and adjoint application.
// Structured kinds (differences, gradients, periodic convolution) are applied
// directly; dense maps hold a row-major coefficient array.
class LinearMap {
 public:
  MapKind kind() const { return kind_; }
  std::size_t in_dim() const { return in_dim_; }
  std::size_t out_dim() const { return out_dim_; }

  // Dense rows x cols map from a row-major coefficient array.
  static LinearMap dense(std::size_t rows, std::size_t cols, Vec entries) {
    require_positive(rows, "rows");
    require_positive(cols, "cols");
    if (entries.size() != rows * cols) {
      throw std::invalid_argument("dense: expected " + std::to_string(rows * cols) +
                                  " entries, got " + std::to_string(entries.size()));
    }
    LinearMap m(MapKind::dense, cols, rows);
    m.data_ = std::move(entries);
    return m;
  }

  // (n-1) x n forward difference: (Bx)_i = x_{i+1} - x_i.
  static LinearMap first_difference(std::size_t n) {
    if (n < 2) throw std::invalid_argument("first_difference: need n >= 2");
    return LinearMap(MapKind::first_difference, n, n - 1);
  }

  // Discrete gradient of an h x w image (row-major): forward differences with
  // a zero last column (horizontal) and zero last row (vertical), the two
  // channels stacked as [dx; dy] of length 2*h*w.
  static LinearMap grad2d(std::size_t h, std::size_t w) {
    if (h < 2 || w < 2) throw std::invalid_argument("grad2d: need dims >= 2");
    LinearMap m(MapKind::grad2d, h * w, 2 * h * w);
    m.h_ = h;
    m.w_ = w;
    return m;
  }

  // Periodic (circular) 2-D convolution of an h x w image with a kh x kw
  // kernel anchored at its centre (kh/2, kw/2).
  static LinearMap conv2d_periodic(Vec kernel, std::size_t kh, std::size_t kw,
                                   std::size_t h, std::size_t w) {
    require_positive(kh, "kernel rows");
    require_positive(kw, "kernel cols");
    require_positive(h, "height");
    require_positive(w, "width");
    if (kernel.size() != kh * kw) {
      throw std::invalid_argument("conv2d_periodic: kernel size mismatch");
    }
    if (kh > h || kw > w) {
      throw std::invalid_argument("conv2d_periodic: kernel larger than image");
    }
    LinearMap m(MapKind::conv2d_periodic, h * w, h * w);
    m.data_ = std::move(kernel);
    m.h_ = h;
    m.w_ = w;
    m.kh_ = kh;
    m.kw_ = kw;
    return m;
  }

  static LinearMap identity(std::size_t n) {
    require_positive(n, "n");
    return LinearMap(MapKind::identity, n, n);
  }

  static LinearMap zero(std::size_t n, std::size_t m) {
    require_positive(n, "n");
    require_positive(m, "m");
    return LinearMap(MapKind::zero, n, m);
  }

  Vec apply(const Vec& x) const {
    check_len(x.size(), in_dim_, "apply");
    switch (kind_) {
      case MapKind::dense: {
        Vec y(out_dim_, 0.0);
        for (std::size_t i = 0; i < out_dim_; ++i) {
          double s = 0.0;
          const double* row = data_.data() + i * in_dim_;
          for (std::size_t j = 0; j < in_dim_; ++j) s += row[j] * x[j];
          y[i] = s;
        }
        return y;
      }
      case MapKind::first_difference: {
        Vec y(out_dim_);
        for (std::size_t i = 0; i + 1 < in_dim_; ++i) y[i] = x[i + 1] - x[i];
        return y;
      }
      case MapKind::grad2d: {
        Vec y(out_dim_, 0.0);
        const std::size_t hw = h_ * w_;
        for (std::size_t i = 0; i < h_; ++i) {
          for (std::size_t j = 0; j < w_; ++j) {
            const std::size_t p = i * w_ + j;
            if (j + 1 < w_) y[p] = x[p + 1] - x[p];
            if (i + 1 < h_) y[hw + p] = x[p + w_] - x[p];
          }
        }
        return y;
      }
      case MapKind::conv2d_periodic:
        return convolve(x, /*adjoint=*/false);
      case MapKind::identity:
        return x;
      case MapKind::zero:
        return Vec(out_dim_, 0.0);
    }
    throw std::logic_error("unreachable");
  }

  Vec adjoint(const Vec& y) const {
    check_len(y.size(), out_dim_, "adjoint");
    switch (kind_) {
      case MapKind::dense: {
        Vec x(in_dim_, 0.0);
        for (std::size_t i = 0; i < out_dim_; ++i) {
          const double* row = data_.data() + i * in_dim_;
          const double yi = y[i];
          for (std::size_t j = 0; j < in_dim_; ++j) x[j] += row[j] * yi;
        }
        return x;
      }
      case MapKind::first_difference: {
        Vec x(in_dim_, 0.0);
        for (std::size_t i = 0; i + 1 < in_dim_; ++i) {
          x[i] -= y[i];
          x[i + 1] += y[i];
        }
        return x;
      }
      case MapKind::grad2d: {
        Vec x(in_dim_, 0.0);
        const std::size_t hw = h_ * w_;
        for (std::size_t i = 0; i < h_; ++i) {
          for (std::size_t j = 0; j < w_; ++j) {
            const std::size_t p = i * w_ + j;
            if (j + 1 < w_) {
              x[p] -= y[p];
              x[p + 1] += y[p];
            }
            if (i + 1 < h_) {
              x[p] -= y[hw + p];
              x[p + w_] += y[hw + p];
            }
          }
        }
        return x;
      }
      case MapKind::conv2d_periodic:
        return convolve(y, /*adjoint=*/true);
      case MapKind::identity:
        return y;
      case MapKind::zero:
        return Vec(in_dim_, 0.0);
    }
    throw std::logic_error("unreachable");
  }

  // B(B^T v), the symmetric PSD map the power method iterates on.
  Vec apply_bbt(const Vec& v) const { return apply(adjoint(v)); }

  // Row-major coefficients of a dense map.
  const Vec& dense_entries() const {
    if (kind_ != MapKind::dense) throw std::logic_error("dense_entries: not a dense map");
    return data_;
  }

 private:
  LinearMap(MapKind k, std::size_t in, std::size_t out) : kind_(k), in_dim_(in), out_dim_(out) {}

  static void require_positive(std::size_t v, const char* name) {
    if (v == 0) throw std::invalid_argument(std::string(name) + " must be positive");
  }

  static void check_len(std::size_t got, std::size_t want, const char* where) {
    if (got != want) {
      throw std::invalid_argument(std::string(where) + ": expected length " +
                                  std::to_string(want) + ", got " + std::to_string(got));
    }
  }

  Vec convolve(const Vec& x, bool adjoint) const {
    Vec y(in_dim_, 0.0);
    const std::ptrdiff_t ch = static_cast<std::ptrdiff_t>(kh_ / 2);
    const std::ptrdiff_t cw = static_cast<std::ptrdiff_t>(kw_ / 2);
    const std::ptrdiff_t H = static_cast<std::ptrdiff_t>(h_);
    const std::ptrdiff_t W = static_cast<std::ptrdiff_t>(w_);
    for (std::ptrdiff_t i = 0; i < H; ++i) {
      for (std::ptrdiff_t j = 0; j < W; ++j) {
        double s = 0.0;
        for (std::ptrdiff_t a = 0; a < static_cast<std::ptrdiff_t>(kh_); ++a) {
          for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(kw_); ++b) {
            // forward: y(i,j) = sum k(a,b) x(i+a-ch, j+b-cw); adjoint flips signs
            std::ptrdiff_t si = adjoint ? i - a + ch : i + a - ch;
            std::ptrdiff_t sj = adjoint ? j - b + cw : j + b - cw;
            si = ((si % H) + H) % H;
            sj = ((sj % W) + W) % W;
            s += data_[static_cast<std::size_t>(a) * kw_ + static_cast<std::size_t>(b)] *
                 x[static_cast<std::size_t>(si * W + sj)];
          }
        }
        y[static_cast<std::size_t>(i * W + j)] = s;
      }
    }
    return y;
  }

  MapKind kind_;
  std::size_t in_dim_;
  std::size_t out_dim_;
  Vec data_;                       // dense entries or convolution kernel
  std::size_t h_ = 0, w_ = 0;      // image dims for grad2d / conv2d
  std::size_t kh_ = 0, kw_ = 0;    // kernel dims for conv2d
};

struct OpNormEstimate {
  double value = 0.0;  // estimate of lambda_max(B B^T)
  int iterations_used = 0;
  bool converged = false;
};

// Power iteration on v -> B(B^T v). The Rayleigh quotient approaches
// lambda_max(B B^T) from below, so the returned value never overshoots the
// true norm by more than the convergence tolerance. Deterministic given seed.
inline OpNormEstimate op_norm_sq_estimate(const LinearMap& map, double tol = 1e-9,
                                          int max_iter = 10000, std::uint64_t seed = 1) {
  if (tol <= 0.0) throw std::invalid_argument("op_norm_sq_estimate: tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("op_norm_sq_estimate: max_iter must be >= 1");

  CounterRng rng(seed);
  Vec v = rng.normal_vec(map.out_dim());
  const double vn = norm(v);
  if (vn == 0.0) v[0] = 1.0; else for (auto& c : v) c /= vn;

  OpNormEstimate est;
  double prev = -1.0;
  for (int k = 0; k < max_iter; ++k) {
    Vec w = map.apply_bbt(v);
    const double rq = dot(v, w);  // Rayleigh quotient; ||v|| = 1
    est.value = rq;
    est.iterations_used = k + 1;
    const double wn = norm(w);
    if (wn == 0.0) {
      est.value = 0.0;
      est.converged = true;
      return est;
    }
    if (k > 0 && std::abs(rq - prev) <= tol * std::max(1.0, std::abs(rq))) {
      est.converged = true;
      return est;
    }
    prev = rq;
    for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] / wn;
  }
  return est;  // converged stays false; estimate still usable
}

}  // namespace pdfp

#endif  // PDFP_LINEAR_MAP_HPP_
