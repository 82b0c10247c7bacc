// Test-only reference computations, deliberately independent of the library
// code paths they check: plain nested-vector matrices, a local soft
// threshold, a Jacobi eigensolver, and straight-line transcriptions of the
// iteration schemes.
#ifndef PDFP_TESTS_ORACLES_HPP_
#define PDFP_TESTS_ORACLES_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;

inline Vec matvec(const Mat& M, const Vec& x) {
  Vec y(M.size(), 0.0);
  for (std::size_t i = 0; i < M.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += M[i][j] * x[j];
  }
  return y;
}

inline Vec mat_t_vec(const Mat& M, const Vec& y) {
  if (M.empty()) return {};
  Vec x(M[0].size(), 0.0);
  for (std::size_t i = 0; i < M.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += M[i][j] * y[i];
  }
  return x;
}

inline Mat mat_mul_t(const Mat& M) {  // M * M^T
  Mat r(M.size(), Vec(M.size(), 0.0));
  for (std::size_t i = 0; i < M.size(); ++i) {
    for (std::size_t j = 0; j < M.size(); ++j) {
      for (std::size_t k = 0; k < M[0].size(); ++k) r[i][j] += M[i][k] * M[j][k];
    }
  }
  return r;
}

inline Mat mat_t_mul(const Mat& M) {  // M^T * M
  const std::size_t n = M.empty() ? 0 : M[0].size();
  Mat r(n, Vec(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < M.size(); ++k) r[i][j] += M[k][i] * M[k][j];
    }
  }
  return r;
}

inline double soft(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

inline Vec soft(const Vec& x, double t) {
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = soft(x[i], t);
  return y;
}

// All eigenvalues of a symmetric matrix by cyclic Jacobi sweeps, descending.
inline Vec jacobi_eigenvalues(Mat A) {
  const std::size_t n = A.size();
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += A[p][q] * A[p][q];
    }
    if (off < 1e-26) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(A[p][q]) < 1e-300) continue;
        const double phi = 0.5 * std::atan2(2.0 * A[p][q], A[q][q] - A[p][p]);
        const double c = std::cos(phi), s = std::sin(phi);
        const double app = A[p][p], aqq = A[q][q], apq = A[p][q];
        A[p][p] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
        A[q][q] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
        A[p][q] = A[q][p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = A[k][p], akq = A[k][q];
          A[k][p] = A[p][k] = c * akp - s * akq;
          A[k][q] = A[q][k] = s * akp + c * akq;
        }
      }
    }
  }
  Vec ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = A[i][i];
  std::sort(ev.begin(), ev.end(), std::greater<double>());
  return ev;
}

// Brute-force 1-D prox: argmin over the grid of f(y) + (1/(2t)) (y-x)^2.
inline double grid_prox_1d(const std::function<double(double)>& f, double x, double t,
                           double lo, double hi, double step) {
  double best_y = lo, best_v = f(lo) + (lo - x) * (lo - x) / (2.0 * t);
  for (double y = lo + step; y <= hi + step / 2; y += step) {
    const double v = f(y) + (y - x) * (y - x) / (2.0 * t);
    if (v < best_v) {
      best_v = v;
      best_y = y;
    }
  }
  return best_y;
}

// Same over a 2-D grid; returns the argmin pair.
inline std::pair<double, double> grid_prox_2d(
    const std::function<double(double, double)>& f, double x0, double x1, double t, double lo,
    double hi, double step) {
  double bp = lo, bq = lo;
  double best = f(lo, lo) + ((lo - x0) * (lo - x0) + (lo - x1) * (lo - x1)) / (2.0 * t);
  for (double p = lo; p <= hi + step / 2; p += step) {
    for (double q = lo; q <= hi + step / 2; q += step) {
      const double v = f(p, q) + ((p - x0) * (p - x0) + (q - x1) * (q - x1)) / (2.0 * t);
      if (v < best) {
        best = v;
        bp = p;
        bq = q;
      }
    }
  }
  return {bp, bq};
}

// Straight-line transcription of one symmetric three-line sweep on a dense
// instance with l1 penalties: f1 = (1/2)||Ax-a||^2 (A empty = no smooth
// term), f2 = mu1 |.|_1 after B, f3 = mu2 |.|_1 (or a projection when
// `nonneg` is set). Returns (v_next, x_next, y).
struct ThreeLineResult {
  Vec v, x, y;
};

inline ThreeLineResult pdfp_step_reference(const Mat& A, const Vec& a, const Mat& B,
                                           double mu1, double mu2, double gamma, double lambda,
                                           const Vec& v, const Vec& x, bool nonneg_f3 = false,
                                           bool zero_f3 = false) {
  Vec grad(x.size(), 0.0);
  if (!A.empty()) {
    Vec r = matvec(A, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= a[i];
    grad = mat_t_vec(A, r);
  }
  const auto prox3 = [&](const Vec& z) {
    if (zero_f3) return z;
    if (nonneg_f3) {
      Vec w(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) w[i] = z[i] > 0 ? z[i] : 0.0;
      return w;
    }
    return soft(z, gamma * mu2);
  };

  Vec btv = mat_t_vec(B, v);
  Vec arg(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) arg[i] = x[i] - gamma * grad[i] - lambda * btv[i];
  Vec y = prox3(arg);

  Vec by = matvec(B, y);
  Vec inner(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) inner[i] = by[i] + v[i];
  Vec v_next(v.size());
  {
    Vec shrunk = soft(inner, (gamma / lambda) * mu1);
    for (std::size_t i = 0; i < v.size(); ++i) v_next[i] = inner[i] - shrunk[i];
  }

  Vec btv2 = mat_t_vec(B, v_next);
  Vec arg2(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    arg2[i] = x[i] - gamma * grad[i] - lambda * btv2[i];
  }
  Vec x_next = prox3(arg2);
  return {v_next, x_next, y};
}

// Straight-line transcription of the four-line two-dual sweep with a
// nonnegativity projection as the constraint.
struct FourLineResult {
  Vec v1, v2, x, y;
};

inline FourLineResult pdfp2oc_step_reference(const Mat& A, const Vec& a, const Mat& B,
                                             double mu1, double gamma, double lambda,
                                             const Vec& v1, const Vec& v2, const Vec& x) {
  Vec grad(x.size(), 0.0);
  if (!A.empty()) {
    Vec r = matvec(A, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= a[i];
    grad = mat_t_vec(A, r);
  }
  Vec btv1 = mat_t_vec(B, v1);
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = x[i] - gamma * grad[i] - lambda * btv1[i] - lambda * v2[i];
  }

  Vec by = matvec(B, y);
  Vec inner(v1.size());
  for (std::size_t i = 0; i < v1.size(); ++i) inner[i] = by[i] + v1[i];
  Vec v1_next(v1.size());
  {
    Vec shrunk = soft(inner, (gamma / lambda) * mu1);
    for (std::size_t i = 0; i < v1.size(); ++i) v1_next[i] = inner[i] - shrunk[i];
  }

  Vec v2_next(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = y[i] + v2[i];
    v2_next[i] = z - (z > 0 ? z : 0.0);
  }

  Vec btv1n = mat_t_vec(B, v1_next);
  Vec x_next(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x_next[i] = x[i] - gamma * grad[i] - lambda * btv1n[i] - lambda * v2_next[i];
  }
  return {v1_next, v2_next, x_next, y};
}

}  // namespace oracle

#endif  // PDFP_TESTS_ORACLES_HPP_
