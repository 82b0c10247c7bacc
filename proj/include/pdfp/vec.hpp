#ifndef PDFP_VEC_HPP_
#define PDFP_VEC_HPP_

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdfp {

using Vec = std::vector<double>;

inline void check_same_size(const Vec& a, const Vec& b, const char* where) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(where) + ": size mismatch, " +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
}

inline double dot(const Vec& a, const Vec& b) {
  check_same_size(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm_sq(const Vec& a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(norm_sq(a)); }

inline double l1_norm(const Vec& a) {
  double s = 0.0;
  for (double x : a) s += std::abs(x);
  return s;
}

inline double linf_norm(const Vec& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

inline Vec sub(const Vec& a, const Vec& b) {
  check_same_size(a, b, "sub");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec add(const Vec& a, const Vec& b) {
  check_same_size(a, b, "add");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec scaled(const Vec& a, double c) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

// y += c * x
inline void axpy(double c, const Vec& x, Vec& y) {
  check_same_size(x, y, "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

inline double dist_linf(const Vec& a, const Vec& b) {
  check_same_size(a, b, "dist_linf");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace pdfp

#endif  // PDFP_VEC_HPP_
