#ifndef PDFP_DIAGNOSTICS_HPP_
#define PDFP_DIAGNOSTICS_HPP_

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdfp/io.hpp"
#include "pdfp/solver.hpp"

namespace pdfp {

struct ReferenceSolution {
  PrimalDualState state;
  bool converged = false;  // KKT residual reached 1e-6
  double kkt = kInf;
  int iterations = 0;
};

// High-accuracy stand-in for the limit point: runs the configured scheme
// with a large budget and a 1e-13 fixed-point tolerance, then grades the
// result by its KKT residual.
inline ReferenceSolution reference_solution(const ProblemSpec& problem, SolverConfig cfg,
                                            int big_iter = 1000000) {
  if (big_iter < 1) throw std::invalid_argument("reference_solution: big_iter must be >= 1");
  cfg.max_iter = big_iter;
  cfg.fp_tol = 1e-13;
  cfg.record_every = big_iter;
  SolveResult res = solve(problem, cfg);
  ReferenceSolution ref;
  ref.kkt = kkt_residual(problem, res.state.x, dual_in_f2_scale(res.state, cfg),
                         res.bbt_norm_sq);
  ref.converged = ref.kkt <= 1e-6;
  ref.iterations = res.iterations;
  ref.state = std::move(res.state);
  return ref;
}

struct GridOracleResult {
  Vec x;
  double value = kInf;
};

namespace detail {

// Exhaustive scan of [lo_i, lo_i + (count_i-1)*step]^d in lexicographic
// order (first coordinate outermost); strict improvement keeps the first
// minimiser on ties.
inline GridOracleResult grid_scan(const ProblemSpec& problem, const Vec& lo,
                                  const std::vector<std::size_t>& count, double step) {
  const std::size_t d = lo.size();
  std::vector<std::size_t> idx(d, 0);
  Vec x(d);
  GridOracleResult best;
  while (true) {
    for (std::size_t i = 0; i < d; ++i) x[i] = lo[i] + static_cast<double>(idx[i]) * step;
    const double val = objective(problem, x);
    if (val < best.value || best.x.empty()) {
      best.value = val;
      best.x = x;
    }
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (++idx[i] < count[i]) break;
      idx[i] = 0;
      if (i == 0) return best;
    }
    if (i == 0 && idx[0] == 0) return best;
  }
}

}  // namespace detail

// Brute-force minimiser over the box [lo, hi]^d at the requested resolution,
// for primal dimension <= 3. Large grids are handled by coarse-to-fine
// passes: scan at the widest affordable spacing, then rescan a +/-10-cell
// window around the incumbent until the spacing reaches `step`. Each pass is
// exhaustive over its grid, so for the convex objectives this oracle serves
// the result matches a full scan at resolution `step`.
inline GridOracleResult grid_oracle(const ProblemSpec& problem, double lo, double hi,
                                    double step) {
  const std::size_t d = problem.primal_dim();
  if (d > 3) throw std::invalid_argument("grid_oracle: refuses primal dimension > 3");
  if (!(lo < hi)) throw std::invalid_argument("grid_oracle: need lo < hi");
  if (!(step > 0.0)) throw std::invalid_argument("grid_oracle: need step > 0");

  const std::size_t per_dim_cap = d == 1 ? 2000001 : (d == 2 ? 2001 : 201);

  Vec cur_lo(d, lo), cur_hi(d, hi);
  while (true) {
    double range = 0.0;
    for (std::size_t i = 0; i < d; ++i) range = std::max(range, cur_hi[i] - cur_lo[i]);
    const std::size_t want = static_cast<std::size_t>(std::floor(range / step)) + 1;

    if (want <= per_dim_cap) {
      std::vector<std::size_t> count(d);
      for (std::size_t i = 0; i < d; ++i) {
        count[i] = static_cast<std::size_t>(std::floor((cur_hi[i] - cur_lo[i]) / step)) + 1;
      }
      return detail::grid_scan(problem, cur_lo, count, step);
    }

    const double coarse = range / static_cast<double>(per_dim_cap - 1);
    std::vector<std::size_t> count(d);
    for (std::size_t i = 0; i < d; ++i) {
      count[i] = static_cast<std::size_t>(std::floor((cur_hi[i] - cur_lo[i]) / coarse)) + 1;
    }
    const GridOracleResult stage = detail::grid_scan(problem, cur_lo, count, coarse);
    for (std::size_t i = 0; i < d; ++i) {
      cur_lo[i] = std::max(lo, stage.x[i] - 10.0 * coarse);
      cur_hi[i] = std::min(hi, stage.x[i] + 10.0 * coarse);
    }
  }
}

// Largest single-step increase of ||u^k - u*||_lambda along a trajectory;
// nonpositive when the distance is monotonically nonincreasing.
inline double monotonicity_check(const std::vector<PrimalDualState>& states,
                                 const PrimalDualState& u_star, double lambda) {
  double worst = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const double dist = lambda_norm(states[k], u_star, lambda);
    if (k > 0) worst = std::max(worst, dist - prev);
    prev = dist;
  }
  return worst;
}

// Geometric-mean contraction factor of ||u^k - u*|| in the lambda-norm with
// weight `weighted_lambda` over iterations [win_start, win_end]. A distance
// that underflows to zero truncates the window there (ratio 0).
inline double rate_estimate(const std::vector<PrimalDualState>& states,
                            const PrimalDualState& u_star, double weighted_lambda,
                            std::size_t win_start, std::size_t win_end) {
  if (win_end >= states.size() || win_start >= win_end) {
    throw std::invalid_argument("rate_estimate: bad window");
  }
  std::vector<double> dist(win_end - win_start + 1);
  for (std::size_t k = 0; k < dist.size(); ++k) {
    dist[k] = lambda_norm(states[win_start + k], u_star, weighted_lambda);
  }
  if (dist.front() == 0.0) return 0.0;
  std::size_t last = dist.size() - 1;
  for (std::size_t k = 1; k < dist.size(); ++k) {
    if (dist[k] == 0.0) {
      last = k;
      break;
    }
  }
  return std::pow(dist[last] / dist.front(), 1.0 / static_cast<double>(last));
}

struct RateReport {
  double eta_observed = std::numeric_limits<double>::quiet_NaN();
  double eta_theoretical = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double delta = 0.0;  // strong-monotonicity modulus of the f2 conjugate's subdifferential
  std::size_t window_start = 0;
  std::size_t window_end = 0;
  bool valid = false;  // contraction certified: max(eta1, eta2) < 1
};

// eta1 = 1/sqrt(1 + lambda*delta/gamma); the certified factor is
// max(eta1, eta2). delta is the strong-monotonicity modulus of the
// subdifferential of f2's convex conjugate: for f2 = (w/2)||.||^2 the
// conjugate gradient is z/w, so delta = 1/w exactly.
inline RateReport theoretical_rate(double lambda, double gamma, double delta, double eta2) {
  if (lambda <= 0.0 || gamma <= 0.0 || delta < 0.0 || eta2 < 0.0) {
    throw std::invalid_argument("theoretical_rate: nonpositive parameter");
  }
  RateReport r;
  r.eta1 = 1.0 / std::sqrt(1.0 + lambda * delta / gamma);
  r.eta2 = eta2;
  r.delta = delta;
  r.eta_theoretical = std::max(r.eta1, eta2);
  r.valid = r.eta_theoretical < 1.0;
  return r;
}

// Contraction factor of x -> x - gamma*grad_f1(x) when grad_f1's spectrum
// lies in [s_min, s_max]: |1 - gamma*s| is convex in s, so endpoints bound it.
inline double eta2_for_interval(double gamma, double s_min, double s_max) {
  if (s_min < 0.0 || s_max < s_min) throw std::invalid_argument("eta2_for_interval: bad bounds");
  return std::max(std::abs(1.0 - gamma * s_min), std::abs(1.0 - gamma * s_max));
}

// ||a - b|| / max(||b||, 1), the scale-guarded relative error used to grade
// solutions against ground truth or a high-accuracy reference.
inline double l2_relative_error(const Vec& a, const Vec& b) {
  return norm(sub(a, b)) / std::max(norm(b), 1.0);
}

struct SupportMetrics {
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
};

// Support = indices with |x| > threshold; empty/empty ratios count as 1.
inline SupportMetrics support_metrics(const Vec& x_est, const Vec& x_true, double threshold) {
  check_same_size(x_est, x_true, "support_metrics");
  if (threshold < 0.0) throw std::invalid_argument("support_metrics: threshold must be >= 0");
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < x_est.size(); ++i) {
    const bool est = std::abs(x_est[i]) > threshold;
    const bool tru = std::abs(x_true[i]) > threshold;
    tp += est && tru;
    fp += est && !tru;
    fn += !est && tru;
  }
  SupportMetrics m;
  m.precision = (tp + fp) == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  m.recall = (tp + fn) == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  m.f1 = (m.precision + m.recall) == 0.0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

inline constexpr const char* kHistoryCsvHeader =
    "iter,objective,fp_residual_lambda,kkt_residual,feasibility_violation,elapsed_ms";

inline void emit_history_csv(const std::vector<IterationRecord>& history, std::ostream& out) {
  out << kHistoryCsvHeader << "\n";
  for (const auto& r : history) {
    out << r.iter << ',' << format_double(r.objective) << ','
        << format_double(r.fp_residual_lambda) << ',' << format_double(r.kkt_residual) << ','
        << format_double(r.feasibility_violation) << ',' << format_double(r.elapsed_ms)
        << "\n";
  }
}

inline void emit_history_csv(const std::vector<IterationRecord>& history,
                             const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_history_csv: cannot open " + path.string());
  emit_history_csv(history, out);
  if (!out) throw std::runtime_error("emit_history_csv: write failed for " + path.string());
}

inline std::vector<IterationRecord> parse_history_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHistoryCsvHeader) {
    throw std::runtime_error("parse_history_csv: missing or unexpected header");
  }
  std::vector<IterationRecord> history;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) throw std::runtime_error("parse_history_csv: bad row '" + line + "'");
    IterationRecord r;
    r.iter = static_cast<int>(std::stol(cells[0]));
    r.objective = parse_double(cells[1]);
    r.fp_residual_lambda = parse_double(cells[2]);
    r.kkt_residual = parse_double(cells[3]);
    r.feasibility_violation = parse_double(cells[4]);
    r.elapsed_ms = parse_double(cells[5]);
    history.push_back(r);
  }
  return history;
}

inline std::vector<IterationRecord> parse_history_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("parse_history_csv: cannot open " + path.string());
  return parse_history_csv(in);
}

}  // namespace pdfp

#endif  // PDFP_DIAGNOSTICS_HPP_
