#ifndef PDFP_CONFIG_HPP_
#define PDFP_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdfp/io.hpp"
#include "pdfp/problems.hpp"
#include "pdfp/solver.hpp"

namespace pdfp {

// Flat INI-style configuration: one `section.key = value` per line, with
// '#'/';' comment lines. Keys are consumed by typed getters; anything left
// unconsumed is reported as unknown.
class ConfigMap {
 public:
  static ConfigMap parse_stream(std::istream& in, const std::string& origin) {
    ConfigMap cfg;
    cfg.origin_ = origin;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto trimmed = trim(line);
      if (trimmed.empty() || trimmed[0] == '#' || trimmed[0] == ';') continue;
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos) {
        throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                    ": expected 'section.key = value'");
      }
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty() || key.find('.') == std::string::npos) {
        throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                    ": key must be 'section.key'");
      }
      if (value.empty()) {
        throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": empty value for " +
                                    key);
      }
      if (cfg.entries_.count(key)) {
        throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": duplicate key " +
                                    key);
      }
      cfg.entries_[key] = value;
    }
    return cfg;
  }

  static ConfigMap parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path.string());
    return parse_stream(in, path.string());
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  std::optional<std::string> take(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    consumed_.insert(key);
    return it->second;
  }

  std::string take_or(const std::string& key, const std::string& fallback) {
    auto v = take(key);
    return v ? *v : fallback;
  }

  double take_double(const std::string& key, double fallback) {
    auto v = take(key);
    if (!v) return fallback;
    try {
      return parse_double(*v);
    } catch (const std::exception&) {
      throw std::invalid_argument(origin_ + ": bad number for " + key + ": '" + *v + "'");
    }
  }

  long take_long(const std::string& key, long fallback) {
    auto v = take(key);
    if (!v) return fallback;
    std::size_t pos = 0;
    long r = 0;
    try {
      r = std::stol(*v, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != v->size()) {
      throw std::invalid_argument(origin_ + ": bad integer for " + key + ": '" + *v + "'");
    }
    return r;
  }

  bool take_bool(const std::string& key, bool fallback) {
    auto v = take(key);
    if (!v) return fallback;
    if (*v == "true") return true;
    if (*v == "false") return false;
    throw std::invalid_argument(origin_ + ": bad boolean for " + key + " (use true/false)");
  }

  std::vector<double> take_double_list(const std::string& key) {
    auto v = take(key);
    std::vector<double> out;
    if (!v) return out;
    std::stringstream ss(*v);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto t = trim(cell);
      if (t.empty()) throw std::invalid_argument(origin_ + ": empty element in list " + key);
      out.push_back(parse_double(t));
    }
    if (out.empty()) throw std::invalid_argument(origin_ + ": empty list for " + key);
    return out;
  }

  // Sections actually present, e.g. {"problem", "solver1", "solver2"}.
  std::set<std::string> sections() const {
    std::set<std::string> s;
    for (const auto& [k, _] : entries_) s.insert(k.substr(0, k.find('.')));
    return s;
  }

  void finish() const {
    std::string unknown;
    for (const auto& [k, _] : entries_) {
      if (!consumed_.count(k)) unknown += (unknown.empty() ? "" : ", ") + k;
    }
    if (!unknown.empty()) {
      throw std::invalid_argument(origin_ + ": unknown keys: " + unknown);
    }
  }

  const std::string& origin() const { return origin_; }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  std::map<std::string, std::string> entries_;
  std::set<std::string> consumed_;
  std::string origin_;
};

struct ProblemConfig {
  std::string type;  // fused_lasso | tv_restoration
  FusedLassoSpec fused;
  TvRestorationSpec tv;
  std::size_t tv_kernel_size = 3;  // 0 or 1 = no blur
  std::string tv_image;            // optional observed image (P2) path
};

struct SolverSection {
  std::string name = "solver";
  Algorithm algorithm = Algorithm::pdfp;
  std::string gamma_raw = "auto";
  std::string lambda_raw = "auto";
  int max_iter = 100000;
  double fp_tol = 1e-10;
  int record_every = 10;
};

struct OutputSection {
  std::string directory = "out";
  bool emit_history = true;
  bool emit_solution = true;
};

struct SweepSection {
  std::vector<double> gammas;   // empty = use solver section value
  std::vector<double> lambdas;  // empty = use solver section value
};

enum class CliMode { solve, compare, sweep, validate };

struct RunConfig {
  ProblemConfig problem;
  std::vector<SolverSection> solvers;
  OutputSection output;
  SweepSection sweep;
};

namespace detail {

inline ProblemConfig parse_problem_section(ConfigMap& cfg) {
  ProblemConfig p;
  auto type = cfg.take("problem.type");
  if (!type) throw std::invalid_argument(cfg.origin() + ": missing problem.type");
  p.type = *type;
  if (p.type == "fused_lasso") {
    p.fused.r = static_cast<std::size_t>(cfg.take_long("problem.r", 50));
    p.fused.n = static_cast<std::size_t>(cfg.take_long("problem.n", 200));
    p.fused.mu1 = cfg.take_double("problem.mu1", 20.0);
    p.fused.mu2 = cfg.take_double("problem.mu2", 2.0);
    p.fused.noise_sigma = cfg.take_double("problem.noise_sigma", 0.01);
    p.fused.sparsity = static_cast<std::size_t>(cfg.take_long("problem.sparsity", 4));
    p.fused.seed = static_cast<std::uint64_t>(cfg.take_long("problem.seed", 1));
  } else if (p.type == "tv_restoration") {
    p.tv_image = cfg.take_or("problem.image", "");
    if (!p.tv_image.empty()) {
      for (const char* k : {"problem.height", "problem.width", "problem.noise_sigma",
                            "problem.seed"}) {
        if (cfg.has(k)) {
          throw std::invalid_argument(cfg.origin() + ": " + k +
                                      " not allowed when problem.image is given");
        }
      }
    }
    p.tv.height = static_cast<std::size_t>(cfg.take_long("problem.height", 16));
    p.tv.width = static_cast<std::size_t>(cfg.take_long("problem.width", 16));
    p.tv_kernel_size = static_cast<std::size_t>(cfg.take_long("problem.kernel_size", 3));
    p.tv.mu = cfg.take_double("problem.mu", 0.05);
    p.tv.noise_sigma = cfg.take_double("problem.noise_sigma", 0.01);
    p.tv.nonneg = cfg.take_bool("problem.nonneg", true);
    p.tv.seed = static_cast<std::uint64_t>(cfg.take_long("problem.seed", 1));
    if (p.tv_kernel_size > 1) {
      if (p.tv_kernel_size % 2 == 0) {
        throw std::invalid_argument(cfg.origin() + ": problem.kernel_size must be odd or 0/1");
      }
      p.tv.kernel = averaging_kernel(p.tv_kernel_size);
      p.tv.kernel_rows = p.tv.kernel_cols = p.tv_kernel_size;
    }
  } else {
    throw std::invalid_argument(cfg.origin() + ": problem.type must be fused_lasso or " +
                                "tv_restoration, got '" + p.type + "'");
  }
  return p;
}

inline SolverSection parse_solver_section(ConfigMap& cfg, const std::string& section) {
  SolverSection s;
  s.name = section;
  auto alg = cfg.take(section + ".algorithm");
  if (!alg) throw std::invalid_argument(cfg.origin() + ": missing " + section + ".algorithm");
  s.algorithm = algorithm_from_name(*alg);
  s.gamma_raw = cfg.take_or(section + ".gamma", "auto");
  s.lambda_raw = cfg.take_or(section + ".lambda", "auto");
  s.max_iter = static_cast<int>(cfg.take_long(section + ".max_iter", 100000));
  s.fp_tol = cfg.take_double(section + ".fp_tol", 1e-10);
  s.record_every = static_cast<int>(cfg.take_long(section + ".record_every", 10));
  return s;
}

inline OutputSection parse_output_section(ConfigMap& cfg) {
  OutputSection o;
  o.directory = cfg.take_or("output.directory", "out");
  o.emit_history = cfg.take_bool("output.emit_history", true);
  o.emit_solution = cfg.take_bool("output.emit_solution", true);
  return o;
}

}  // namespace detail

inline RunConfig parse_run_config(ConfigMap cfg, CliMode mode) {
  RunConfig rc;
  rc.problem = detail::parse_problem_section(cfg);
  rc.output = detail::parse_output_section(cfg);

  if (mode == CliMode::compare) {
    for (int i = 1;; ++i) {
      const std::string section = "solver" + std::to_string(i);
      if (!cfg.has(section + ".algorithm")) break;
      rc.solvers.push_back(detail::parse_solver_section(cfg, section));
    }
    if (rc.solvers.size() < 2) {
      throw std::invalid_argument(cfg.origin() +
                                  ": compare needs sections solver1, solver2, ... (>= 2)");
    }
  } else {
    rc.solvers.push_back(detail::parse_solver_section(cfg, "solver"));
  }

  if (mode == CliMode::sweep) {
    rc.sweep.gammas = cfg.take_double_list("sweep.gamma");
    rc.sweep.lambdas = cfg.take_double_list("sweep.lambda");
  }

  cfg.finish();
  return rc;
}

struct BuiltProblem {
  ProblemSpec spec;
  Vec x_true;  // empty when unknown (user-supplied image)
  std::size_t image_height = 0, image_width = 0;  // nonzero for tv problems
  Vec observed;                                   // the data vector a
};

inline BuiltProblem build_problem(const ProblemConfig& pc) {
  if (pc.type == "fused_lasso") {
    if (pc.fused.r == 0) {
      // r = 0 drops the data term entirely: min mu1||Bx||_1 + mu2||x||_1.
      return BuiltProblem{
          ProblemSpec{SmoothFn::zero(),
                      pc.fused.mu1 > 0.0 ? ProxFn::l1(pc.fused.mu1) : ProxFn::zero(),
                      LinearMap::first_difference(pc.fused.n),
                      pc.fused.mu2 > 0.0 ? ProxFn::l1(pc.fused.mu2) : ProxFn::zero()},
          {},
          0,
          0,
          {}};
    }
    FusedLassoData data = synthesize_fused_lasso(pc.fused);
    BuiltProblem bp{build_fused_lasso(std::move(data.A), data.a, pc.fused.mu1, pc.fused.mu2),
                    std::move(data.x_true), 0, 0, std::move(data.a)};
    return bp;
  }
  TvRestorationSpec spec = pc.tv;
  if (!pc.tv_image.empty()) {
    Image img = read_pgm(pc.tv_image);
    LinearMap A = spec.kernel.empty()
                      ? LinearMap::identity(img.height * img.width)
                      : LinearMap::conv2d_periodic(spec.kernel, spec.kernel_rows,
                                                   spec.kernel_cols, img.height, img.width);
    BuiltProblem bp{build_tv_restoration(std::move(A), img.pixels, spec.mu, spec.nonneg,
                                         img.height, img.width),
                    {},
                    img.height,
                    img.width,
                    std::move(img.pixels)};
    return bp;
  }
  TvRestorationData data = synthesize_tv_restoration(spec);
  BuiltProblem bp{build_tv_restoration(std::move(data.A), data.a, spec.mu, spec.nonneg,
                                       spec.height, spec.width),
                  std::move(data.x_true), spec.height, spec.width, std::move(data.a)};
  return bp;
}

// Fills in "auto" step sizes:
//   gamma: 1.99 * beta, except beta for condat where the mixed inequality
//          needs slack (plain 1.0 when f1 = 0, where any gamma > 0 works)
//   lambda: pdfp 0.99/L, pdfp2o 1/L, pdfp2oc 1/(L+1),
//           condat 0.99 * (1 - gamma/(2 beta)) / L
// with L the lambda_max(BB^T) estimate; L = 0 falls back to lambda = 1.
inline SolverConfig resolve_solver_config(const SolverSection& s, const ProblemSpec& problem,
                                          double bbt_norm_sq) {
  SolverConfig cfg;
  cfg.algorithm = s.algorithm;
  cfg.max_iter = s.max_iter;
  cfg.fp_tol = s.fp_tol;
  cfg.record_every = s.record_every;

  const double beta = problem.f1.beta();
  if (s.gamma_raw == "auto") {
    if (problem.f1.is_zero()) {
      cfg.gamma = 1.0;
    } else {
      cfg.gamma = s.algorithm == Algorithm::condat ? beta : 1.99 * beta;
    }
  } else {
    cfg.gamma = parse_double(s.gamma_raw);
  }

  const double L = bbt_norm_sq;
  if (s.lambda_raw == "auto") {
    if (L <= 0.0) {
      cfg.lambda = 1.0;
    } else {
      switch (s.algorithm) {
        case Algorithm::pdfp: cfg.lambda = 0.99 / L; break;
        case Algorithm::pdfp2o: cfg.lambda = 1.0 / L; break;
        case Algorithm::pdfp2oc: cfg.lambda = 1.0 / (L + 1.0); break;
        case Algorithm::condat: {
          const double slack = problem.f1.is_zero() ? 1.0 : 1.0 - cfg.gamma / (2.0 * beta);
          if (slack <= 0.0) {
            throw std::invalid_argument(
                "config: cannot auto-resolve condat lambda, gamma leaves no slack");
          }
          cfg.lambda = 0.99 * slack / L;
          break;
        }
      }
    }
  } else {
    cfg.lambda = parse_double(s.lambda_raw);
  }
  return cfg;
}

}  // namespace pdfp

#endif  // PDFP_CONFIG_HPP_
