#ifndef PDFP_CLI_HPP_
#define PDFP_CLI_HPP_

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "pdfp/config.hpp"
#include "pdfp/diagnostics.hpp"

namespace pdfp {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitRuntime = 2;

namespace detail {

inline std::filesystem::path resolve_output_dir(const OutputSection& out) {
  if (const char* env = std::getenv("PDFP_OUTPUT_DIR"); env && *env) {
    return std::filesystem::path(env);
  }
  return std::filesystem::path(out.directory);
}

inline void echo_problem(std::ostream& os, const ProblemConfig& p) {
  os << "problem.type = " << p.type << "\n";
  if (p.type == "fused_lasso") {
    os << "problem.r = " << p.fused.r << "\n";
    os << "problem.n = " << p.fused.n << "\n";
    os << "problem.mu1 = " << format_double(p.fused.mu1) << "\n";
    os << "problem.mu2 = " << format_double(p.fused.mu2) << "\n";
    os << "problem.noise_sigma = " << format_double(p.fused.noise_sigma) << "\n";
    os << "problem.sparsity = " << p.fused.sparsity << "\n";
    os << "problem.seed = " << p.fused.seed << "\n";
  } else {
    if (!p.tv_image.empty()) {
      os << "problem.image = " << p.tv_image << "\n";
      os << "problem.kernel_size = " << p.tv_kernel_size << "\n";
      os << "problem.mu = " << format_double(p.tv.mu) << "\n";
      os << "problem.nonneg = " << (p.tv.nonneg ? "true" : "false") << "\n";
    } else {
      os << "problem.height = " << p.tv.height << "\n";
      os << "problem.width = " << p.tv.width << "\n";
      os << "problem.kernel_size = " << p.tv_kernel_size << "\n";
      os << "problem.mu = " << format_double(p.tv.mu) << "\n";
      os << "problem.noise_sigma = " << format_double(p.tv.noise_sigma) << "\n";
      os << "problem.nonneg = " << (p.tv.nonneg ? "true" : "false") << "\n";
      os << "problem.seed = " << p.tv.seed << "\n";
    }
  }
}

inline void echo_solver(std::ostream& os, const std::string& section, const SolverConfig& cfg) {
  os << section << ".algorithm = " << algorithm_name(cfg.algorithm) << "\n";
  os << section << ".gamma = " << format_double(cfg.gamma) << "\n";
  os << section << ".lambda = " << format_double(cfg.lambda) << "\n";
  os << section << ".max_iter = " << cfg.max_iter << "\n";
  os << section << ".fp_tol = " << format_double(cfg.fp_tol) << "\n";
  os << section << ".record_every = " << cfg.record_every << "\n";
}

inline void echo_output(std::ostream& os, const OutputSection& out,
                        const std::filesystem::path& dir) {
  os << "output.directory = " << dir.string() << "\n";
  os << "output.emit_history = " << (out.emit_history ? "true" : "false") << "\n";
  os << "output.emit_solution = " << (out.emit_solution ? "true" : "false") << "\n";
}

inline void write_solution_files(const BuiltProblem& bp, const Vec& x,
                                 const std::filesystem::path& dir, const std::string& stem) {
  write_vector_csv(x, dir / (stem + ".csv"), "x");
  if (bp.image_height > 0) {
    write_pgm(Image{bp.image_height, bp.image_width, x}, dir / (stem + ".pgm"));
  }
}

struct PreparedRun {
  RunConfig rc;
  BuiltProblem bp;
  OpNormEstimate opnorm;
  std::filesystem::path dir;
};

inline PreparedRun prepare(const std::filesystem::path& cfg_path, CliMode mode) {
  RunConfig rc = parse_run_config(ConfigMap::parse_file(cfg_path), mode);
  BuiltProblem bp = build_problem(rc.problem);
  const OpNormEstimate opnorm = solver_op_norm_estimate(bp.spec.B);
  std::filesystem::path dir = resolve_output_dir(rc.output);
  return PreparedRun{std::move(rc), std::move(bp), opnorm, std::move(dir)};
}

}  // namespace detail

// solve <cfg>: build the problem, resolve and validate step sizes, run the
// selected scheme, and write history.csv / solution.csv (plus PGM images for
// image problems) and the resolved effective.cfg. Exit 0 when fp_tol was
// reached, 2 when the budget ran out, 1 on config/validation errors.
inline int run_solve(const std::filesystem::path& cfg_path, std::ostream& err = std::cerr) {
  try {
    auto pr = detail::prepare(cfg_path, CliMode::solve);
    const SolverConfig cfg =
        validate_config(pr.bp.spec, resolve_solver_config(pr.rc.solvers[0], pr.bp.spec,
                                                          pr.opnorm.value),
                        pr.opnorm);

    std::filesystem::create_directories(pr.dir);
    SolveResult res = solve(pr.bp.spec, cfg);

    {
      std::ofstream echo(pr.dir / "effective.cfg");
      if (!echo) throw std::runtime_error("cannot write " + (pr.dir / "effective.cfg").string());
      detail::echo_problem(echo, pr.rc.problem);
      detail::echo_solver(echo, "solver", cfg);
      detail::echo_output(echo, pr.rc.output, pr.dir);
    }
    if (pr.rc.output.emit_history) emit_history_csv(res.history, pr.dir / "history.csv");
    if (pr.rc.output.emit_solution) {
      detail::write_solution_files(pr.bp, res.state.x, pr.dir, "solution");
      if (!pr.bp.x_true.empty()) write_vector_csv(pr.bp.x_true, pr.dir / "xtrue.csv", "x");
      if (pr.bp.image_height > 0) {
        write_pgm(Image{pr.bp.image_height, pr.bp.image_width, pr.bp.observed},
                  pr.dir / "observed.pgm");
      }
    }
    if (!pr.bp.x_true.empty()) {
      std::cout << "relative_error_to_xtrue = "
                << format_double(l2_relative_error(res.state.x, pr.bp.x_true)) << "\n";
      if (pr.rc.problem.type == "fused_lasso") {
        const auto m = support_metrics(res.state.x, pr.bp.x_true, 1e-3);
        std::cout << "support_f1 = " << format_double(m.f1) << "\n";
      }
    }
    if (!res.converged) {
      err << "solve: iteration budget exhausted (fp residual "
          << format_double(res.fp_residual) << " > fp_tol " << format_double(cfg.fp_tol)
          << ")\n";
      return kExitRuntime;
    }
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    err << "solve: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "solve: " << e.what() << "\n";
    return kExitRuntime;
  }
}

// compare <cfg>: run every solverN section on the shared problem, write one
// history per solver and a compare.csv summary. Exit 0 only if all runs
// converged.
inline int run_compare(const std::filesystem::path& cfg_path, std::ostream& err = std::cerr) {
  try {
    auto pr = detail::prepare(cfg_path, CliMode::compare);

    std::vector<SolverConfig> cfgs;
    for (const auto& s : pr.rc.solvers) {
      cfgs.push_back(validate_config(
          pr.bp.spec, resolve_solver_config(s, pr.bp.spec, pr.opnorm.value), pr.opnorm));
    }

    std::filesystem::create_directories(pr.dir);
    std::ofstream cmp(pr.dir / "compare.csv");
    if (!cmp) throw std::runtime_error("cannot write " + (pr.dir / "compare.csv").string());
    cmp << "solver,algorithm,final_objective,iterations,wall_time_ms,converged\n";

    std::ofstream echo(pr.dir / "effective.cfg");
    detail::echo_problem(echo, pr.rc.problem);

    bool all_converged = true;
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
      const auto& name = pr.rc.solvers[i].name;
      const auto t0 = std::chrono::steady_clock::now();
      SolveResult res = solve(pr.bp.spec, cfgs[i]);
      const double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
              .count();
      all_converged = all_converged && res.converged;

      if (pr.rc.output.emit_history) {
        emit_history_csv(res.history, pr.dir / ("history_" + name + ".csv"));
      }
      if (pr.rc.output.emit_solution) {
        detail::write_solution_files(pr.bp, res.state.x, pr.dir, "solution_" + name);
      }
      cmp << name << ',' << algorithm_name(cfgs[i].algorithm) << ','
          << format_double(objective(pr.bp.spec, res.state.x)) << ',' << res.iterations << ','
          << format_double(ms) << ',' << (res.converged ? "true" : "false") << "\n";
      detail::echo_solver(echo, name, cfgs[i]);
    }
    detail::echo_output(echo, pr.rc.output, pr.dir);
    if (!all_converged) {
      err << "compare: at least one solver exhausted its budget\n";
      return kExitRuntime;
    }
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    err << "compare: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "compare: " << e.what() << "\n";
    return kExitRuntime;
  }
}

// sweep <cfg>: run the gamma x lambda grid (lists from the sweep section,
// falling back to the solver section's single values). Per-cell validation
// failures are recorded in the row, not fatal. Exit mirrors run_solve: 1 if
// any cell was invalid, else 2 if any cell ran out of budget, else 0.
inline int run_sweep(const std::filesystem::path& cfg_path, std::ostream& err = std::cerr) {
  try {
    auto pr = detail::prepare(cfg_path, CliMode::sweep);
    const SolverSection& base = pr.rc.solvers[0];

    std::vector<std::string> gammas, lambdas;
    if (pr.rc.sweep.gammas.empty()) {
      gammas.push_back(base.gamma_raw);
    } else {
      for (double g : pr.rc.sweep.gammas) gammas.push_back(format_double(g));
    }
    if (pr.rc.sweep.lambdas.empty()) {
      lambdas.push_back(base.lambda_raw);
    } else {
      for (double l : pr.rc.sweep.lambdas) lambdas.push_back(format_double(l));
    }

    std::filesystem::create_directories(pr.dir);
    std::ofstream out(pr.dir / "sweep.csv");
    if (!out) throw std::runtime_error("cannot write " + (pr.dir / "sweep.csv").string());
    out << "gamma,lambda,iters_to_tol,final_objective,status\n";

    bool any_invalid = false, any_budget = false;
    for (const auto& g : gammas) {
      for (const auto& l : lambdas) {
        SolverSection cell = base;
        cell.gamma_raw = g;
        cell.lambda_raw = l;
        SolverConfig cfg;
        try {
          cfg = validate_config(pr.bp.spec,
                                resolve_solver_config(cell, pr.bp.spec, pr.opnorm.value),
                                pr.opnorm);
        } catch (const std::invalid_argument&) {
          out << g << ',' << l << ",nan,nan,invalid_config\n";
          any_invalid = true;
          continue;
        }
        SolveResult res = solve(pr.bp.spec, cfg);
        any_budget = any_budget || !res.converged;
        out << format_double(cfg.gamma) << ',' << format_double(cfg.lambda) << ','
            << res.iterations << ',' << format_double(objective(pr.bp.spec, res.state.x)) << ','
            << (res.converged ? "ok" : "budget_exhausted") << "\n";
      }
    }
    if (any_invalid) return kExitConfigError;
    return any_budget ? kExitRuntime : kExitOk;
  } catch (const std::invalid_argument& e) {
    err << "sweep: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "sweep: " << e.what() << "\n";
    return kExitRuntime;
  }
}

// validate <cfg>: print the resolved smoothness constant, the operator-norm
// estimate, the admissible step ranges for every scheme, and the verdict for
// the configured pair. Exit 0 when admissible, 1 otherwise.
inline int run_validate(const std::filesystem::path& cfg_path, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
  try {
    auto pr = detail::prepare(cfg_path, CliMode::validate);
    const double beta = pr.bp.spec.f1.beta();
    const double L = pr.opnorm.value;

    out << "beta = " << format_double(beta) << "\n";
    out << "lambda_max(BB^T) estimate = " << format_double(L)
        << (pr.opnorm.converged ? "" : " (power method not converged)") << "\n";
    const std::string gamma_range =
        pr.bp.spec.f1.is_zero() ? "(0, inf)" : "(0, " + format_double(2.0 * beta) + ")";
    out << "gamma range: " << gamma_range << "\n";
    out << "lambda range [pdfp]: (0, " << format_double(L > 0 ? 1.0 / L : kInf) << ")\n";
    out << "lambda range [pdfp2o]: (0, " << format_double(L > 0 ? 1.0 / L : kInf) << "]\n";
    out << "lambda range [pdfp2oc]: (0, " << format_double(1.0 / (L + 1.0)) << "]\n";
    out << "condat constraint: sigma*tau*" << format_double(L) << " + tau/(2*"
        << format_double(beta) << ") <= 1\n";

    const SolverConfig cfg =
        resolve_solver_config(pr.rc.solvers[0], pr.bp.spec, pr.opnorm.value);
    out << "configured: algorithm = " << algorithm_name(cfg.algorithm)
        << ", gamma = " << format_double(cfg.gamma) << ", lambda = " << format_double(cfg.lambda)
        << "\n";
    if (cfg.algorithm == Algorithm::condat) {
      const auto [sigma, tau] = condat_sigma_tau(cfg);
      out << "condat translation: sigma = lambda/gamma = " << format_double(sigma)
          << ", tau = gamma = " << format_double(tau) << "\n";
    }
    try {
      validate_config(pr.bp.spec, cfg, pr.opnorm);
    } catch (const std::invalid_argument& e) {
      out << "result: rejected (" << e.what() << ")\n";
      return kExitConfigError;
    }
    out << "result: accepted\n";
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    err << "validate: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "validate: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace pdfp

#endif  // PDFP_CLI_HPP_
