#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "pdfp/config.hpp"

using namespace pdfp;

namespace {

ConfigMap parse(const std::string& text) {
  std::istringstream in(text);
  return ConfigMap::parse_stream(in, "test.cfg");
}

}  // namespace

TEST_CASE("config line parsing") {
  auto cfg = parse(
      "# comment\n"
      "problem.type = fused_lasso\n"
      "  solver.algorithm =  pdfp  \n"
      "\n"
      "; another comment\n"
      "solver.gamma = 0.5\n");
  CHECK(cfg.take("problem.type") == std::string("fused_lasso"));
  CHECK(cfg.take("solver.algorithm") == std::string("pdfp"));
  CHECK(cfg.take_double("solver.gamma", 0.0) == 0.5);
  CHECK_FALSE(cfg.take("solver.lambda").has_value());
  cfg.finish();  // everything consumed
}

TEST_CASE("config rejects malformed lines") {
  CHECK_THROWS_WITH(parse("problem.type fused_lasso\n"),
                    Catch::Matchers::ContainsSubstring("expected"));
  CHECK_THROWS_WITH(parse("type = fused_lasso\n"),
                    Catch::Matchers::ContainsSubstring("section.key"));
  CHECK_THROWS_WITH(parse("problem.type =\n"), Catch::Matchers::ContainsSubstring("empty value"));
  CHECK_THROWS_WITH(parse("a.b = 1\na.b = 2\n"),
                    Catch::Matchers::ContainsSubstring("duplicate"));
}

TEST_CASE("typed getters validate their input") {
  auto cfg = parse("s.num = nope\ns.int = 1.5\ns.flag = yes\n");
  CHECK_THROWS_WITH(cfg.take_double("s.num", 0.0),
                    Catch::Matchers::ContainsSubstring("bad number"));
  CHECK_THROWS_WITH(cfg.take_long("s.int", 0),
                    Catch::Matchers::ContainsSubstring("bad integer"));
  CHECK_THROWS_WITH(cfg.take_bool("s.flag", false),
                    Catch::Matchers::ContainsSubstring("true/false"));
}

TEST_CASE("run config: unknown keys are rejected with their names") {
  CHECK_THROWS_WITH(parse_run_config(parse("problem.type = fused_lasso\n"
                                           "solver.algorithm = pdfp\n"
                                           "solver.turbo = on\n"),
                                     CliMode::solve),
                    Catch::Matchers::ContainsSubstring("solver.turbo"));
  CHECK_THROWS_WITH(parse_run_config(parse("problem.type = fused_lasso\n"
                                           "problem.mu3 = 1\n"
                                           "solver.algorithm = pdfp\n"),
                                     CliMode::solve),
                    Catch::Matchers::ContainsSubstring("problem.mu3"));
}

TEST_CASE("run config: defaults and required fields") {
  auto rc = parse_run_config(parse("problem.type = fused_lasso\n"
                                   "solver.algorithm = pdfp2o\n"),
                             CliMode::solve);
  CHECK(rc.problem.fused.r == 50);
  CHECK(rc.problem.fused.n == 200);
  CHECK(rc.solvers.size() == 1);
  CHECK(rc.solvers[0].algorithm == Algorithm::pdfp2o);
  CHECK(rc.solvers[0].gamma_raw == "auto");
  CHECK(rc.output.directory == "out");
  CHECK(rc.output.emit_history);

  CHECK_THROWS_WITH(parse_run_config(parse("problem.type = fused_lasso\n"), CliMode::solve),
                    Catch::Matchers::ContainsSubstring("solver.algorithm"));
  CHECK_THROWS_WITH(parse_run_config(parse("solver.algorithm = pdfp\n"), CliMode::solve),
                    Catch::Matchers::ContainsSubstring("problem.type"));
  CHECK_THROWS_WITH(parse_run_config(parse("problem.type = ridge\n"
                                           "solver.algorithm = pdfp\n"),
                                     CliMode::solve),
                    Catch::Matchers::ContainsSubstring("problem.type"));
  CHECK_THROWS_WITH(parse_run_config(parse("problem.type = fused_lasso\n"
                                           "solver.algorithm = sgd\n"),
                                     CliMode::solve),
                    Catch::Matchers::ContainsSubstring("unknown algorithm"));
}

TEST_CASE("run config: compare needs numbered solver sections") {
  auto rc = parse_run_config(parse("problem.type = fused_lasso\n"
                                   "solver1.algorithm = pdfp\n"
                                   "solver2.algorithm = condat\n"
                                   "solver2.lambda = 0.1\n"),
                             CliMode::compare);
  REQUIRE(rc.solvers.size() == 2);
  CHECK(rc.solvers[0].name == "solver1");
  CHECK(rc.solvers[1].algorithm == Algorithm::condat);
  CHECK(rc.solvers[1].lambda_raw == "0.1");

  CHECK_THROWS_WITH(parse_run_config(parse("problem.type = fused_lasso\n"
                                           "solver1.algorithm = pdfp\n"),
                                     CliMode::compare),
                    Catch::Matchers::ContainsSubstring(">= 2"));
}

TEST_CASE("run config: sweep lists") {
  auto rc = parse_run_config(parse("problem.type = fused_lasso\n"
                                   "solver.algorithm = pdfp\n"
                                   "sweep.gamma = 0.1, 0.2, 0.3\n"
                                   "sweep.lambda = 0.05,0.1\n"),
                             CliMode::sweep);
  CHECK(rc.sweep.gammas == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(rc.sweep.lambdas == std::vector<double>{0.05, 0.1});

  // sweep sections are rejected outside sweep mode
  CHECK_THROWS_WITH(parse_run_config(parse("problem.type = fused_lasso\n"
                                           "solver.algorithm = pdfp\n"
                                           "sweep.gamma = 0.1\n"),
                                     CliMode::solve),
                    Catch::Matchers::ContainsSubstring("sweep.gamma"));
}

TEST_CASE("run config: tv problem keys") {
  auto rc = parse_run_config(parse("problem.type = tv_restoration\n"
                                   "problem.height = 8\n"
                                   "problem.width = 12\n"
                                   "problem.kernel_size = 5\n"
                                   "problem.mu = 0.1\n"
                                   "problem.nonneg = false\n"
                                   "solver.algorithm = pdfp\n"),
                             CliMode::solve);
  CHECK(rc.problem.tv.height == 8);
  CHECK(rc.problem.tv.width == 12);
  CHECK(rc.problem.tv.kernel.size() == 25);
  CHECK_FALSE(rc.problem.tv.nonneg);

  CHECK_THROWS_WITH(parse_run_config(parse("problem.type = tv_restoration\n"
                                           "problem.kernel_size = 4\n"
                                           "solver.algorithm = pdfp\n"),
                                     CliMode::solve),
                    Catch::Matchers::ContainsSubstring("odd"));
  CHECK_THROWS_WITH(parse_run_config(parse("problem.type = tv_restoration\n"
                                           "problem.image = x.pgm\n"
                                           "problem.height = 8\n"
                                           "solver.algorithm = pdfp\n"),
                                     CliMode::solve),
                    Catch::Matchers::ContainsSubstring("not allowed"));
}

TEST_CASE("auto step resolution") {
  FusedLassoSpec spec;
  spec.r = 12;
  spec.n = 24;
  spec.seed = 4;
  const auto d = synthesize_fused_lasso(spec);
  const auto p = build_fused_lasso(d.A, d.a, 1.0, 0.1);
  const double L = op_norm_sq_estimate(p.B, 1e-10, 100000).value;
  const double beta = p.f1.beta();

  SolverSection s;
  s.algorithm = Algorithm::pdfp;
  auto cfg = resolve_solver_config(s, p, L);
  CHECK(cfg.gamma == Catch::Approx(1.99 * beta).epsilon(1e-15));
  CHECK(cfg.lambda == Catch::Approx(0.99 / L).epsilon(1e-15));

  s.algorithm = Algorithm::pdfp2o;
  CHECK(resolve_solver_config(s, p, L).lambda == Catch::Approx(1.0 / L).epsilon(1e-15));

  s.algorithm = Algorithm::pdfp2oc;
  CHECK(resolve_solver_config(s, p, L).lambda == Catch::Approx(1.0 / (L + 1.0)).epsilon(1e-15));

  s.algorithm = Algorithm::condat;
  cfg = resolve_solver_config(s, p, L);
  const auto [sigma, tau] = condat_sigma_tau(cfg);
  CHECK(sigma * tau * L + tau / (2.0 * beta) <= 1.0);

  // explicit values pass through and parse strictly
  s.gamma_raw = "0.125";
  s.lambda_raw = "0.0625";
  cfg = resolve_solver_config(s, p, L);
  CHECK(cfg.gamma == 0.125);
  CHECK(cfg.lambda == 0.0625);

  // f1 = 0 picks gamma = 1
  ProblemSpec nosmooth{SmoothFn::zero(), p.f2, p.B, p.f3};
  s = SolverSection{};
  s.algorithm = Algorithm::pdfp;
  CHECK(resolve_solver_config(s, nosmooth, L).gamma == 1.0);
}
