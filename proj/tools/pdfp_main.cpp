#include <CLI11.hpp>

#include "pdfp/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Primal-dual fixed-point solvers for three-block convex problems"};
  app.require_subcommand(1);

  std::string cfg;
  auto* solve = app.add_subcommand("solve", "run one solver and write history/solution CSVs");
  solve->add_option("config", cfg, "run configuration file")->required();
  auto* compare = app.add_subcommand("compare", "run several solvers on a shared problem");
  compare->add_option("config", cfg, "run configuration file")->required();
  auto* sweep = app.add_subcommand("sweep", "run a gamma/lambda grid");
  sweep->add_option("config", cfg, "run configuration file")->required();
  auto* validate = app.add_subcommand("validate", "report admissible step-size ranges");
  validate->add_option("config", cfg, "run configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? pdfp::kExitOk : pdfp::kExitConfigError;
  }

  if (solve->parsed()) return pdfp::run_solve(cfg);
  if (compare->parsed()) return pdfp::run_compare(cfg);
  if (sweep->parsed()) return pdfp::run_sweep(cfg);
  return pdfp::run_validate(cfg);
}
