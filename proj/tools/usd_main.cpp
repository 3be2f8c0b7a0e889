// usd: copy-number bounds, lifted trine tables, POVM checks and Monte Carlo
// runs for unambiguous discrimination of multi-copy pure states.

#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "usd/cli.hpp"

int main(int argc, char** argv) {
  using usd::cli::Format;
  usd::cli::RunConfig cfg;

  CLI::App app{"usd: zero-error state discrimination toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out;
  std::map<std::string, Format> formats{{"csv", Format::Csv}, {"json", Format::Json}};
  Format format = Format::Json;
  app.add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  app.add_option("--tol", cfg.tol, "Numerical tolerance for rank and POVM checks")->capture_default_str();
  app.add_option("--out", out, "Output file (default: stdout)");
  auto* format_opt =
      app.add_option("--format", format, "Output format")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  app.add_option("--threads", cfg.threads, "Simulation worker threads (0 = all cores)");

  auto* bounds = app.add_subcommand("bounds", "Classify N states in dimension D with C copies");
  bounds->add_option("--n", cfg.n, "Number of states")->required();
  bounds->add_option("--c", cfg.copies, "Number of copies")->required();
  bounds->add_option("--d", cfg.dim, "Single-copy dimension")->required();

  auto* curve = app.add_subcommand("lifted-curve", "Optimal success probability of lifted trines versus lift");
  curve->add_option("--grid", cfg.grid, "Number of grid points on [0, 1]")->capture_default_str();

  auto* table = app.add_subcommand("trine-table", "Lift parameter and optimal success for C trine copies");
  table->add_option("--c-max", cfg.c_max, "Largest copy number")->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo discrimination of C trine copies");
  simulate->add_option("--c", cfg.copies, "Number of copies")->required();
  simulate->add_option("--trials", cfg.trials, "Number of trials")->capture_default_str();
  simulate->add_option("--strategy", cfg.strategy, "collective or pairwise")
      ->check(CLI::IsMember({"collective", "pairwise"}))
      ->capture_default_str();

  auto* witness = app.add_subcommand("witness", "Random ensembles showing the copy-number bounds are tight");
  witness->add_option("kind", cfg.kind, "achieve or depend")->required()->check(CLI::IsMember({"achieve", "depend"}));
  witness->add_option("--c", cfg.copies, "Number of copies")->required();
  witness->add_option("--d", cfg.dim, "Single-copy dimension")->required();

  auto* verify = app.add_subcommand("verify-povm", "Check the uniform-success POVM for C trine copies");
  verify->add_option("--c", cfg.copies, "Number of copies")->required();
  verify->add_option("--p", cfg.p, "Per-state success probability")->required();

  for (auto* sub : {bounds, curve, table, simulate, witness, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? usd::cli::kExitOk : usd::cli::kExitValidation;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  if (!out.empty()) cfg.out = out;
  if (format_opt->count() > 0) cfg.format = format;

  const usd::cli::CommandResult result = usd::cli::run(cfg);
  if (!result.output.empty()) {
    if (!cfg.out) {
      std::cout << result.output;
    } else if (!usd::cli::write_output(cfg, result)) {
      std::cerr << "usd: cannot write " << *cfg.out << '\n';
      return usd::cli::kExitValidation;
    }
  }
  if (!result.error.empty()) std::cerr << "usd: " << result.error << '\n';
  return result.exit_code;
}
