#include "foldlab/cli/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace foldlab;
  CLI::App app{"foldlab: folds, billiards and curvature experiments"};
  app.require_subcommand(1);

  std::string config_path;
  cli::RunOverrides overrides;
  std::string out_dir;
  std::uint64_t seed = 0;
  int workers = 0;
  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "experiment config (YAML)")->required();
  auto* out_opt = run->add_option("--out-dir", out_dir, "output directory");
  auto* seed_opt = run->add_option("--seed", seed, "override the config seed");
  auto* workers_opt = run->add_option("--workers", workers, "maximum worker threads")->check(CLI::PositiveNumber);

  app.add_subcommand("list-builtins", "list builtin tables, models and shipped configs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::exit_config;
  }

  if (app.got_subcommand("list-builtins")) {
    cli::list_builtins(std::cout);
    return 0;
  }

  if (*out_opt) overrides.out_dir = out_dir;
  if (*seed_opt) overrides.seed = seed;
  if (*workers_opt) overrides.workers = workers;
  try {
    const auto cfg = cli::load_config(config_path);
    const auto result = cli::run_experiment(cfg, overrides);
    std::cout << cfg.name << ": " << result.summary << "\n";
    std::cout << "wrote";
    for (const auto& f : result.files) std::cout << ' ' << f;
    std::cout << " to " << result.out_dir << "\n";
    return result.exit_code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::exit_numeric;
  }
}
