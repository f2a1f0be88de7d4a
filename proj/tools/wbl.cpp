#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "wbl/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Weighted Bergman space experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--tol", tol, "relative quadrature tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed for Monte-Carlo cross-checks");

  std::optional<double> p, m;
  for (const auto& name : wbl::cli::subcommands()) {
    auto* sub = app.add_subcommand(name);
    if (name == "certify" || name == "poisson-check") sub->add_option("--p", p, "exponent p in (0, 1)");
    if (name == "certify") sub->add_option("--M", m, "norm budget M > 1");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    wbl::cli::ExperimentConfig cfg =
        config_path.empty() ? wbl::cli::parse_config(nlohmann::json::object()) : wbl::cli::load_config(config_path);
    if (out_dir) cfg.out_dir = *out_dir;
    if (tol) cfg.quad.tol = *tol;
    if (seed) cfg.seed = *seed;
    if (p) cfg.p = *p;
    if (m) cfg.M = *m;
    const std::string name = app.get_subcommands().front()->get_name();
    std::cout << wbl::cli::run(name, cfg).dump(2) << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return wbl::cli::exit_code_for(e);
  }
}
