#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wbl/errors.hpp"
#include "wbl/geometry.hpp"
#include "wbl/quad.hpp"
#include "wbl/weights.hpp"

namespace wbl::cli {

/// Malformed or inconsistent configuration (exit code 1).
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct PotentialSpec {
  std::vector<double> alphas;
  std::vector<cplx> points;
};

struct StageSpec {
  int k = 1;
  std::vector<double> alphas;  // alpha_1 .. alpha_{k-1}
  int degree = 8;
};

/// One experiment. Every field is optional in the JSON document; unknown
/// keys are rejected at every level.
struct ExperimentConfig {
  nlohmann::json domain_record;
  nlohmann::json weight_record;
  std::optional<Domain> domain;
  Weight weight;
  std::string target = "one";
  std::optional<cplx> center;
  std::optional<double> scale;
  int n_max = 20;
  QuadOptions quad;

  std::optional<double> p;
  std::optional<double> M;
  double enclosure_radius = 40.0;
  std::size_t samples = 100;
  std::optional<cplx> cut_direction;
  std::optional<cplx> hole_point;
  std::optional<PotentialSpec> potential;
  std::optional<StageSpec> stage;
  std::uint64_t seed = 0;
  std::size_t mc_samples = 0;
  std::string out_dir = ".";
  std::string prefix;

  /// The configuration with every default filled in.
  nlohmann::json resolved() const;
};

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

Domain parse_domain(const nlohmann::json& rec);
Weight parse_weight(const nlohmann::json& rec);

const std::vector<std::string>& subcommands();

/// Runs one subcommand, writes its artifacts under cfg.out_dir and returns
/// a JSON summary (also embedded in the artifacts).
nlohmann::json run(const std::string& subcommand, const ExperimentConfig& cfg);

/// 0 success, 1 invalid configuration, 2 numerical failure.
int exit_code_for(const std::exception& e);

}  // namespace wbl::cli
