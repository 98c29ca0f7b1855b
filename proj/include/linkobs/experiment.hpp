#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "linkobs/geometry.hpp"

namespace linkobs {

/// JSON config of one experiment run. Unset numeric fields fall back to
/// per-experiment defaults.
struct ExperimentConfig {
  std::string experiment;
  std::string pair = "hopf";
  std::vector<int> widths;
  std::vector<int> depths;
  std::string activation = "relu";
  std::vector<std::uint64_t> seeds{0};
  double delta = 0.1;
  std::size_t samples = 512;
  /// 0 selects the default separation threshold.
  double threshold = 0.0;
  std::string out_dir = "out";
  int epochs = 2000;
  double learning_rate = 0.02;
  double momentum = 0.9;
  /// approximation-bound only: "none", "mse" or "adversarial" (mse then sup-gap).
  std::string training = "none";
  /// Dimension for sphere pairs and the approximation ball.
  int dim = 3;

  void validate() const;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);

std::vector<std::string> experiment_names();

/// One row of the aggregate table.
struct RunRow {
  std::uint64_t seed = 0;
  int width = 0;
  int depth = 0;
  std::string verdict;
  double min_gap = 0.0;
  std::optional<int> degree;
  std::string activation;
  double metric = 0.0;
};

struct ExperimentResult {
  std::vector<RunRow> rows;
  /// Paths relative to out_dir, in write order.
  std::vector<std::string> artifacts;
  std::string config_hash;
  nlohmann::json summary;
};

/// Builtin pair name or path to a JSON pair file.
EmbeddedPair load_pair(const std::string& name_or_path, std::size_t samples, int dim = 3);

/// Runs the configured grid sequentially in a fixed order, writing
/// out_dir/run_XXXX/report.json per run, out_dir/results.csv and
/// out_dir/manifest.json. Output bytes depend only on the config.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

std::string rows_to_csv(const std::vector<RunRow>& rows);

}  // namespace linkobs
