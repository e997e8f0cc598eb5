#ifndef ELBERT_HARNESS_CONFIG_HPP_
#define ELBERT_HARNESS_CONFIG_HPP_

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "elbert/env/attention.hpp"
#include "elbert/env/infectious.hpp"
#include "elbert/env/lending.hpp"
#include "elbert/train/config.hpp"
#include "nlohmann/json_fwd.hpp"

namespace elbert::harness {

enum class EnvKind {
  kLending,
  kInfectiousOriginal,
  kInfectiousHarder,
  kAttentionOriginal,
  kAttentionHarder,
};

std::string env_kind_name(EnvKind k);
EnvKind env_kind_from_name(const std::string& name);

struct EnvSpec {
  EnvKind kind = EnvKind::kLending;
  env::LendingConfig lending;
  env::InfectiousConfig infectious;
  env::AttentionConfig attention;
  // Infectious graph construction knobs (ignored when graph_file is set).
  int nodes_per_group = 25;
  double intra_prob = 0.3;
  double inter_prob = 0.05;
  std::uint64_t graph_seed = 1234;
  std::string graph_file;
};

struct EvalConfig {
  int episodes_per_eval = 5;
  long long eval_interval_steps = 10000;
  bool greedy = false;
};

struct ExperimentConfig {
  EnvSpec environment;
  train::TrainerConfig trainer;
  EvalConfig eval;
  std::string output_dir = "runs/experiment";
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  long long checkpoint_interval_steps = 0;  // 0: final checkpoint only

  void validate() const;
};

// Full-scale default experiment for an environment: its standard hyperparameter
// entry, full step budget, elbert_po as the algorithm.
ExperimentConfig default_config(EnvKind kind);

// Desk preset: identical hyperparameters at a tenth of the step budget.
void apply_desk_preset(ExperimentConfig& cfg);

nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

// Layering: per-environment defaults <- optional desk preset <- file values
// <- ELBERT_* environment variables (uppercased key paths, e.g.
// ELBERT_TRAINER_ALPHA overrides trainer.alpha).
ExperimentConfig resolve_config(const nlohmann::json& file_json, const std::string& preset,
                                const std::map<std::string, std::string>& env_overrides);
ExperimentConfig load_config_file(const std::string& path, const std::string& preset = "");

// Collects ELBERT_-prefixed variables from the process environment.
std::map<std::string, std::string> environment_overrides();

std::unique_ptr<env::Environment> make_environment(const EnvSpec& spec, std::uint64_t seed);

}  // namespace elbert::harness

#endif  // ELBERT_HARNESS_CONFIG_HPP_
