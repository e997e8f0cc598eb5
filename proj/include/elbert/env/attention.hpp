#ifndef ELBERT_ENV_ATTENTION_HPP_
#define ELBERT_ENV_ATTENTION_HPP_

#include <vector>

#include "elbert/env/env.hpp"

namespace elbert::env {

enum class AttentionReward { kDiscoveredMinusMissed, kNegativeMissed };

// Attention-unit allocation over five sites. Incidents per site are Poisson
// with a rate that shrinks by decay_rate * units when the site is attended
// and grows by growth_rate otherwise. Supply is discovered incidents, demand
// is total incidents.
struct AttentionConfig {
  int num_groups = 5;
  int total_units = 30;
  std::vector<double> initial_rates = {30.0, 25.0, 22.5, 17.5, 12.5};
  std::vector<double> decay_rates = {0.004, 0.01, 0.016, 0.02, 0.04};
  std::vector<double> growth_rates = {0.08, 0.2, 0.4, 0.8, 2.0};
  double zeta = 0.25;
  AttentionReward reward_form = AttentionReward::kNegativeMissed;
  int episode_length = 512;

  static AttentionConfig original();
  static AttentionConfig harder();

  void validate() const;
};

class AttentionEnv : public Environment {
 public:
  AttentionEnv(AttentionConfig cfg, std::uint64_t seed);

  // Previous step's (allocation, discovered, incidents) per group plus the
  // normalized step index.
  int observation_dim() const override { return 3 * cfg_.num_groups + 1; }
  ActionKind action_kind() const override { return ActionKind::kAllocation; }
  int action_dim() const override { return cfg_.num_groups; }
  int allocation_units() const override { return cfg_.total_units; }
  int num_groups() const override { return cfg_.num_groups; }
  int episode_length() const override { return cfg_.episode_length; }

  std::vector<double> reset() override;
  std::vector<double> current_observation() const override;
  StepResult step(std::span<const int> action) override;

  nlohmann::json state_to_json() const override;
  void state_from_json(const nlohmann::json& j) override;

  const AttentionConfig& config() const { return cfg_; }
  const std::vector<double>& incident_rates() const { return rates_; }

 private:
  AttentionConfig cfg_;
  nn::Rng rng_;
  double obs_scale_ = 1.0;
  std::vector<double> rates_;
  std::vector<double> last_alloc_, last_discovered_, last_incidents_;
  int step_index_ = 0;
};

}  // namespace elbert::env

#endif  // ELBERT_ENV_ATTENTION_HPP_
