#ifndef ELBERT_ENV_LENDING_HPP_
#define ELBERT_ENV_LENDING_HPP_

#include <vector>

#include "elbert/env/env.hpp"

namespace elbert::env {

// Sequential credit approval with two applicant groups. An applicant arrives
// each step with a credit score drawn from their group's evolving score
// distribution; approval plus repayment shifts that distribution up by the
// dynamic rate, approval plus default shifts it down. Group supply is
// 1{approved and repaid}, group demand is 1{would repay}.
struct LendingConfig {
  int num_score_bins = 7;
  // Group 0 is advantaged: its initial score distribution sits one bin higher.
  std::vector<double> initial_distribution_g0;  // empty -> built from defaults
  std::vector<double> initial_distribution_g1;
  std::vector<double> repay_prob;  // empty -> linear 0.1 .. 0.9, monotone
  double dynamic_rate = 0.02;
  double loan_gain = 1.0;
  double loan_loss = 1.0;
  int episode_length = 2048;

  void validate() const;
  // Fills empty distribution / repay vectors with the documented defaults.
  void resolve_defaults();
};

class LendingEnv : public Environment {
 public:
  LendingEnv(LendingConfig cfg, std::uint64_t seed);

  int observation_dim() const override { return 2 + cfg_.num_score_bins; }
  ActionKind action_kind() const override { return ActionKind::kCategorical; }
  int action_dim() const override { return 2; }  // reject = 0, approve = 1
  int num_groups() const override { return 2; }
  int episode_length() const override { return cfg_.episode_length; }

  std::vector<double> reset() override;
  std::vector<double> current_observation() const override;
  StepResult step(std::span<const int> action) override;

  nlohmann::json state_to_json() const override;
  void state_from_json(const nlohmann::json& j) override;

  const LendingConfig& config() const { return cfg_; }
  const std::vector<double>& distribution(int group) const { return dist_[group]; }
  int applicant_group() const { return applicant_group_; }
  int applicant_score() const { return applicant_score_; }

 private:
  void sample_applicant();

  LendingConfig cfg_;
  nn::Rng rng_;
  std::vector<double> dist_[2];
  int applicant_group_ = 0;
  int applicant_score_ = 0;
  int step_index_ = 0;
};

}  // namespace elbert::env

#endif  // ELBERT_ENV_LENDING_HPP_
