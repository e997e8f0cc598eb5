#ifndef ELBERT_TRAIN_TRAINER_HPP_
#define ELBERT_TRAIN_TRAINER_HPP_

#include <memory>
#include <span>
#include <vector>

#include "elbert/adv/fairness.hpp"
#include "elbert/adv/gae.hpp"
#include "elbert/env/env.hpp"
#include "elbert/nn/mlp.hpp"
#include "elbert/nn/optimizer.hpp"
#include "elbert/train/config.hpp"
#include "elbert/train/tracker.hpp"
#include "nlohmann/json_fwd.hpp"

namespace elbert::train {

// One minibatch for the clipped-surrogate policy update.
struct PolicyBatch {
  env::ActionKind kind = env::ActionKind::kCategorical;
  int obs_dim = 0;
  int action_len = 1;  // 1 for categorical, num_groups for allocations
  int rows = 0;
  std::vector<double> observations;  // [rows, obs_dim]
  std::vector<int> actions;          // [rows, action_len]
  std::vector<double> old_log_probs;
  std::vector<double> advantages;
};

struct PpoUpdateStats {
  double policy_loss = 0.0;
  double entropy = 0.0;
  int skipped_samples = 0;
};

// Maximizes the clipped surrogate min(R A, clip(R, 1-eps, 1+eps) A) plus an
// entropy bonus over one minibatch. Rows whose new/old log-prob gap would
// overflow the ratio are masked out and counted.
PpoUpdateStats ppo_clip_update(nn::Mlp& policy, nn::Optimizer& optimizer,
                               const PolicyBatch& batch, double clip_epsilon,
                               double entropy_coef);

// Mean-squared-error regression step of one value head on one minibatch.
double value_regression(nn::Mlp& head, nn::Optimizer& optimizer,
                        std::span<const double> observations, int rows, int obs_dim,
                        std::span<const double> targets);

struct IterationMetrics {
  int iteration = 0;
  long long env_steps = 0;
  int episodes_completed = 0;
  double mean_episode_reward = 0.0;  // raw reward, completed episodes only
  std::vector<sd::CumulativeSignals> cumulants;
  std::vector<double> rates;  // pair 0, demand-floored
  double train_bias = 0.0;    // max-min spread of those rates
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  adv::Normalization advantage_norm;
  int demand_floor_hits = 0;
  int skipped_samples = 0;
  bool used_stale_cumulants = false;
};

// Unified PPO trainer. All four algorithms share the same collection, value
// regression and clipped-surrogate machinery; they differ only in the
// training advantage (and, for R-PPO, the reward stream fed to it):
//   g_ppo      -> reward advantage
//   elbert_po  -> fairness-aware advantage (exactly the reward advantage
//                 when alpha == 0)
//   r_ppo      -> reward advantage of the shaped reward
//   a_ppo      -> reward advantage plus the historical-bias adjustment
class Trainer {
 public:
  Trainer(std::unique_ptr<env::Environment> environment, TrainerConfig cfg);

  IterationMetrics run_iteration();

  long long env_steps() const { return env_steps_; }
  int iteration() const { return iteration_; }
  const nn::Mlp& policy() const { return policy_; }
  nn::Mlp& policy_mut() { return policy_; }  // warm starts, checkpoint surgery
  const adv::ValueHeads& heads() const { return heads_; }
  const env::Environment& environment() const { return *env_; }
  const TrainerConfig& config() const { return cfg_; }

  nlohmann::json checkpoint_to_json() const;
  void restore_from_json(const nlohmann::json& j);

 private:
  struct EpisodeTotals {
    double reward_raw = 0.0;   // undiscounted, for the episode-reward metric
    double reward_disc = 0.0;  // discounted, feeds eta_r
    std::vector<std::vector<double>> supply;  // [pair][group], discounted
    std::vector<std::vector<double>> demand;
  };

  struct EpisodeAccumulator {
    double discount = 1.0;
    EpisodeTotals totals;
    int length = 0;
    void reset(int num_pairs, int num_groups);
  };

  std::vector<double> assemble_training_advantage(const adv::AdvantageBatch& batch,
                                                  std::span<const double> delta_now,
                                                  std::span<const double> delta_next,
                                                  IterationMetrics* metrics);

  std::unique_ptr<env::Environment> env_;
  TrainerConfig cfg_;
  int num_pairs_ = 1;

  nn::Mlp policy_;
  adv::ValueHeads heads_;
  nn::Optimizer policy_opt_;
  nn::Optimizer reward_head_opt_;
  std::vector<std::vector<nn::Optimizer>> supply_opts_;
  std::vector<std::vector<nn::Optimizer>> demand_opts_;

  nn::Rng action_rng_;
  nn::Rng shuffle_rng_;

  long long env_steps_ = 0;
  int iteration_ = 0;
  std::vector<double> current_obs_;
  EpisodeAccumulator episode_;
  HistoricalBiasTracker tracker_;
  std::vector<sd::CumulativeSignals> last_cumulants_;
  bool have_cumulants_ = false;
};

}  // namespace elbert::train

#endif  // ELBERT_TRAIN_TRAINER_HPP_
