#ifndef ELBERT_TRAIN_CONFIG_HPP_
#define ELBERT_TRAIN_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "elbert/nn/mlp.hpp"
#include "elbert/nn/optimizer.hpp"
#include "nlohmann/json_fwd.hpp"

namespace elbert::train {

enum class Algorithm { kElbertPo, kGPpo, kRPpo, kAPpo };

std::string algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct RPpoConfig {
  double zeta1 = 0.0;
  double omega = 0.0;
  bool raw_additive_form = false;  // alternate form r + zeta1 * delta
};

struct APpoConfig {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double omega = 0.0;
};

struct DemandRegConfig {
  double zeta = 0.0;  // 0 disables the regularizer
  int group = 1;      // group whose demand is kept up (the disadvantaged one)
};

struct TrainerConfig {
  Algorithm algorithm = Algorithm::kGPpo;

  // Squared-bias penalty weight and its smooth-max temperature.
  double alpha = 0.0;
  double beta_temp = 20.0;
  // auto: hard penalty for two groups, soft for more.
  std::string bias_mode = "auto";

  double clip_epsilon = 0.2;
  double gamma = 0.99;
  double lambda_gae = 0.95;
  int steps_per_iteration = 4096;
  int minibatch_size = 256;
  int epochs_per_iteration = 4;
  double learning_rate = 3e-4;
  double entropy_coef = 0.01;
  nn::OptimizerKind optimizer = nn::OptimizerKind::kAdam;
  bool normalize_advantage = true;
  double demand_floor = 1e-8;

  RPpoConfig r_ppo;
  APpoConfig a_ppo;
  DemandRegConfig demand_reg;

  long long total_steps = 0;
  std::uint64_t seed = 0;

  std::vector<int> policy_hidden = {64, 64};
  std::vector<int> value_hidden = {64, 64};
  nn::Activation activation = nn::Activation::kTanh;
  double policy_final_scale = 0.01;

  void validate() const;
};

void to_json(nlohmann::json& j, const TrainerConfig& c);
void from_json(const nlohmann::json& j, TrainerConfig& c);

}  // namespace elbert::train

#endif  // ELBERT_TRAIN_CONFIG_HPP_
