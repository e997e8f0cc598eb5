#include "elbert/train/config.hpp"

#include "elbert/errors.hpp"
#include "nlohmann/json.hpp"

namespace elbert::train {

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kElbertPo: return "elbert_po";
    case Algorithm::kGPpo: return "g_ppo";
    case Algorithm::kRPpo: return "r_ppo";
    case Algorithm::kAPpo: return "a_ppo";
  }
  return "g_ppo";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "elbert_po") return Algorithm::kElbertPo;
  if (name == "g_ppo") return Algorithm::kGPpo;
  if (name == "r_ppo") return Algorithm::kRPpo;
  if (name == "a_ppo") return Algorithm::kAPpo;
  throw ConfigError("trainer.algorithm", "unknown algorithm '" + name + "'");
}

void TrainerConfig::validate() const {
  if (!(clip_epsilon > 0.0 && clip_epsilon < 1.0)) {
    throw ConfigError("trainer.clip_epsilon", "must be in (0,1)");
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("trainer.gamma", "must be in (0,1]");
  if (!(lambda_gae >= 0.0 && lambda_gae <= 1.0)) {
    throw ConfigError("trainer.lambda_gae", "must be in [0,1]");
  }
  if (steps_per_iteration < 1) throw ConfigError("trainer.steps_per_iteration", "must be >= 1");
  if (minibatch_size < 1) throw ConfigError("trainer.minibatch_size", "must be >= 1");
  if (epochs_per_iteration < 1) throw ConfigError("trainer.epochs_per_iteration", "must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("trainer.learning_rate", "must be > 0");
  if (alpha < 0.0) throw ConfigError("trainer.alpha", "must be >= 0");
  if (!(beta_temp > 0.0)) throw ConfigError("trainer.beta_temp", "must be > 0");
  if (bias_mode != "auto" && bias_mode != "hard" && bias_mode != "soft") {
    throw ConfigError("trainer.bias_mode", "must be auto, hard or soft");
  }
  if (total_steps < 0) throw ConfigError("trainer.total_steps", "must be >= 0");
  if (entropy_coef < 0.0) throw ConfigError("trainer.entropy_coef", "must be >= 0");
  if (!(demand_floor > 0.0)) throw ConfigError("trainer.demand_floor", "must be > 0");
  if (policy_hidden.empty() || value_hidden.empty()) {
    throw ConfigError("trainer.policy_hidden", "networks need at least one hidden layer");
  }
}

void to_json(nlohmann::json& j, const TrainerConfig& c) {
  j = nlohmann::json{
      {"algorithm", algorithm_name(c.algorithm)},
      {"alpha", c.alpha},
      {"beta_temp", c.beta_temp},
      {"bias_mode", c.bias_mode},
      {"clip_epsilon", c.clip_epsilon},
      {"gamma", c.gamma},
      {"lambda_gae", c.lambda_gae},
      {"steps_per_iteration", c.steps_per_iteration},
      {"minibatch_size", c.minibatch_size},
      {"epochs_per_iteration", c.epochs_per_iteration},
      {"learning_rate", c.learning_rate},
      {"entropy_coef", c.entropy_coef},
      {"optimizer", nn::optimizer_name(c.optimizer)},
      {"normalize_advantage", c.normalize_advantage},
      {"demand_floor", c.demand_floor},
      {"r_ppo", {{"zeta1", c.r_ppo.zeta1}, {"omega", c.r_ppo.omega}, {"raw_additive_form", c.r_ppo.raw_additive_form}}},
      {"a_ppo", {{"beta1", c.a_ppo.beta1}, {"beta2", c.a_ppo.beta2}, {"omega", c.a_ppo.omega}}},
      {"demand_reg", {{"zeta", c.demand_reg.zeta}, {"group", c.demand_reg.group}}},
      {"total_steps", c.total_steps},
      {"seed", c.seed},
      {"policy_hidden", c.policy_hidden},
      {"value_hidden", c.value_hidden},
      {"activation", nn::activation_name(c.activation)},
      {"policy_final_scale", c.policy_final_scale},
  };
}

void from_json(const nlohmann::json& j, TrainerConfig& c) {
  TrainerConfig defaults;
  c = defaults;
  if (j.contains("algorithm")) c.algorithm = algorithm_from_name(j.at("algorithm").get<std::string>());
  if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
  if (j.contains("beta_temp")) c.beta_temp = j.at("beta_temp").get<double>();
  if (j.contains("bias_mode")) c.bias_mode = j.at("bias_mode").get<std::string>();
  if (j.contains("clip_epsilon")) c.clip_epsilon = j.at("clip_epsilon").get<double>();
  if (j.contains("gamma")) c.gamma = j.at("gamma").get<double>();
  if (j.contains("lambda_gae")) c.lambda_gae = j.at("lambda_gae").get<double>();
  if (j.contains("steps_per_iteration")) c.steps_per_iteration = j.at("steps_per_iteration").get<int>();
  if (j.contains("minibatch_size")) c.minibatch_size = j.at("minibatch_size").get<int>();
  if (j.contains("epochs_per_iteration")) c.epochs_per_iteration = j.at("epochs_per_iteration").get<int>();
  if (j.contains("learning_rate")) c.learning_rate = j.at("learning_rate").get<double>();
  if (j.contains("entropy_coef")) c.entropy_coef = j.at("entropy_coef").get<double>();
  if (j.contains("optimizer")) c.optimizer = nn::optimizer_from_name(j.at("optimizer").get<std::string>());
  if (j.contains("normalize_advantage")) c.normalize_advantage = j.at("normalize_advantage").get<bool>();
  if (j.contains("demand_floor")) c.demand_floor = j.at("demand_floor").get<double>();
  if (j.contains("r_ppo")) {
    const auto& r = j.at("r_ppo");
    if (r.contains("zeta1")) c.r_ppo.zeta1 = r.at("zeta1").get<double>();
    if (r.contains("omega")) c.r_ppo.omega = r.at("omega").get<double>();
    if (r.contains("raw_additive_form")) c.r_ppo.raw_additive_form = r.at("raw_additive_form").get<bool>();
  }
  if (j.contains("a_ppo")) {
    const auto& a = j.at("a_ppo");
    if (a.contains("beta1")) c.a_ppo.beta1 = a.at("beta1").get<double>();
    if (a.contains("beta2")) c.a_ppo.beta2 = a.at("beta2").get<double>();
    if (a.contains("omega")) c.a_ppo.omega = a.at("omega").get<double>();
  }
  if (j.contains("demand_reg")) {
    const auto& d = j.at("demand_reg");
    if (d.contains("zeta")) c.demand_reg.zeta = d.at("zeta").get<double>();
    if (d.contains("group")) c.demand_reg.group = d.at("group").get<int>();
  }
  if (j.contains("total_steps")) c.total_steps = j.at("total_steps").get<long long>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("policy_hidden")) c.policy_hidden = j.at("policy_hidden").get<std::vector<int>>();
  if (j.contains("value_hidden")) c.value_hidden = j.at("value_hidden").get<std::vector<int>>();
  if (j.contains("activation")) c.activation = nn::activation_from_name(j.at("activation").get<std::string>());
  if (j.contains("policy_final_scale")) c.policy_final_scale = j.at("policy_final_scale").get<double>();
}

}  // namespace elbert::train
