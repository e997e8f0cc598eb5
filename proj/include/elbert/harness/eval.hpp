#ifndef ELBERT_HARNESS_EVAL_HPP_
#define ELBERT_HARNESS_EVAL_HPP_

#include <cstdint>
#include <vector>

#include "elbert/harness/config.hpp"
#include "elbert/nn/mlp.hpp"

namespace elbert::harness {

struct EvalResult {
  double mean_episode_reward = 0.0;
  double eval_bias = 0.0;
  std::vector<double> rates;        // NaN where a group saw no demand
  std::vector<bool> rate_defined;
  std::vector<double> total_supply;  // undiscounted, pooled over episodes
  std::vector<double> total_demand;
  int groups_without_demand = 0;
};

// Pure function of (policy parameters, environment spec, seed): rolls out
// `episodes` evaluation episodes on a fresh environment, pools supply and
// demand undiscounted across all of them, and reports the max-min spread of
// the pooled rates. Bias covers only groups with demand; missing groups are
// flagged.
EvalResult evaluate_policy(const nn::Mlp& policy, const EnvSpec& spec, int episodes,
                           std::uint64_t seed, bool greedy = false);

// Same rollout against an existing environment factory product; used by the
// integration tests with scripted environments.
EvalResult evaluate_policy_on(const nn::Mlp& policy, env::Environment& environment, int episodes,
                              std::uint64_t seed, bool greedy = false);

}  // namespace elbert::harness

#endif  // ELBERT_HARNESS_EVAL_HPP_
