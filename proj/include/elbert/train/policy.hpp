#ifndef ELBERT_TRAIN_POLICY_HPP_
#define ELBERT_TRAIN_POLICY_HPP_

#include <span>
#include <vector>

#include "elbert/env/env.hpp"
#include "elbert/nn/mlp.hpp"
#include "elbert/nn/rand.hpp"

namespace elbert::train {

struct ActionSample {
  std::vector<int> action;
  double log_prob = 0.0;
  double entropy = 0.0;
};

// Draws an environment action from the policy logits. Categorical heads
// sample one index. Allocation heads distribute `units` independent draws
// over softmax(logits); the stored log-probability is the exchangeable
// sequence likelihood sum_g a_g log p_g (the count coefficient is constant
// in the parameters, so PPO ratios are unaffected by omitting it).
ActionSample sample_policy_action(const nn::Mlp& policy, env::ActionKind kind, int units,
                                  std::span<const double> observation, nn::Rng& rng);

// Deterministic decode: argmax for categorical heads, largest-remainder
// rounding of units * softmax(logits) for allocation heads.
std::vector<int> greedy_policy_action(const nn::Mlp& policy, env::ActionKind kind, int units,
                                      std::span<const double> observation);

// Log-probability of a stored action under the current parameters, computed
// without the tape (used for ratio-overflow screening).
double action_log_prob_nograd(const nn::Mlp& policy, env::ActionKind kind,
                              std::span<const double> observation, std::span<const int> action);

}  // namespace elbert::train

#endif  // ELBERT_TRAIN_POLICY_HPP_
