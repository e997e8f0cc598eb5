#include "elbert/train/policy.hpp"

#include "elbert/errors.hpp"
#include "elbert/nn/categorical.hpp"

namespace elbert::train {

ActionSample sample_policy_action(const nn::Mlp& policy, env::ActionKind kind, int units,
                                  std::span<const double> observation, nn::Rng& rng) {
  const std::vector<double> logits = policy.forward_nograd(observation, 1);
  ActionSample out;
  if (kind == env::ActionKind::kCategorical) {
    const nn::CategoricalSample s = nn::sample_categorical(logits, rng);
    out.action = {s.action};
    out.log_prob = s.log_prob;
    out.entropy = s.entropy;
    return out;
  }
  const std::vector<double> logp = nn::log_softmax_vec(logits);
  std::vector<double> probs(logp.size());
  for (std::size_t i = 0; i < logp.size(); ++i) probs[i] = std::exp(logp[i]);
  out.action = nn::sample_multinomial(probs, units, rng);
  out.log_prob = 0.0;
  for (std::size_t g = 0; g < logp.size(); ++g) out.log_prob += out.action[g] * logp[g];
  out.entropy = nn::categorical_entropy(logits);
  return out;
}

std::vector<int> greedy_policy_action(const nn::Mlp& policy, env::ActionKind kind, int units,
                                      std::span<const double> observation) {
  const std::vector<double> logits = policy.forward_nograd(observation, 1);
  if (kind == env::ActionKind::kCategorical) {
    return {nn::argmax_index(logits)};
  }
  return nn::largest_remainder_allocation(nn::softmax(logits), units);
}

double action_log_prob_nograd(const nn::Mlp& policy, env::ActionKind kind,
                              std::span<const double> observation, std::span<const int> action) {
  const std::vector<double> logits = policy.forward_nograd(observation, 1);
  const std::vector<double> logp = nn::log_softmax_vec(logits);
  if (kind == env::ActionKind::kCategorical) {
    if (action.size() != 1) throw Error("action_log_prob: categorical action must be one index");
    return logp[static_cast<std::size_t>(action[0])];
  }
  if (action.size() != logp.size()) {
    throw Error("action_log_prob: allocation arity mismatch");
  }
  double lp = 0.0;
  for (std::size_t g = 0; g < logp.size(); ++g) lp += action[g] * logp[g];
  return lp;
}

}  // namespace elbert::train
