#include "elbert/train/baselines.hpp"

#include <algorithm>

namespace elbert::train {

double r_ppo_shaped_reward(double reward, double delta, double zeta1, double omega,
                           bool raw_additive_form) {
  if (raw_additive_form) return reward + zeta1 * delta;
  return reward - zeta1 * std::max(0.0, delta - omega);
}

double a_ppo_adjusted_advantage(double advantage, double delta_now, double delta_next,
                                double beta1, double beta2, double omega) {
  double adjusted = advantage + beta1 * std::min(0.0, -delta_now + omega);
  if (delta_now > omega) {
    adjusted += beta2 * std::min(0.0, delta_now - delta_next);
  }
  return adjusted;
}

}  // namespace elbert::train
