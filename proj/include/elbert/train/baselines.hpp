#ifndef ELBERT_TRAIN_BASELINES_HPP_
#define ELBERT_TRAIN_BASELINES_HPP_

namespace elbert::train {

// R-PPO reward shaping. Default form subtracts the hinge of the historical
// bias over the threshold: r - zeta1 * max(0, delta - omega). The alternate
// raw form r + zeta1 * delta is selectable for completeness.
double r_ppo_shaped_reward(double reward, double delta, double zeta1, double omega,
                           bool raw_additive_form = false);

// A-PPO advantage adjustment:
//   a + beta1 * min(0, -delta_now + omega)
//     + beta2 * (delta_now > omega ? min(0, delta_now - delta_next) : 0)
double a_ppo_adjusted_advantage(double advantage, double delta_now, double delta_next,
                                double beta1, double beta2, double omega);

}  // namespace elbert::train

#endif  // ELBERT_TRAIN_BASELINES_HPP_
