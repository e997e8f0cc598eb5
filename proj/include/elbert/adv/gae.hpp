#ifndef ELBERT_ADV_GAE_HPP_
#define ELBERT_ADV_GAE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "elbert/nn/mlp.hpp"
#include "elbert/sd/signals.hpp"

namespace elbert::adv {

// Value networks for the reward plus one supply and one demand head per
// (pair, group). All heads share the observation dimensionality.
struct ValueHeads {
  nn::Mlp reward_head;
  std::vector<std::vector<nn::Mlp>> supply_heads;  // [pair][group]
  std::vector<std::vector<nn::Mlp>> demand_heads;

  static ValueHeads create(int observation_dim, int num_pairs, int num_groups,
                           const std::vector<int>& hidden_dims, nn::Activation activation,
                           std::uint64_t seed);
  int num_pairs() const { return static_cast<int>(supply_heads.size()); }
  int num_groups() const { return supply_heads.empty() ? 0 : static_cast<int>(supply_heads[0].size()); }
};

struct GaeResult {
  std::vector<double> advantage;
  std::vector<double> target;  // advantage + value, regression target
};

// Generalized advantage estimation over one flat signal stream.
//   delta_t = x_t + gamma * V_{t+1} * (1 - done_t) - V_t
//   A_t = delta_t + gamma * lambda * (1 - done_t) * A_{t+1}
// values has one entry per step; bootstrap_value stands in for V at the
// observation following the final step.
GaeResult gae(std::span<const double> signal, std::span<const double> values,
              std::span<const std::uint8_t> done, double bootstrap_value, double gamma,
              double lambda);

// Advantages for every tracked signal of a trajectory, using the heads for
// value prediction.
struct AdvantageBatch {
  std::vector<double> a_r;
  std::vector<std::vector<std::vector<double>>> a_s;  // [pair][group][t]
  std::vector<std::vector<std::vector<double>>> a_d;
  std::vector<double> target_r;
  std::vector<std::vector<std::vector<double>>> target_s;
  std::vector<std::vector<std::vector<double>>> target_d;
};

AdvantageBatch estimate_advantages(const sd::Trajectory& traj, const ValueHeads& heads,
                                   double gamma, double lambda);

}  // namespace elbert::adv

#endif  // ELBERT_ADV_GAE_HPP_
