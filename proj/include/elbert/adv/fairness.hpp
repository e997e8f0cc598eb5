#ifndef ELBERT_ADV_FAIRNESS_HPP_
#define ELBERT_ADV_FAIRNESS_HPP_

#include <span>
#include <vector>

#include "elbert/sd/bias.hpp"
#include "elbert/sd/signals.hpp"

namespace elbert::adv {

// Fairness-aware advantage, assembled per step:
//   a_fair[t] = a_r[t]
//     - alpha * sum_pairs sum_g dh[pair][g] * ( a_s[pair][g][t] / eta_d[pair][g]
//                                 - eta_s[pair][g] * a_d[pair][g][t] / eta_d[pair][g]^2 )
// Denominator demands below demand_floor are lifted to the floor;
// floor_warnings (if given) counts how many (pair, group) entries were lifted.
// With alpha == 0 the result is exactly a_r, bit for bit.
std::vector<double> fairness_aware_advantage(
    std::span<const double> a_r, const std::vector<std::vector<std::vector<double>>>& a_s,
    const std::vector<std::vector<std::vector<double>>>& a_d,
    std::span<const sd::CumulativeSignals> cumulants,
    const std::vector<std::vector<double>>& grads_h, double alpha, double demand_floor = 1e-8,
    int* floor_warnings = nullptr);

// Adds zeta_reg * a_d_target[t] to every entry; a_d_target is the demand
// advantage stream of the regularized group.
std::vector<double> demand_regularized_advantage(std::span<const double> a_fair,
                                                 std::span<const double> a_d_target,
                                                 double zeta_reg);

struct Normalization {
  double mean = 0.0;
  double stddev = 1.0;
};

// Zero-mean unit-variance rescaling over the whole batch; the returned
// metadata records what was applied.
std::vector<double> normalize_advantage(std::span<const double> a, Normalization* meta = nullptr);

}  // namespace elbert::adv

#endif  // ELBERT_ADV_FAIRNESS_HPP_
