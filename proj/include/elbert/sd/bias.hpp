#ifndef ELBERT_SD_BIAS_HPP_
#define ELBERT_SD_BIAS_HPP_

#include <span>
#include <string>
#include <vector>

#include "elbert/sd/signals.hpp"

namespace elbert::sd {

enum class BiasMode { kHardTwoGroup, kSoftMultiGroup };

std::string bias_mode_name(BiasMode m);

// How the squared-bias penalty h and its partials are formed.
//   hard_two_group: h(z1,z2) = (z1-z2)^2, exactly two groups.
//   soft_multi_group: h(z) = softbias(z)^2 with log-sum-exp temperature.
struct BiasSpec {
  BiasMode mode = BiasMode::kHardTwoGroup;
  double alpha = 0.0;       // bias coefficient
  double beta_temp = 20.0;  // soft mode temperature, > 0
  int num_groups = 2;

  void validate() const;
};

struct BenefitRates {
  std::vector<double> rates;  // eta_s[g] / eta_d[g]
  double bias = 0.0;          // max rate - min rate
};

// Long-term benefit rate of each group and their max-min spread. Throws
// DegenerateDemandError if any cumulative demand is not positive.
BenefitRates benefit_rates_and_bias(const CumulativeSignals& c, int pair_id = 0);

// Smooth upper bound on the max-min spread:
//   (1/beta) log sum_g exp(beta z_g) + (1/beta) log sum_g exp(-beta z_g),
// computed max-shifted. Exceeds the hard bias by at most 2 ln(M) / beta.
double soft_bias(std::span<const double> rates, double beta_temp);

// Partial derivatives of the squared penalty h with respect to each rate.
// Hard mode: (2(z1-z2), -2(z1-z2)). Soft mode: 2 softbias(z) (p_g - q_g)
// with p = softmax(beta z), q = softmax(-beta z).
std::vector<double> bias_grad_h(std::span<const double> rates, const BiasSpec& spec);

// Per-pair rates and bias, e.g. the TPR and FPR pairs of equalized odds.
std::vector<BenefitRates> multi_pair_bias(std::span<const CumulativeSignals> pairs);

}  // namespace elbert::sd

#endif  // ELBERT_SD_BIAS_HPP_
