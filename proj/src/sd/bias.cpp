#include "elbert/sd/bias.hpp"

#include <algorithm>
#include <cmath>

#include "elbert/errors.hpp"

namespace elbert::sd {

std::string bias_mode_name(BiasMode m) {
  return m == BiasMode::kHardTwoGroup ? "hard_two_group" : "soft_multi_group";
}

void BiasSpec::validate() const {
  if (alpha < 0.0) throw ConfigError("alpha", "must be >= 0");
  if (num_groups < 1) throw ConfigError("num_groups", "must be >= 1");
  if (mode == BiasMode::kHardTwoGroup && num_groups != 2) {
    throw ConfigError("mode", "hard_two_group requires exactly 2 groups");
  }
  if (mode == BiasMode::kSoftMultiGroup && !(beta_temp > 0.0)) {
    throw ConfigError("beta_temp", "must be > 0");
  }
}

BenefitRates benefit_rates_and_bias(const CumulativeSignals& c, int pair_id) {
  if (c.eta_s.size() != c.eta_d.size() || c.eta_s.empty()) {
    throw ShapeError("benefit_rates_and_bias: supply/demand group counts differ");
  }
  BenefitRates out;
  out.rates.resize(c.eta_s.size());
  for (std::size_t g = 0; g < c.eta_d.size(); ++g) {
    if (!(c.eta_d[g] > 0.0)) {
      throw DegenerateDemandError(static_cast<int>(g), pair_id,
                                  "cumulative demand of group " + std::to_string(g) +
                                      " is not positive (" + std::to_string(c.eta_d[g]) + ")");
    }
    out.rates[g] = c.eta_s[g] / c.eta_d[g];
  }
  const auto [mn, mx] = std::minmax_element(out.rates.begin(), out.rates.end());
  out.bias = *mx - *mn;
  return out;
}

namespace {
// log sum_g exp(sign * beta * z_g), max-shifted.
double log_sum_exp_scaled(std::span<const double> z, double scale) {
  double mx = scale * z[0];
  for (std::size_t g = 1; g < z.size(); ++g) mx = std::max(mx, scale * z[g]);
  double sum = 0.0;
  for (double v : z) sum += std::exp(scale * v - mx);
  return mx + std::log(sum);
}
}  // namespace

double soft_bias(std::span<const double> rates, double beta_temp) {
  if (rates.empty()) throw Error("soft_bias: empty rate vector");
  if (!(beta_temp > 0.0)) throw Error("soft_bias: beta_temp must be > 0");
  for (double z : rates) {
    if (!std::isfinite(z)) throw NumericError("soft_bias: non-finite rate");
  }
  const double pos = log_sum_exp_scaled(rates, beta_temp);
  const double neg = log_sum_exp_scaled(rates, -beta_temp);
  return (pos + neg) / beta_temp;
}

std::vector<double> bias_grad_h(std::span<const double> rates, const BiasSpec& spec) {
  spec.validate();
  if (static_cast<int>(rates.size()) != spec.num_groups) {
    throw ShapeError("bias_grad_h: rate count " + std::to_string(rates.size()) +
                     " does not match num_groups " + std::to_string(spec.num_groups));
  }
  std::vector<double> grads(rates.size(), 0.0);
  if (spec.mode == BiasMode::kHardTwoGroup) {
    const double d = rates[0] - rates[1];
    grads[0] = 2.0 * d;
    grads[1] = -2.0 * d;
    return grads;
  }
  const double beta = spec.beta_temp;
  const double sb = soft_bias(rates, beta);
  // p = softmax(beta z), q = softmax(-beta z), both max-shifted.
  const double lse_p = log_sum_exp_scaled(rates, beta);
  const double lse_q = log_sum_exp_scaled(rates, -beta);
  for (std::size_t g = 0; g < rates.size(); ++g) {
    const double p = std::exp(beta * rates[g] - lse_p);
    const double q = std::exp(-beta * rates[g] - lse_q);
    grads[g] = 2.0 * sb * (p - q);
  }
  return grads;
}

std::vector<BenefitRates> multi_pair_bias(std::span<const CumulativeSignals> pairs) {
  if (pairs.empty()) throw Error("multi_pair_bias: no pairs");
  std::vector<BenefitRates> out;
  out.reserve(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    out.push_back(benefit_rates_and_bias(pairs[p], static_cast<int>(p)));
  }
  return out;
}

}  // namespace elbert::sd
