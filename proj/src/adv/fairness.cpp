#include "elbert/adv/fairness.hpp"

#include <cmath>

#include "elbert/errors.hpp"

namespace elbert::adv {

std::vector<double> fairness_aware_advantage(
    std::span<const double> a_r, const std::vector<std::vector<std::vector<double>>>& a_s,
    const std::vector<std::vector<std::vector<double>>>& a_d,
    std::span<const sd::CumulativeSignals> cumulants,
    const std::vector<std::vector<double>>& grads_h, double alpha, double demand_floor,
    int* floor_warnings) {
  std::vector<double> out(a_r.begin(), a_r.end());
  if (alpha == 0.0) return out;

  const std::size_t num_pairs = cumulants.size();
  if (a_s.size() != num_pairs || a_d.size() != num_pairs || grads_h.size() != num_pairs) {
    throw ShapeError("fairness_aware_advantage: pair counts disagree");
  }
  const std::size_t T = a_r.size();
  for (std::size_t p = 0; p < num_pairs; ++p) {
    const auto& c = cumulants[p];
    const std::size_t num_groups = c.eta_d.size();
    if (a_s[p].size() != num_groups || a_d[p].size() != num_groups ||
        grads_h[p].size() != num_groups) {
      throw ShapeError("fairness_aware_advantage: group counts disagree");
    }
    for (std::size_t g = 0; g < num_groups; ++g) {
      if (a_s[p][g].size() != T || a_d[p][g].size() != T) {
        throw ShapeError("fairness_aware_advantage: advantage stream lengths disagree");
      }
      double eta_d = c.eta_d[g];
      if (!(eta_d > 0.0)) {
        throw DegenerateDemandError(static_cast<int>(g), static_cast<int>(p),
                                    "cumulative demand of group " + std::to_string(g) +
                                        " is not positive in fairness advantage assembly");
      }
      if (eta_d < demand_floor) {
        eta_d = demand_floor;
        if (floor_warnings) ++(*floor_warnings);
      }
      const double dh = grads_h[p][g];
      const double inv_d = 1.0 / eta_d;
      const double s_over_d2 = c.eta_s[g] / (eta_d * eta_d);
      for (std::size_t t = 0; t < T; ++t) {
        out[t] -= alpha * dh * (inv_d * a_s[p][g][t] - s_over_d2 * a_d[p][g][t]);
      }
    }
  }
  for (double v : out) {
    if (!std::isfinite(v)) throw NumericError("fairness_aware_advantage: non-finite result");
  }
  return out;
}

std::vector<double> demand_regularized_advantage(std::span<const double> a_fair,
                                                 std::span<const double> a_d_target,
                                                 double zeta_reg) {
  if (a_fair.size() != a_d_target.size()) {
    throw ShapeError("demand_regularized_advantage: stream lengths disagree");
  }
  std::vector<double> out(a_fair.begin(), a_fair.end());
  if (zeta_reg == 0.0) return out;
  for (std::size_t t = 0; t < out.size(); ++t) out[t] += zeta_reg * a_d_target[t];
  return out;
}

std::vector<double> normalize_advantage(std::span<const double> a, Normalization* meta) {
  if (a.empty()) throw Error("normalize_advantage: empty batch");
  double mean = 0.0;
  for (double v : a) mean += v;
  mean /= static_cast<double>(a.size());
  double var = 0.0;
  for (double v : a) var += (v - mean) * (v - mean);
  var /= static_cast<double>(a.size());
  const double stddev = std::sqrt(var) + 1e-8;
  if (meta) {
    meta->mean = mean;
    meta->stddev = stddev;
  }
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] - mean) / stddev;
  return out;
}

}  // namespace elbert::adv
