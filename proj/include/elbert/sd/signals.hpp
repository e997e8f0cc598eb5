#ifndef ELBERT_SD_SIGNALS_HPP_
#define ELBERT_SD_SIGNALS_HPP_

#include <span>
#include <vector>

#include "nlohmann/json_fwd.hpp"

namespace elbert::sd {

// Per-step fairness signals emitted by a supply-demand environment alongside
// the reward. supply/demand hold one entry per group; pair_id distinguishes
// supply-demand pairs when a fairness notion tracks more than one (equalized
// odds tracks a true-positive and a false-positive pair).
struct SupplyDemandSignals {
  double reward = 0.0;
  std::vector<double> supply;
  std::vector<double> demand;
  int pair_id = 0;
};

struct TrajectoryStep {
  std::vector<double> observation;
  std::vector<int> action;  // one entry for categorical, one per group for allocations
  double log_prob = 0.0;
  std::vector<SupplyDemandSignals> signals;  // one per pair, indexed by pair_id
  bool done = false;
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  // Observation after the final step; used to bootstrap value estimates when
  // the trajectory ends mid-episode.
  std::vector<double> final_observation;
};

// Discounted totals of reward / group supply / group demand for one pair.
struct CumulativeSignals {
  double eta_r = 0.0;
  std::vector<double> eta_s;
  std::vector<double> eta_d;
  double gamma = 1.0;
};

void to_json(nlohmann::json& j, const CumulativeSignals& c);
void from_json(const nlohmann::json& j, CumulativeSignals& c);

// Episode-mean discounted totals over a trajectory batch, one result per
// supply-demand pair. Episodes are delimited by done flags; a trailing
// partial episode is excluded unless the batch contains no complete episode,
// in which case the partials themselves form the estimate.
std::vector<CumulativeSignals> discounted_cumulate(std::span<const Trajectory> batch,
                                                   double gamma);

}  // namespace elbert::sd

#endif  // ELBERT_SD_SIGNALS_HPP_
