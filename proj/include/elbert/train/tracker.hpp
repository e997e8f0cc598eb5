#ifndef ELBERT_TRAIN_TRACKER_HPP_
#define ELBERT_TRAIN_TRACKER_HPP_

#include <vector>

#include "elbert/sd/signals.hpp"
#include "nlohmann/json_fwd.hpp"

namespace elbert::train {

// Running undiscounted per-group supply and demand within the current
// episode, and the resulting historical bias Delta. Groups with zero running
// demand are left out of the spread; with no informative group Delta is 0.
// Used only by the R-PPO and A-PPO baselines.
class HistoricalBiasTracker {
 public:
  explicit HistoricalBiasTracker(int num_groups = 2);

  void reset();
  double delta() const;
  // Adds one step's signals and returns the updated Delta.
  double update(const sd::SupplyDemandSignals& signals);

  nlohmann::json to_json() const;
  void from_json(const nlohmann::json& j);

 private:
  std::vector<double> supply_;
  std::vector<double> demand_;
};

}  // namespace elbert::train

#endif  // ELBERT_TRAIN_TRACKER_HPP_
