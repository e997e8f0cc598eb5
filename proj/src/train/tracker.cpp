#include "elbert/train/tracker.hpp"

#include <algorithm>

#include "elbert/errors.hpp"
#include "elbert/nn/serialize.hpp"
#include "nlohmann/json.hpp"

namespace elbert::train {

HistoricalBiasTracker::HistoricalBiasTracker(int num_groups)
    : supply_(static_cast<std::size_t>(num_groups), 0.0),
      demand_(static_cast<std::size_t>(num_groups), 0.0) {
  if (num_groups < 1) throw ConfigError("num_groups", "must be >= 1");
}

void HistoricalBiasTracker::reset() {
  std::fill(supply_.begin(), supply_.end(), 0.0);
  std::fill(demand_.begin(), demand_.end(), 0.0);
}

double HistoricalBiasTracker::delta() const {
  double mn = 0.0, mx = 0.0;
  bool any = false;
  for (std::size_t g = 0; g < demand_.size(); ++g) {
    if (demand_[g] > 0.0) {
      const double rate = supply_[g] / demand_[g];
      if (!any) {
        mn = mx = rate;
        any = true;
      } else {
        mn = std::min(mn, rate);
        mx = std::max(mx, rate);
      }
    }
  }
  return any ? mx - mn : 0.0;
}

double HistoricalBiasTracker::update(const sd::SupplyDemandSignals& signals) {
  if (signals.supply.size() != supply_.size() || signals.demand.size() != demand_.size()) {
    throw ShapeError("bias tracker: signal group count mismatch");
  }
  for (std::size_t g = 0; g < supply_.size(); ++g) {
    supply_[g] += signals.supply[g];
    demand_[g] += signals.demand[g];
  }
  return delta();
}

nlohmann::json HistoricalBiasTracker::to_json() const {
  nlohmann::json j;
  j["supply"] = nn::hex_encode(supply_);
  j["demand"] = nn::hex_encode(demand_);
  return j;
}

void HistoricalBiasTracker::from_json(const nlohmann::json& j) {
  supply_ = nn::hex_decode(j.at("supply").get<std::string>());
  demand_ = nn::hex_decode(j.at("demand").get<std::string>());
}

}  // namespace elbert::train
