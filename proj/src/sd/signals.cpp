#include "elbert/sd/signals.hpp"

#include <cmath>

#include "elbert/errors.hpp"
#include "nlohmann/json.hpp"

namespace elbert::sd {

void to_json(nlohmann::json& j, const CumulativeSignals& c) {
  j = nlohmann::json{{"eta_r", c.eta_r}, {"eta_s", c.eta_s}, {"eta_d", c.eta_d}, {"gamma", c.gamma}};
}

void from_json(const nlohmann::json& j, CumulativeSignals& c) {
  j.at("eta_r").get_to(c.eta_r);
  j.at("eta_s").get_to(c.eta_s);
  j.at("eta_d").get_to(c.eta_d);
  j.at("gamma").get_to(c.gamma);
}

namespace {

struct EpisodeTotals {
  double reward = 0.0;
  std::vector<std::vector<double>> supply;  // [pair][group]
  std::vector<std::vector<double>> demand;
};

}  // namespace

std::vector<CumulativeSignals> discounted_cumulate(std::span<const Trajectory> batch,
                                                   double gamma) {
  if (batch.empty()) throw Error("discounted_cumulate: empty batch");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw Error("discounted_cumulate: gamma must be in (0,1]");

  int num_pairs = -1;
  int num_groups = -1;
  std::vector<EpisodeTotals> complete;
  std::vector<EpisodeTotals> partial;

  for (const Trajectory& traj : batch) {
    EpisodeTotals cur;
    double discount = 1.0;
    bool open = false;
    for (const TrajectoryStep& step : traj.steps) {
      if (step.signals.empty()) throw Error("discounted_cumulate: step without signals");
      if (num_pairs < 0) {
        num_pairs = static_cast<int>(step.signals.size());
        num_groups = static_cast<int>(step.signals.front().supply.size());
      }
      if (static_cast<int>(step.signals.size()) != num_pairs) {
        throw ShapeError("discounted_cumulate: inconsistent pair count across steps");
      }
      if (!open) {
        cur = EpisodeTotals{};
        cur.supply.assign(static_cast<std::size_t>(num_pairs),
                          std::vector<double>(static_cast<std::size_t>(num_groups), 0.0));
        cur.demand = cur.supply;
        discount = 1.0;
        open = true;
      }
      for (int p = 0; p < num_pairs; ++p) {
        const SupplyDemandSignals& sig = step.signals[static_cast<std::size_t>(p)];
        if (static_cast<int>(sig.supply.size()) != num_groups ||
            static_cast<int>(sig.demand.size()) != num_groups) {
          throw ShapeError("discounted_cumulate: signal arrays do not match group count");
        }
        for (int g = 0; g < num_groups; ++g) {
          cur.supply[static_cast<std::size_t>(p)][static_cast<std::size_t>(g)] +=
              discount * sig.supply[static_cast<std::size_t>(g)];
          cur.demand[static_cast<std::size_t>(p)][static_cast<std::size_t>(g)] +=
              discount * sig.demand[static_cast<std::size_t>(g)];
        }
      }
      cur.reward += discount * step.signals.front().reward;
      discount *= gamma;
      if (step.done) {
        complete.push_back(cur);
        open = false;
      }
    }
    if (open) partial.push_back(cur);
  }

  const std::vector<EpisodeTotals>& pool = complete.empty() ? partial : complete;
  if (pool.empty()) throw Error("discounted_cumulate: batch contains no steps");

  std::vector<CumulativeSignals> out(static_cast<std::size_t>(num_pairs));
  for (int p = 0; p < num_pairs; ++p) {
    CumulativeSignals& c = out[static_cast<std::size_t>(p)];
    c.gamma = gamma;
    c.eta_s.assign(static_cast<std::size_t>(num_groups), 0.0);
    c.eta_d.assign(static_cast<std::size_t>(num_groups), 0.0);
    for (const EpisodeTotals& ep : pool) {
      if (p == 0) c.eta_r += ep.reward;
      for (int g = 0; g < num_groups; ++g) {
        c.eta_s[static_cast<std::size_t>(g)] += ep.supply[static_cast<std::size_t>(p)][static_cast<std::size_t>(g)];
        c.eta_d[static_cast<std::size_t>(g)] += ep.demand[static_cast<std::size_t>(p)][static_cast<std::size_t>(g)];
      }
    }
    const double n = static_cast<double>(pool.size());
    c.eta_r /= (p == 0 ? n : 1.0);
    for (int g = 0; g < num_groups; ++g) {
      c.eta_s[static_cast<std::size_t>(g)] /= n;
      c.eta_d[static_cast<std::size_t>(g)] /= n;
    }
  }
  // Every pair reports the same reward total.
  for (int p = 1; p < num_pairs; ++p) out[static_cast<std::size_t>(p)].eta_r = out[0].eta_r;
  return out;
}

}  // namespace elbert::sd
