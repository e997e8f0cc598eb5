#ifndef ELBERT_ENV_ENV_HPP_
#define ELBERT_ENV_ENV_HPP_

#include <memory>
#include <span>
#include <vector>

#include "elbert/nn/rand.hpp"
#include "elbert/sd/signals.hpp"
#include "nlohmann/json_fwd.hpp"

namespace elbert::env {

// How the policy head maps to environment actions.
//   categorical: one action index sampled from the logits.
//   allocation: a vector of non-negative integer unit counts per group
//               summing to allocation_units().
enum class ActionKind { kCategorical, kAllocation };

struct StepResult {
  std::vector<double> observation;  // observation after the step
  sd::SupplyDemandSignals signals;
  bool done = false;
};

// A supply-demand environment. Each instance owns its RNG stream, seeded at
// construction; reset() starts a new episode without reseeding, so a fixed
// seed yields one reproducible stream across episodes.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual int observation_dim() const = 0;
  virtual ActionKind action_kind() const = 0;
  virtual int action_dim() const = 0;  // logit count
  virtual int allocation_units() const { return 0; }
  virtual int num_groups() const = 0;
  virtual int episode_length() const = 0;

  virtual std::vector<double> reset() = 0;
  virtual std::vector<double> current_observation() const = 0;
  virtual StepResult step(std::span<const int> action) = 0;

  // Full dynamic state (including the RNG), for exact checkpoint resume.
  virtual nlohmann::json state_to_json() const = 0;
  virtual void state_from_json(const nlohmann::json& j) = 0;
};

}  // namespace elbert::env

#endif  // ELBERT_ENV_ENV_HPP_
