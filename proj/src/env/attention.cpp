#include "elbert/env/attention.hpp"

#include <algorithm>
#include <cmath>

#include "elbert/errors.hpp"
#include "elbert/nn/serialize.hpp"
#include "nlohmann/json.hpp"

namespace elbert::env {

AttentionConfig AttentionConfig::original() {
  AttentionConfig cfg;
  cfg.total_units = 6;
  cfg.initial_rates = {8.0, 6.0, 4.0, 3.0, 1.5};
  cfg.decay_rates.assign(5, 0.1);
  cfg.growth_rates.assign(5, 0.1);
  cfg.reward_form = AttentionReward::kDiscoveredMinusMissed;
  return cfg;
}

AttentionConfig AttentionConfig::harder() { return AttentionConfig{}; }

void AttentionConfig::validate() const {
  if (num_groups < 1) throw ConfigError("num_groups", "must be >= 1");
  if (total_units < 1) throw ConfigError("total_units", "must be >= 1");
  if (episode_length < 1) throw ConfigError("episode_length", "must be >= 1");
  auto check = [&](const std::vector<double>& v, const char* field) {
    if (static_cast<int>(v.size()) != num_groups) {
      throw ConfigError(field, "must have one entry per group");
    }
    for (double x : v) {
      if (!(x >= 0.0)) throw ConfigError(field, "entries must be >= 0");
    }
  };
  check(initial_rates, "initial_rates");
  check(decay_rates, "decay_rates");
  check(growth_rates, "growth_rates");
}

AttentionEnv::AttentionEnv(AttentionConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)), rng_(seed) {
  cfg_.validate();
  obs_scale_ = std::max(1.0, *std::max_element(cfg_.initial_rates.begin(), cfg_.initial_rates.end()));
  reset();
}

std::vector<double> AttentionEnv::reset() {
  rates_ = cfg_.initial_rates;
  last_alloc_.assign(static_cast<std::size_t>(cfg_.num_groups), 0.0);
  last_discovered_ = last_alloc_;
  last_incidents_ = last_alloc_;
  step_index_ = 0;
  return current_observation();
}

std::vector<double> AttentionEnv::current_observation() const {
  std::vector<double> obs;
  obs.reserve(static_cast<std::size_t>(observation_dim()));
  for (int g = 0; g < cfg_.num_groups; ++g) {
    obs.push_back(last_alloc_[static_cast<std::size_t>(g)] / cfg_.total_units);
    obs.push_back(last_discovered_[static_cast<std::size_t>(g)] / obs_scale_);
    obs.push_back(last_incidents_[static_cast<std::size_t>(g)] / obs_scale_);
  }
  obs.push_back(static_cast<double>(step_index_) / cfg_.episode_length);
  return obs;
}

StepResult AttentionEnv::step(std::span<const int> action) {
  if (static_cast<int>(action.size()) != cfg_.num_groups) {
    throw Error("attention step: allocation must have one entry per group");
  }
  int total = 0;
  for (int a : action) {
    if (a < 0) throw Error("attention step: allocations must be non-negative");
    total += a;
  }
  if (total != cfg_.total_units) {
    throw Error("attention step: allocation sums to " + std::to_string(total) + ", expected " +
                std::to_string(cfg_.total_units));
  }

  StepResult out;
  out.signals.supply.assign(static_cast<std::size_t>(cfg_.num_groups), 0.0);
  out.signals.demand.assign(static_cast<std::size_t>(cfg_.num_groups), 0.0);

  double discovered_total = 0.0, missed_total = 0.0;
  for (int g = 0; g < cfg_.num_groups; ++g) {
    const double incidents =
        static_cast<double>(nn::sample_poisson(rng_, rates_[static_cast<std::size_t>(g)]));
    const double discovered = std::min(static_cast<double>(action[static_cast<std::size_t>(g)]), incidents);
    out.signals.supply[static_cast<std::size_t>(g)] = discovered;
    out.signals.demand[static_cast<std::size_t>(g)] = incidents;
    discovered_total += discovered;
    missed_total += incidents - discovered;

    last_alloc_[static_cast<std::size_t>(g)] = action[static_cast<std::size_t>(g)];
    last_discovered_[static_cast<std::size_t>(g)] = discovered;
    last_incidents_[static_cast<std::size_t>(g)] = incidents;

    double& mu = rates_[static_cast<std::size_t>(g)];
    if (action[static_cast<std::size_t>(g)] > 0) {
      mu -= cfg_.decay_rates[static_cast<std::size_t>(g)] * action[static_cast<std::size_t>(g)];
    } else {
      mu += cfg_.growth_rates[static_cast<std::size_t>(g)];
    }
    mu = std::max(0.0, mu);
  }

  out.signals.reward = cfg_.reward_form == AttentionReward::kDiscoveredMinusMissed
                           ? discovered_total - cfg_.zeta * missed_total
                           : -cfg_.zeta * missed_total;

  ++step_index_;
  out.done = step_index_ >= cfg_.episode_length;
  out.observation = current_observation();
  return out;
}

nlohmann::json AttentionEnv::state_to_json() const {
  nlohmann::json j;
  j["rates"] = nn::hex_encode(rates_);
  j["last_alloc"] = nn::hex_encode(last_alloc_);
  j["last_discovered"] = nn::hex_encode(last_discovered_);
  j["last_incidents"] = nn::hex_encode(last_incidents_);
  j["step_index"] = step_index_;
  j["rng"] = nn::rng_to_string(rng_);
  return j;
}

void AttentionEnv::state_from_json(const nlohmann::json& j) {
  rates_ = nn::hex_decode(j.at("rates").get<std::string>());
  last_alloc_ = nn::hex_decode(j.at("last_alloc").get<std::string>());
  last_discovered_ = nn::hex_decode(j.at("last_discovered").get<std::string>());
  last_incidents_ = nn::hex_decode(j.at("last_incidents").get<std::string>());
  step_index_ = j.at("step_index").get<int>();
  rng_ = nn::rng_from_string(j.at("rng").get<std::string>());
}

}  // namespace elbert::env
