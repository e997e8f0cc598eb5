#include "elbert/env/lending.hpp"

#include <algorithm>
#include <cmath>

#include "elbert/errors.hpp"
#include "elbert/nn/serialize.hpp"
#include "nlohmann/json.hpp"

namespace elbert::env {

namespace {

// Discretized unimodal distribution over bins centered at `center`.
std::vector<double> unimodal_distribution(int bins, double center, double sigma) {
  std::vector<double> d(static_cast<std::size_t>(bins));
  double total = 0.0;
  for (int i = 0; i < bins; ++i) {
    const double x = (i - center) / sigma;
    d[static_cast<std::size_t>(i)] = std::exp(-0.5 * x * x);
    total += d[static_cast<std::size_t>(i)];
  }
  for (double& v : d) v /= total;
  return d;
}

void check_distribution(const std::vector<double>& d, int bins, const char* field) {
  if (static_cast<int>(d.size()) != bins) {
    throw ConfigError(field, "must have one entry per score bin");
  }
  double total = 0.0;
  for (double v : d) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(field, "entries must lie in [0,1]");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ConfigError(field, "must sum to 1");
}

}  // namespace

void LendingConfig::resolve_defaults() {
  if (initial_distribution_g0.empty()) {
    initial_distribution_g0 = unimodal_distribution(num_score_bins, num_score_bins - 3.0, 1.2);
  }
  if (initial_distribution_g1.empty()) {
    initial_distribution_g1 = unimodal_distribution(num_score_bins, num_score_bins - 4.0, 1.2);
  }
  if (repay_prob.empty()) {
    repay_prob.resize(static_cast<std::size_t>(num_score_bins));
    for (int i = 0; i < num_score_bins; ++i) {
      repay_prob[static_cast<std::size_t>(i)] =
          num_score_bins == 1 ? 0.5 : 0.1 + 0.8 * i / (num_score_bins - 1);
    }
  }
}

void LendingConfig::validate() const {
  if (num_score_bins < 2) throw ConfigError("num_score_bins", "must be >= 2");
  if (dynamic_rate < 0.0) throw ConfigError("dynamic_rate", "must be >= 0");
  if (episode_length < 1) throw ConfigError("episode_length", "must be >= 1");
  check_distribution(initial_distribution_g0, num_score_bins, "initial_distribution_g0");
  check_distribution(initial_distribution_g1, num_score_bins, "initial_distribution_g1");
  if (static_cast<int>(repay_prob.size()) != num_score_bins) {
    throw ConfigError("repay_prob", "must have one entry per score bin");
  }
  for (std::size_t i = 0; i < repay_prob.size(); ++i) {
    if (!(repay_prob[i] >= 0.0 && repay_prob[i] <= 1.0)) {
      throw ConfigError("repay_prob", "entries must lie in [0,1]");
    }
    if (i > 0 && repay_prob[i] < repay_prob[i - 1]) {
      throw ConfigError("repay_prob", "must be monotone non-decreasing in score");
    }
  }
}

LendingEnv::LendingEnv(LendingConfig cfg, std::uint64_t seed) : cfg_(std::move(cfg)), rng_(seed) {
  cfg_.resolve_defaults();
  cfg_.validate();
  dist_[0] = cfg_.initial_distribution_g0;
  dist_[1] = cfg_.initial_distribution_g1;
  sample_applicant();
}

void LendingEnv::sample_applicant() {
  applicant_group_ = static_cast<int>(nn::bounded_uint(rng_, 2));
  applicant_score_ = nn::sample_from_probs(dist_[applicant_group_], rng_);
}

std::vector<double> LendingEnv::reset() {
  dist_[0] = cfg_.initial_distribution_g0;
  dist_[1] = cfg_.initial_distribution_g1;
  step_index_ = 0;
  sample_applicant();
  return current_observation();
}

std::vector<double> LendingEnv::current_observation() const {
  std::vector<double> obs(static_cast<std::size_t>(observation_dim()), 0.0);
  obs[static_cast<std::size_t>(applicant_group_)] = 1.0;
  obs[static_cast<std::size_t>(2 + applicant_score_)] = 1.0;
  return obs;
}

StepResult LendingEnv::step(std::span<const int> action) {
  if (action.size() != 1 || action[0] < 0 || action[0] > 1) {
    throw Error("lending step: action must be a single binary choice");
  }
  const bool approved = action[0] == 1;
  const int g = applicant_group_;
  const int c = applicant_score_;

  // Repayment is a property of the applicant, drawn whether or not the loan
  // is approved.
  const bool repays = nn::bernoulli(rng_, cfg_.repay_prob[static_cast<std::size_t>(c)]);

  StepResult out;
  out.signals.reward = approved ? (repays ? cfg_.loan_gain : -cfg_.loan_loss) : 0.0;
  out.signals.supply.assign(2, 0.0);
  out.signals.demand.assign(2, 0.0);
  if (repays) out.signals.demand[static_cast<std::size_t>(g)] = 1.0;
  if (approved && repays) out.signals.supply[static_cast<std::size_t>(g)] = 1.0;

  if (approved) {
    const int target = repays ? c + 1 : c - 1;
    if (target >= 0 && target < cfg_.num_score_bins) {
      std::vector<double>& d = dist_[g];
      const double move = std::min(cfg_.dynamic_rate, d[static_cast<std::size_t>(c)]);
      d[static_cast<std::size_t>(c)] -= move;
      d[static_cast<std::size_t>(target)] += move;
    }
  }

  ++step_index_;
  out.done = step_index_ >= cfg_.episode_length;
  sample_applicant();
  out.observation = current_observation();
  return out;
}

nlohmann::json LendingEnv::state_to_json() const {
  nlohmann::json j;
  j["dist_g0"] = nn::hex_encode(dist_[0]);
  j["dist_g1"] = nn::hex_encode(dist_[1]);
  j["applicant_group"] = applicant_group_;
  j["applicant_score"] = applicant_score_;
  j["step_index"] = step_index_;
  j["rng"] = nn::rng_to_string(rng_);
  return j;
}

void LendingEnv::state_from_json(const nlohmann::json& j) {
  dist_[0] = nn::hex_decode(j.at("dist_g0").get<std::string>());
  dist_[1] = nn::hex_decode(j.at("dist_g1").get<std::string>());
  applicant_group_ = j.at("applicant_group").get<int>();
  applicant_score_ = j.at("applicant_score").get<int>();
  step_index_ = j.at("step_index").get<int>();
  rng_ = nn::rng_from_string(j.at("rng").get<std::string>());
}

}  // namespace elbert::env
