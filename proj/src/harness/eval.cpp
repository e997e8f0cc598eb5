#include "elbert/harness/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "elbert/errors.hpp"
#include "elbert/train/policy.hpp"

namespace elbert::harness {

EvalResult evaluate_policy_on(const nn::Mlp& policy, env::Environment& environment, int episodes,
                              std::uint64_t seed, bool greedy) {
  if (episodes < 1) throw Error("evaluate_policy: episodes must be >= 1");
  const int num_groups = environment.num_groups();
  const env::ActionKind kind = environment.action_kind();
  const int units = environment.allocation_units();

  nn::Rng action_rng(nn::mix_seed(seed, 7));
  EvalResult out;
  out.total_supply.assign(static_cast<std::size_t>(num_groups), 0.0);
  out.total_demand.assign(static_cast<std::size_t>(num_groups), 0.0);

  double total_reward = 0.0;
  for (int ep = 0; ep < episodes; ++ep) {
    std::vector<double> obs = environment.reset();
    bool done = false;
    while (!done) {
      std::vector<int> action;
      if (greedy) {
        action = train::greedy_policy_action(policy, kind, units, obs);
      } else {
        action = train::sample_policy_action(policy, kind, units, obs, action_rng).action;
      }
      env::StepResult r = environment.step(action);
      total_reward += r.signals.reward;
      for (int g = 0; g < num_groups; ++g) {
        out.total_supply[static_cast<std::size_t>(g)] += r.signals.supply[static_cast<std::size_t>(g)];
        out.total_demand[static_cast<std::size_t>(g)] += r.signals.demand[static_cast<std::size_t>(g)];
      }
      obs = std::move(r.observation);
      done = r.done;
    }
  }
  out.mean_episode_reward = total_reward / episodes;

  out.rates.assign(static_cast<std::size_t>(num_groups),
                   std::numeric_limits<double>::quiet_NaN());
  out.rate_defined.assign(static_cast<std::size_t>(num_groups), false);
  double mn = 0.0, mx = 0.0;
  bool any = false;
  for (int g = 0; g < num_groups; ++g) {
    if (out.total_demand[static_cast<std::size_t>(g)] > 0.0) {
      const double rate =
          out.total_supply[static_cast<std::size_t>(g)] / out.total_demand[static_cast<std::size_t>(g)];
      out.rates[static_cast<std::size_t>(g)] = rate;
      out.rate_defined[static_cast<std::size_t>(g)] = true;
      if (!any) {
        mn = mx = rate;
        any = true;
      } else {
        mn = std::min(mn, rate);
        mx = std::max(mx, rate);
      }
    } else {
      ++out.groups_without_demand;
    }
  }
  out.eval_bias = any ? mx - mn : 0.0;
  if (out.groups_without_demand > 0) {
    std::cerr << "evaluate_policy: " << out.groups_without_demand
              << " group(s) saw no demand; their rates are reported as missing\n";
  }
  return out;
}

EvalResult evaluate_policy(const nn::Mlp& policy, const EnvSpec& spec, int episodes,
                           std::uint64_t seed, bool greedy) {
  std::unique_ptr<env::Environment> environment = make_environment(spec, nn::mix_seed(seed, 8));
  return evaluate_policy_on(policy, *environment, episodes, seed, greedy);
}

}  // namespace elbert::harness
