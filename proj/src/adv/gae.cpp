#include "elbert/adv/gae.hpp"

#include "elbert/errors.hpp"

namespace elbert::adv {

ValueHeads ValueHeads::create(int observation_dim, int num_pairs, int num_groups,
                              const std::vector<int>& hidden_dims, nn::Activation activation,
                              std::uint64_t seed) {
  nn::MlpSpec spec;
  spec.input_dim = observation_dim;
  spec.hidden_dims = hidden_dims;
  spec.output_dim = 1;
  spec.activation = activation;

  ValueHeads heads;
  std::uint64_t stream = 0;
  heads.reward_head = nn::Mlp(spec, nn::mix_seed(seed, stream++));
  heads.supply_heads.resize(static_cast<std::size_t>(num_pairs));
  heads.demand_heads.resize(static_cast<std::size_t>(num_pairs));
  for (int p = 0; p < num_pairs; ++p) {
    for (int g = 0; g < num_groups; ++g) {
      heads.supply_heads[static_cast<std::size_t>(p)].emplace_back(spec, nn::mix_seed(seed, stream++));
      heads.demand_heads[static_cast<std::size_t>(p)].emplace_back(spec, nn::mix_seed(seed, stream++));
    }
  }
  return heads;
}

GaeResult gae(std::span<const double> signal, std::span<const double> values,
              std::span<const std::uint8_t> done, double bootstrap_value, double gamma,
              double lambda) {
  const std::size_t n = signal.size();
  if (values.size() != n || done.size() != n) {
    throw ShapeError("gae: signal, value and done lengths must match");
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) throw Error("gae: gamma must be in (0,1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error("gae: lambda must be in [0,1]");

  GaeResult out;
  out.advantage.resize(n);
  out.target.resize(n);
  double running = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const double not_done = done[i] ? 0.0 : 1.0;
    const double next_value = i + 1 < n ? values[i + 1] : bootstrap_value;
    const double delta = signal[i] + gamma * next_value * not_done - values[i];
    running = delta + gamma * lambda * not_done * running;
    out.advantage[i] = running;
    out.target[i] = running + values[i];
  }
  return out;
}

namespace {

std::vector<double> head_values(const nn::Mlp& head, const std::vector<double>& obs_matrix,
                                int batch) {
  return head.forward_nograd(obs_matrix, batch);
}

}  // namespace

AdvantageBatch estimate_advantages(const sd::Trajectory& traj, const ValueHeads& heads,
                                   double gamma, double lambda) {
  const int T = static_cast<int>(traj.steps.size());
  if (T == 0) throw Error("estimate_advantages: empty trajectory");
  const int num_pairs = static_cast<int>(traj.steps.front().signals.size());
  const int num_groups = static_cast<int>(traj.steps.front().signals.front().supply.size());
  if (heads.num_pairs() != num_pairs || heads.num_groups() != num_groups) {
    throw ShapeError("estimate_advantages: value heads do not match signal layout");
  }

  const int obs_dim = heads.reward_head.spec().input_dim;
  std::vector<double> obs_matrix(static_cast<std::size_t>(T) * obs_dim);
  std::vector<std::uint8_t> done(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    const auto& step = traj.steps[static_cast<std::size_t>(t)];
    if (static_cast<int>(step.observation.size()) != obs_dim) {
      throw ShapeError("estimate_advantages: observation width mismatch");
    }
    std::copy(step.observation.begin(), step.observation.end(),
              obs_matrix.begin() + static_cast<std::size_t>(t) * obs_dim);
    done[static_cast<std::size_t>(t)] = step.done ? 1 : 0;
  }
  if (static_cast<int>(traj.final_observation.size()) != obs_dim) {
    throw ShapeError("estimate_advantages: final observation width mismatch");
  }

  auto signal_of = [&](int pair, int which, int group) {
    // which: 0 = reward, 1 = supply, 2 = demand
    std::vector<double> x(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
      const auto& sig = traj.steps[static_cast<std::size_t>(t)].signals[static_cast<std::size_t>(pair)];
      x[static_cast<std::size_t>(t)] = which == 0   ? sig.reward
                                       : which == 1 ? sig.supply[static_cast<std::size_t>(group)]
                                                    : sig.demand[static_cast<std::size_t>(group)];
    }
    return x;
  };

  auto run_head = [&](const nn::Mlp& head, const std::vector<double>& x) {
    std::vector<double> values = head_values(head, obs_matrix, T);
    const double bootstrap = head.forward_nograd(traj.final_observation, 1)[0];
    return gae(x, values, done, bootstrap, gamma, lambda);
  };

  AdvantageBatch out;
  {
    auto r = run_head(heads.reward_head, signal_of(0, 0, 0));
    out.a_r = std::move(r.advantage);
    out.target_r = std::move(r.target);
  }
  out.a_s.resize(static_cast<std::size_t>(num_pairs));
  out.a_d.resize(static_cast<std::size_t>(num_pairs));
  out.target_s.resize(static_cast<std::size_t>(num_pairs));
  out.target_d.resize(static_cast<std::size_t>(num_pairs));
  for (int p = 0; p < num_pairs; ++p) {
    for (int g = 0; g < num_groups; ++g) {
      auto s = run_head(heads.supply_heads[static_cast<std::size_t>(p)][static_cast<std::size_t>(g)],
                        signal_of(p, 1, g));
      auto d = run_head(heads.demand_heads[static_cast<std::size_t>(p)][static_cast<std::size_t>(g)],
                        signal_of(p, 2, g));
      out.a_s[static_cast<std::size_t>(p)].push_back(std::move(s.advantage));
      out.target_s[static_cast<std::size_t>(p)].push_back(std::move(s.target));
      out.a_d[static_cast<std::size_t>(p)].push_back(std::move(d.advantage));
      out.target_d[static_cast<std::size_t>(p)].push_back(std::move(d.target));
    }
  }
  return out;
}

}  // namespace elbert::adv
