#include "elbert/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "elbert/errors.hpp"
#include "elbert/nn/categorical.hpp"
#include "elbert/nn/graph.hpp"
#include "elbert/nn/serialize.hpp"
#include "elbert/sd/bias.hpp"
#include "elbert/train/baselines.hpp"
#include "elbert/train/policy.hpp"
#include "nlohmann/json.hpp"

namespace elbert::train {

namespace {
// Log-ratio magnitude beyond which a sample is masked out of the surrogate.
constexpr double kMaxLogRatio = 60.0;
}  // namespace

PpoUpdateStats ppo_clip_update(nn::Mlp& policy, nn::Optimizer& optimizer,
                               const PolicyBatch& batch, double clip_epsilon,
                               double entropy_coef) {
  PpoUpdateStats stats;
  const int n = batch.rows;
  if (n == 0) return stats;

  // Screen for rows whose ratio would overflow before taping anything.
  std::vector<double> mask(static_cast<std::size_t>(n), 1.0);
  int valid = n;
  {
    const std::vector<double> logits = policy.forward_nograd(batch.observations, n);
    const int a_dim = policy.spec().output_dim;
    for (int i = 0; i < n; ++i) {
      std::span<const double> row(logits.data() + static_cast<std::size_t>(i) * a_dim,
                                  static_cast<std::size_t>(a_dim));
      const std::vector<double> logp = nn::log_softmax_vec(row);
      double lp = 0.0;
      if (batch.kind == env::ActionKind::kCategorical) {
        lp = logp[static_cast<std::size_t>(batch.actions[static_cast<std::size_t>(i)])];
      } else {
        for (int g = 0; g < batch.action_len; ++g) {
          lp += batch.actions[static_cast<std::size_t>(i) * batch.action_len + g] *
                logp[static_cast<std::size_t>(g)];
        }
      }
      const double gap = lp - batch.old_log_probs[static_cast<std::size_t>(i)];
      if (!std::isfinite(gap) || std::abs(gap) > kMaxLogRatio) {
        mask[static_cast<std::size_t>(i)] = 0.0;
        --valid;
        ++stats.skipped_samples;
      }
    }
  }
  if (valid == 0) return stats;

  nn::Graph g;
  std::vector<nn::ValueRef> param_nodes;
  nn::ValueRef obs = g.input(nn::Tensor({n, batch.obs_dim}, batch.observations));
  nn::ValueRef logits = policy.forward(g, obs, &param_nodes);
  nn::ValueRef lsm = g.log_softmax(logits);

  nn::ValueRef logp_new;
  if (batch.kind == env::ActionKind::kCategorical) {
    logp_new = g.gather(lsm, batch.actions);
  } else {
    std::vector<double> counts(batch.actions.begin(), batch.actions.end());
    nn::ValueRef counts_in = g.input(nn::Tensor({n, batch.action_len}, counts));
    logp_new = g.row_sum(g.mul(lsm, counts_in));
  }
  nn::ValueRef old_in = g.input(nn::Tensor({n}, batch.old_log_probs));
  // Masked rows may sit far off-policy; clamp their log-ratio so exp stays
  // finite (the mask zeroes their contribution anyway).
  nn::ValueRef ratio = g.exp(g.clip(g.sub(logp_new, old_in), -kMaxLogRatio, kMaxLogRatio));
  nn::ValueRef adv_in = g.input(nn::Tensor({n}, batch.advantages));
  nn::ValueRef surr1 = g.mul(ratio, adv_in);
  nn::ValueRef surr2 = g.mul(g.clip(ratio, 1.0 - clip_epsilon, 1.0 + clip_epsilon), adv_in);
  nn::ValueRef surr = g.min(surr1, surr2);
  nn::ValueRef mask_in = g.input(nn::Tensor({n}, mask));
  nn::ValueRef objective = g.mul_scalar(g.sum(g.mul(surr, mask_in)), 1.0 / valid);

  // mean_t sum_a p log p == negative entropy
  nn::ValueRef neg_entropy = g.mean(g.row_sum(g.mul(g.exp(lsm), lsm)));
  nn::ValueRef loss = g.add(g.mul_scalar(objective, -1.0), g.mul_scalar(neg_entropy, entropy_coef));
  g.backward(loss);

  std::vector<nn::Tensor> grads;
  grads.reserve(param_nodes.size());
  for (nn::ValueRef r : param_nodes) grads.push_back(g.grad(r));
  optimizer.step(policy.params(), grads);

  stats.policy_loss = -g.value(objective)[0];
  stats.entropy = -g.value(neg_entropy)[0];
  return stats;
}

double value_regression(nn::Mlp& head, nn::Optimizer& optimizer,
                        std::span<const double> observations, int rows, int obs_dim,
                        std::span<const double> targets) {
  if (static_cast<int>(targets.size()) != rows) {
    throw ShapeError("value_regression: target count must match rows");
  }
  nn::Graph g;
  std::vector<nn::ValueRef> param_nodes;
  nn::ValueRef obs = g.input(
      nn::Tensor({rows, obs_dim}, std::vector<double>(observations.begin(), observations.end())));
  nn::ValueRef v = head.forward(g, obs, &param_nodes);
  nn::ValueRef tgt = g.input(nn::Tensor({rows, 1}, std::vector<double>(targets.begin(), targets.end())));
  nn::ValueRef diff = g.sub(v, tgt);
  nn::ValueRef mse = g.mean(g.mul(diff, diff));
  g.backward(mse);
  std::vector<nn::Tensor> grads;
  grads.reserve(param_nodes.size());
  for (nn::ValueRef r : param_nodes) grads.push_back(g.grad(r));
  optimizer.step(head.params(), grads);
  return g.value(mse)[0];
}

void Trainer::EpisodeAccumulator::reset(int num_pairs, int num_groups) {
  discount = 1.0;
  length = 0;
  totals.reward_raw = 0.0;
  totals.reward_disc = 0.0;
  totals.supply.assign(static_cast<std::size_t>(num_pairs),
                       std::vector<double>(static_cast<std::size_t>(num_groups), 0.0));
  totals.demand = totals.supply;
}

Trainer::Trainer(std::unique_ptr<env::Environment> environment, TrainerConfig cfg)
    : env_(std::move(environment)), cfg_(std::move(cfg)) {
  if (!env_) throw Error("trainer: null environment");
  cfg_.validate();
  const int obs_dim = env_->observation_dim();
  const int num_groups = env_->num_groups();

  nn::MlpSpec policy_spec;
  policy_spec.input_dim = obs_dim;
  policy_spec.hidden_dims = cfg_.policy_hidden;
  policy_spec.output_dim = env_->action_dim();
  policy_spec.activation = cfg_.activation;
  policy_ = nn::Mlp(policy_spec, nn::mix_seed(cfg_.seed, 101), cfg_.policy_final_scale);

  heads_ = adv::ValueHeads::create(obs_dim, num_pairs_, num_groups, cfg_.value_hidden,
                                   cfg_.activation, nn::mix_seed(cfg_.seed, 202));

  nn::OptimizerConfig opt_cfg;
  opt_cfg.kind = cfg_.optimizer;
  opt_cfg.learning_rate = cfg_.learning_rate;
  policy_opt_ = nn::Optimizer(policy_.params(), opt_cfg);
  reward_head_opt_ = nn::Optimizer(heads_.reward_head.params(), opt_cfg);
  supply_opts_.resize(static_cast<std::size_t>(num_pairs_));
  demand_opts_.resize(static_cast<std::size_t>(num_pairs_));
  for (int p = 0; p < num_pairs_; ++p) {
    for (int g = 0; g < num_groups; ++g) {
      supply_opts_[static_cast<std::size_t>(p)].emplace_back(
          heads_.supply_heads[static_cast<std::size_t>(p)][static_cast<std::size_t>(g)].params(), opt_cfg);
      demand_opts_[static_cast<std::size_t>(p)].emplace_back(
          heads_.demand_heads[static_cast<std::size_t>(p)][static_cast<std::size_t>(g)].params(), opt_cfg);
    }
  }

  action_rng_.seed(nn::mix_seed(cfg_.seed, 1));
  shuffle_rng_.seed(nn::mix_seed(cfg_.seed, 2));
  tracker_ = HistoricalBiasTracker(num_groups);
  episode_.reset(num_pairs_, num_groups);
  current_obs_ = env_->reset();
}

std::vector<double> Trainer::assemble_training_advantage(const adv::AdvantageBatch& batch,
                                                         std::span<const double> delta_now,
                                                         std::span<const double> delta_next,
                                                         IterationMetrics* metrics) {
  switch (cfg_.algorithm) {
    case Algorithm::kGPpo:
    case Algorithm::kRPpo:
      return batch.a_r;
    case Algorithm::kAPpo: {
      std::vector<double> adj(batch.a_r.size());
      for (std::size_t t = 0; t < adj.size(); ++t) {
        adj[t] = a_ppo_adjusted_advantage(batch.a_r[t], delta_now[t], delta_next[t],
                                          cfg_.a_ppo.beta1, cfg_.a_ppo.beta2, cfg_.a_ppo.omega);
      }
      return adj;
    }
    case Algorithm::kElbertPo: {
      // Demand floor applies inside gradient assembly only; rates for dh/dz
      // use the same floored cumulants.
      std::vector<sd::CumulativeSignals> floored = metrics->cumulants;
      for (auto& c : floored) {
        for (double& d : c.eta_d) {
          if (d < cfg_.demand_floor) {
            d = cfg_.demand_floor;
            ++metrics->demand_floor_hits;
          }
        }
      }
      std::vector<std::vector<double>> grads_h;
      for (const auto& c : floored) {
        std::vector<double> rates(c.eta_s.size());
        for (std::size_t g = 0; g < rates.size(); ++g) rates[g] = c.eta_s[g] / c.eta_d[g];
        sd::BiasSpec spec;
        const int m = static_cast<int>(rates.size());
        const bool hard = cfg_.bias_mode == "hard" || (cfg_.bias_mode == "auto" && m == 2);
        spec.mode = hard ? sd::BiasMode::kHardTwoGroup : sd::BiasMode::kSoftMultiGroup;
        spec.num_groups = m;
        spec.beta_temp = cfg_.beta_temp;
        spec.alpha = cfg_.alpha;
        grads_h.push_back(sd::bias_grad_h(rates, spec));
      }
      std::vector<double> a_fair = adv::fairness_aware_advantage(
          batch.a_r, batch.a_s, batch.a_d, floored, grads_h, cfg_.alpha, cfg_.demand_floor,
          &metrics->demand_floor_hits);
      if (cfg_.demand_reg.zeta != 0.0) {
        const int g = cfg_.demand_reg.group;
        if (g < 0 || g >= static_cast<int>(batch.a_d[0].size())) {
          throw ConfigError("trainer.demand_reg.group", "group index out of range");
        }
        a_fair = adv::demand_regularized_advantage(a_fair, batch.a_d[0][static_cast<std::size_t>(g)],
                                                   cfg_.demand_reg.zeta);
      }
      return a_fair;
    }
  }
  throw Error("trainer: unknown algorithm");
}

IterationMetrics Trainer::run_iteration() {
  const int T = cfg_.steps_per_iteration;
  const int num_groups = env_->num_groups();
  const env::ActionKind kind = env_->action_kind();
  const int action_len = kind == env::ActionKind::kCategorical ? 1 : env_->action_dim();
  const int obs_dim = env_->observation_dim();

  sd::Trajectory traj;
  traj.steps.reserve(static_cast<std::size_t>(T));
  std::vector<double> delta_now(static_cast<std::size_t>(T)), delta_next(static_cast<std::size_t>(T));
  std::vector<EpisodeTotals> completed;
  std::vector<double> completed_raw;

  for (int t = 0; t < T; ++t) {
    ActionSample sample =
        sample_policy_action(policy_, kind, env_->allocation_units(), current_obs_, action_rng_);
    delta_now[static_cast<std::size_t>(t)] = tracker_.delta();
    env::StepResult r = env_->step(sample.action);
    delta_next[static_cast<std::size_t>(t)] = tracker_.update(r.signals);

    double train_reward = r.signals.reward;
    if (cfg_.algorithm == Algorithm::kRPpo) {
      train_reward = r_ppo_shaped_reward(r.signals.reward, delta_next[static_cast<std::size_t>(t)],
                                         cfg_.r_ppo.zeta1, cfg_.r_ppo.omega,
                                         cfg_.r_ppo.raw_additive_form);
    }

    sd::TrajectoryStep step;
    step.observation = current_obs_;
    step.action = sample.action;
    step.log_prob = sample.log_prob;
    sd::SupplyDemandSignals sig = r.signals;
    sig.reward = train_reward;
    step.signals = {std::move(sig)};
    step.done = r.done;
    traj.steps.push_back(std::move(step));

    episode_.totals.reward_raw += r.signals.reward;
    episode_.totals.reward_disc += episode_.discount * r.signals.reward;
    for (int g = 0; g < num_groups; ++g) {
      episode_.totals.supply[0][static_cast<std::size_t>(g)] +=
          episode_.discount * r.signals.supply[static_cast<std::size_t>(g)];
      episode_.totals.demand[0][static_cast<std::size_t>(g)] +=
          episode_.discount * r.signals.demand[static_cast<std::size_t>(g)];
    }
    episode_.discount *= cfg_.gamma;
    episode_.length += 1;

    ++env_steps_;
    if (r.done) {
      completed.push_back(episode_.totals);
      completed_raw.push_back(episode_.totals.reward_raw);
      episode_.reset(num_pairs_, num_groups);
      tracker_.reset();
      current_obs_ = env_->reset();
    } else {
      current_obs_ = std::move(r.observation);
    }
  }
  traj.final_observation = current_obs_;

  IterationMetrics m;
  m.iteration = iteration_;
  m.env_steps = env_steps_;
  m.episodes_completed = static_cast<int>(completed.size());
  m.mean_episode_reward =
      completed_raw.empty()
          ? 0.0
          : std::accumulate(completed_raw.begin(), completed_raw.end(), 0.0) / completed_raw.size();

  // Episode-mean cumulants for this iteration; fall back to the latest known
  // values (or the running partial episode) when nothing completed.
  if (!completed.empty()) {
    std::vector<sd::CumulativeSignals> cums(static_cast<std::size_t>(num_pairs_));
    for (int p = 0; p < num_pairs_; ++p) {
      sd::CumulativeSignals& c = cums[static_cast<std::size_t>(p)];
      c.gamma = cfg_.gamma;
      c.eta_s.assign(static_cast<std::size_t>(num_groups), 0.0);
      c.eta_d.assign(static_cast<std::size_t>(num_groups), 0.0);
      for (const EpisodeTotals& ep : completed) {
        if (p == 0) c.eta_r += ep.reward_disc;
        for (int g = 0; g < num_groups; ++g) {
          c.eta_s[static_cast<std::size_t>(g)] += ep.supply[static_cast<std::size_t>(p)][static_cast<std::size_t>(g)];
          c.eta_d[static_cast<std::size_t>(g)] += ep.demand[static_cast<std::size_t>(p)][static_cast<std::size_t>(g)];
        }
      }
      const double n = static_cast<double>(completed.size());
      c.eta_r /= n;
      for (int g = 0; g < num_groups; ++g) {
        c.eta_s[static_cast<std::size_t>(g)] /= n;
        c.eta_d[static_cast<std::size_t>(g)] /= n;
      }
    }
    last_cumulants_ = cums;
    have_cumulants_ = true;
    m.cumulants = std::move(cums);
  } else if (have_cumulants_) {
    m.cumulants = last_cumulants_;
    m.used_stale_cumulants = true;
  } else {
    std::vector<sd::CumulativeSignals> cums(static_cast<std::size_t>(num_pairs_));
    for (int p = 0; p < num_pairs_; ++p) {
      sd::CumulativeSignals& c = cums[static_cast<std::size_t>(p)];
      c.gamma = cfg_.gamma;
      c.eta_r = episode_.totals.reward_disc;
      c.eta_s = episode_.totals.supply[static_cast<std::size_t>(p)];
      c.eta_d = episode_.totals.demand[static_cast<std::size_t>(p)];
    }
    m.cumulants = std::move(cums);
    m.used_stale_cumulants = true;
  }

  // Floored rates of pair 0, for logging.
  {
    const sd::CumulativeSignals& c0 = m.cumulants.front();
    m.rates.resize(c0.eta_s.size());
    double mn = 0.0, mx = 0.0;
    for (std::size_t g = 0; g < c0.eta_s.size(); ++g) {
      m.rates[g] = c0.eta_s[g] / std::max(c0.eta_d[g], cfg_.demand_floor);
      if (g == 0) {
        mn = mx = m.rates[g];
      } else {
        mn = std::min(mn, m.rates[g]);
        mx = std::max(mx, m.rates[g]);
      }
    }
    m.train_bias = mx - mn;
  }

  adv::AdvantageBatch advantages = adv::estimate_advantages(traj, heads_, cfg_.gamma, cfg_.lambda_gae);

  std::vector<double> train_adv;
  try {
    train_adv = assemble_training_advantage(advantages, delta_now, delta_next, &m);
  } catch (const DegenerateDemandError& e) {
    throw DegenerateDemandError(e.group(), e.pair(),
                                std::string(e.what()) + " (iteration " +
                                    std::to_string(iteration_) + ", env step " +
                                    std::to_string(env_steps_) + ")");
  }
  if (cfg_.normalize_advantage) {
    train_adv = adv::normalize_advantage(train_adv, &m.advantage_norm);
  }

  // PPO epochs over shuffled minibatches; value heads follow the same slices.
  std::vector<int> order(static_cast<std::size_t>(T));
  std::iota(order.begin(), order.end(), 0);
  int updates = 0;
  for (int epoch = 0; epoch < cfg_.epochs_per_iteration; ++epoch) {
    nn::shuffle(order, shuffle_rng_);
    for (int start = 0; start < T; start += cfg_.minibatch_size) {
      const int rows = std::min(cfg_.minibatch_size, T - start);
      PolicyBatch pb;
      pb.kind = kind;
      pb.obs_dim = obs_dim;
      pb.action_len = action_len;
      pb.rows = rows;
      pb.observations.resize(static_cast<std::size_t>(rows) * obs_dim);
      pb.actions.resize(static_cast<std::size_t>(rows) * action_len);
      pb.old_log_probs.resize(static_cast<std::size_t>(rows));
      pb.advantages.resize(static_cast<std::size_t>(rows));
      std::vector<double> tgt_r(static_cast<std::size_t>(rows));
      std::vector<std::vector<std::vector<double>>> tgt_s(
          static_cast<std::size_t>(num_pairs_),
          std::vector<std::vector<double>>(static_cast<std::size_t>(num_groups),
                                           std::vector<double>(static_cast<std::size_t>(rows))));
      auto tgt_d = tgt_s;
      for (int i = 0; i < rows; ++i) {
        const int src = order[static_cast<std::size_t>(start + i)];
        const sd::TrajectoryStep& step = traj.steps[static_cast<std::size_t>(src)];
        std::copy(step.observation.begin(), step.observation.end(),
                  pb.observations.begin() + static_cast<std::size_t>(i) * obs_dim);
        std::copy(step.action.begin(), step.action.end(),
                  pb.actions.begin() + static_cast<std::size_t>(i) * action_len);
        pb.old_log_probs[static_cast<std::size_t>(i)] = step.log_prob;
        pb.advantages[static_cast<std::size_t>(i)] = train_adv[static_cast<std::size_t>(src)];
        tgt_r[static_cast<std::size_t>(i)] = advantages.target_r[static_cast<std::size_t>(src)];
        for (int p = 0; p < num_pairs_; ++p)
          for (int g = 0; g < num_groups; ++g) {
            tgt_s[static_cast<std::size_t>(p)][static_cast<std::size_t>(g)][static_cast<std::size_t>(i)] =
                advantages.target_s[static_cast<std::size_t>(p)][static_cast<std::size_t>(g)][static_cast<std::size_t>(src)];
            tgt_d[static_cast<std::size_t>(p)][static_cast<std::size_t>(g)][static_cast<std::size_t>(i)] =
                advantages.target_d[static_cast<std::size_t>(p)][static_cast<std::size_t>(g)][static_cast<std::size_t>(src)];
          }
      }

      PpoUpdateStats stats = ppo_clip_update(policy_, policy_opt_, pb, cfg_.clip_epsilon, cfg_.entropy_coef);
      m.policy_loss += stats.policy_loss;
      m.entropy += stats.entropy;
      m.skipped_samples += stats.skipped_samples;

      double vloss = value_regression(heads_.reward_head, reward_head_opt_, pb.observations, rows,
                                      obs_dim, tgt_r);
      int head_count = 1;
      for (int p = 0; p < num_pairs_; ++p) {
        for (int g = 0; g < num_groups; ++g) {
          vloss += value_regression(
              heads_.supply_heads[static_cast<std::size_t>(p)][static_cast<std::size_t>(g)],
              supply_opts_[static_cast<std::size_t>(p)][static_cast<std::size_t>(g)],
              pb.observations, rows, obs_dim, tgt_s[static_cast<std::size_t>(p)][static_cast<std::size_t>(g)]);
          vloss += value_regression(
              heads_.demand_heads[static_cast<std::size_t>(p)][static_cast<std::size_t>(g)],
              demand_opts_[static_cast<std::size_t>(p)][static_cast<std::size_t>(g)],
              pb.observations, rows, obs_dim, tgt_d[static_cast<std::size_t>(p)][static_cast<std::size_t>(g)]);
          head_count += 2;
        }
      }
      m.value_loss += vloss / head_count;
      ++updates;
    }
  }
  if (updates > 0) {
    m.policy_loss /= updates;
    m.entropy /= updates;
    m.value_loss /= updates;
  }

  ++iteration_;
  m.iteration = iteration_;
  return m;
}

nlohmann::json Trainer::checkpoint_to_json() const {
  nlohmann::json j;
  j["format"] = "elbert-checkpoint";
  j["version"] = 1;
  j["iteration"] = iteration_;
  j["env_steps"] = env_steps_;
  j["trainer_config"] = cfg_;
  j["policy"] = policy_.to_json();
  j["policy_opt"] = policy_opt_.to_json();
  j["reward_head"] = heads_.reward_head.to_json();
  j["reward_head_opt"] = reward_head_opt_.to_json();
  nlohmann::json sup = nlohmann::json::array(), dem = nlohmann::json::array();
  nlohmann::json sup_opt = nlohmann::json::array(), dem_opt = nlohmann::json::array();
  for (int p = 0; p < num_pairs_; ++p) {
    nlohmann::json sp = nlohmann::json::array(), dp = nlohmann::json::array();
    nlohmann::json spo = nlohmann::json::array(), dpo = nlohmann::json::array();
    for (std::size_t g = 0; g < heads_.supply_heads[static_cast<std::size_t>(p)].size(); ++g) {
      sp.push_back(heads_.supply_heads[static_cast<std::size_t>(p)][g].to_json());
      dp.push_back(heads_.demand_heads[static_cast<std::size_t>(p)][g].to_json());
      spo.push_back(supply_opts_[static_cast<std::size_t>(p)][g].to_json());
      dpo.push_back(demand_opts_[static_cast<std::size_t>(p)][g].to_json());
    }
    sup.push_back(std::move(sp));
    dem.push_back(std::move(dp));
    sup_opt.push_back(std::move(spo));
    dem_opt.push_back(std::move(dpo));
  }
  j["supply_heads"] = std::move(sup);
  j["demand_heads"] = std::move(dem);
  j["supply_opts"] = std::move(sup_opt);
  j["demand_opts"] = std::move(dem_opt);
  j["env_state"] = env_->state_to_json();
  j["action_rng"] = nn::rng_to_string(action_rng_);
  j["shuffle_rng"] = nn::rng_to_string(shuffle_rng_);
  j["tracker"] = tracker_.to_json();
  j["current_obs"] = nn::hex_encode(current_obs_);
  nlohmann::json ep;
  ep["discount"] = nn::hex_encode(std::vector<double>{episode_.discount, episode_.totals.reward_disc,
                                                      episode_.totals.reward_raw});
  ep["length"] = episode_.length;
  nlohmann::json eps = nlohmann::json::array(), epd = nlohmann::json::array();
  for (const auto& row : episode_.totals.supply) eps.push_back(nn::hex_encode(row));
  for (const auto& row : episode_.totals.demand) epd.push_back(nn::hex_encode(row));
  ep["supply"] = std::move(eps);
  ep["demand"] = std::move(epd);
  j["episode"] = std::move(ep);
  j["have_cumulants"] = have_cumulants_;
  if (have_cumulants_) {
    nlohmann::json cl = nlohmann::json::array();
    for (const auto& c : last_cumulants_) {
      nlohmann::json cj;
      cj["eta_r"] = nn::hex_encode(std::vector<double>{c.eta_r});
      cj["eta_s"] = nn::hex_encode(c.eta_s);
      cj["eta_d"] = nn::hex_encode(c.eta_d);
      cj["gamma"] = c.gamma;
      cl.push_back(std::move(cj));
    }
    j["last_cumulants"] = std::move(cl);
  }
  return j;
}

void Trainer::restore_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "elbert-checkpoint") {
    throw Error("restore: not an elbert checkpoint");
  }
  iteration_ = j.at("iteration").get<int>();
  env_steps_ = j.at("env_steps").get<long long>();
  policy_ = nn::Mlp::from_json(j.at("policy"));
  policy_opt_ = nn::Optimizer::from_json(j.at("policy_opt"));
  heads_.reward_head = nn::Mlp::from_json(j.at("reward_head"));
  reward_head_opt_ = nn::Optimizer::from_json(j.at("reward_head_opt"));
  const auto& sup = j.at("supply_heads");
  const auto& dem = j.at("demand_heads");
  const auto& sup_opt = j.at("supply_opts");
  const auto& dem_opt = j.at("demand_opts");
  for (int p = 0; p < num_pairs_; ++p) {
    for (std::size_t g = 0; g < heads_.supply_heads[static_cast<std::size_t>(p)].size(); ++g) {
      heads_.supply_heads[static_cast<std::size_t>(p)][g] = nn::Mlp::from_json(sup.at(static_cast<std::size_t>(p)).at(g));
      heads_.demand_heads[static_cast<std::size_t>(p)][g] = nn::Mlp::from_json(dem.at(static_cast<std::size_t>(p)).at(g));
      supply_opts_[static_cast<std::size_t>(p)][g] = nn::Optimizer::from_json(sup_opt.at(static_cast<std::size_t>(p)).at(g));
      demand_opts_[static_cast<std::size_t>(p)][g] = nn::Optimizer::from_json(dem_opt.at(static_cast<std::size_t>(p)).at(g));
    }
  }
  env_->state_from_json(j.at("env_state"));
  action_rng_ = nn::rng_from_string(j.at("action_rng").get<std::string>());
  shuffle_rng_ = nn::rng_from_string(j.at("shuffle_rng").get<std::string>());
  tracker_.from_json(j.at("tracker"));
  current_obs_ = nn::hex_decode(j.at("current_obs").get<std::string>());
  const auto& ep = j.at("episode");
  const auto scalars = nn::hex_decode(ep.at("discount").get<std::string>());
  episode_.discount = scalars.at(0);
  episode_.totals.reward_disc = scalars.at(1);
  episode_.totals.reward_raw = scalars.at(2);
  episode_.length = ep.at("length").get<int>();
  episode_.totals.supply.clear();
  episode_.totals.demand.clear();
  for (const auto& row : ep.at("supply")) {
    episode_.totals.supply.push_back(nn::hex_decode(row.get<std::string>()));
  }
  for (const auto& row : ep.at("demand")) {
    episode_.totals.demand.push_back(nn::hex_decode(row.get<std::string>()));
  }
  have_cumulants_ = j.at("have_cumulants").get<bool>();
  last_cumulants_.clear();
  if (have_cumulants_) {
    for (const auto& cj : j.at("last_cumulants")) {
      sd::CumulativeSignals c;
      c.eta_r = nn::hex_decode(cj.at("eta_r").get<std::string>()).at(0);
      c.eta_s = nn::hex_decode(cj.at("eta_s").get<std::string>());
      c.eta_d = nn::hex_decode(cj.at("eta_d").get<std::string>());
      c.gamma = cj.at("gamma").get<double>();
      last_cumulants_.push_back(std::move(c));
    }
  }
}

}  // namespace elbert::train
