#include "elbert/harness/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "elbert/errors.hpp"
#include "elbert/harness/eval.hpp"
#include "elbert/harness/metrics.hpp"
#include "elbert/train/trainer.hpp"
#include "nlohmann/json.hpp"

namespace elbert::harness {

namespace fs = std::filesystem;

namespace {

nlohmann::json record_to_json(const MetricRecord& r) {
  return nlohmann::json{{"env_steps", r.env_steps},
                        {"mean_episode_reward", r.mean_episode_reward},
                        {"eval_bias", r.eval_bias},
                        {"rates", r.rates},
                        {"supply", r.supply},
                        {"demand", r.demand},
                        {"wall_clock_seconds", r.wall_clock_seconds}};
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace

nlohmann::json run_single_seed(const ExperimentConfig& cfg, std::uint64_t seed,
                               const std::string& run_dir,
                               const std::string& resume_checkpoint) {
  cfg.validate();
  fs::create_directories(run_dir);
  const auto run_start = std::chrono::steady_clock::now();

  nlohmann::json resolved = config_to_json(cfg);
  resolved["run_seed"] = seed;
  write_json_file(run_dir + "/config.json", resolved);

  train::TrainerConfig tcfg = cfg.trainer;
  tcfg.seed = seed;
  train::Trainer trainer(make_environment(cfg.environment, nn::mix_seed(seed, 0)), tcfg);
  if (!resume_checkpoint.empty()) {
    std::ifstream in(resume_checkpoint);
    if (!in) throw Error("cannot open checkpoint '" + resume_checkpoint + "'");
    nlohmann::json wrapper;
    in >> wrapper;
    trainer.restore_from_json(wrapper.at("trainer"));
  }

  const int num_groups = trainer.environment().num_groups();
  MetricsWriter metrics(run_dir + "/metrics.csv", num_groups);
  std::ofstream train_log(run_dir + "/train_log.txt", std::ios::trunc);

  auto wall_seconds = [&run_start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - run_start).count();
  };

  auto evaluate_now = [&]() {
    const long long steps = trainer.env_steps();
    EvalResult er = evaluate_policy(trainer.policy(), cfg.environment, cfg.eval.episodes_per_eval,
                                    nn::mix_seed(seed, 1000003ULL + static_cast<std::uint64_t>(steps)),
                                    cfg.eval.greedy);
    MetricRecord rec;
    rec.env_steps = steps;
    rec.mean_episode_reward = er.mean_episode_reward;
    rec.eval_bias = er.eval_bias;
    rec.rates = er.rates;
    rec.supply = er.total_supply;
    rec.demand = er.total_demand;
    rec.wall_clock_seconds = wall_seconds();
    metrics.append(rec);
    return rec;
  };

  auto write_checkpoint = [&](const std::string& path) {
    nlohmann::json wrapper;
    wrapper["experiment"] = resolved;
    wrapper["seed"] = seed;
    wrapper["trainer"] = trainer.checkpoint_to_json();
    write_json_file(path, wrapper);
  };

  MetricRecord last_record;
  bool have_record = false;
  if (trainer.env_steps() == 0) {
    last_record = evaluate_now();
    have_record = true;
  }

  const long long interval = cfg.eval.eval_interval_steps;
  long long next_eval = (trainer.env_steps() / interval + 1) * interval;
  long long next_ckpt = cfg.checkpoint_interval_steps > 0
                            ? (trainer.env_steps() / cfg.checkpoint_interval_steps + 1) *
                                  cfg.checkpoint_interval_steps
                            : -1;

  while (trainer.env_steps() < cfg.trainer.total_steps) {
    train::IterationMetrics im = trainer.run_iteration();
    train_log << "iter=" << im.iteration << " steps=" << im.env_steps
              << " episodes=" << im.episodes_completed
              << " mean_episode_reward=" << im.mean_episode_reward
              << " train_bias=" << im.train_bias << " policy_loss=" << im.policy_loss
              << " value_loss=" << im.value_loss << " entropy=" << im.entropy
              << " demand_floor_hits=" << im.demand_floor_hits
              << " skipped=" << im.skipped_samples
              << (im.used_stale_cumulants ? " stale_cumulants=1" : "") << "\n";
    train_log.flush();

    if (trainer.env_steps() >= next_eval) {
      last_record = evaluate_now();
      have_record = true;
      next_eval = (trainer.env_steps() / interval + 1) * interval;
    }
    if (next_ckpt > 0 && trainer.env_steps() >= next_ckpt) {
      write_checkpoint(run_dir + "/checkpoint_" + std::to_string(trainer.env_steps()) + ".json");
      next_ckpt = (trainer.env_steps() / cfg.checkpoint_interval_steps + 1) *
                  cfg.checkpoint_interval_steps;
    }
  }

  if (!have_record || last_record.env_steps != trainer.env_steps()) {
    last_record = evaluate_now();
  }
  write_checkpoint(run_dir + "/final_checkpoint.json");

  nlohmann::json report;
  report["seed"] = seed;
  report["run_dir"] = run_dir;
  report["env_steps"] = trainer.env_steps();
  report["final"] = record_to_json(last_record);
  report["wall_clock_seconds"] = wall_seconds();
  report["ok"] = true;
  return report;
}

nlohmann::json run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  fs::create_directories(cfg.output_dir);

  nlohmann::json runs = nlohmann::json::array();
  std::vector<double> final_bias, final_reward;
  for (std::uint64_t seed : cfg.seeds) {
    const std::string run_dir = cfg.output_dir + "/seed_" + std::to_string(seed);
    try {
      nlohmann::json report = run_single_seed(cfg, seed, run_dir);
      final_bias.push_back(report.at("final").at("eval_bias").get<double>());
      final_reward.push_back(report.at("final").at("mean_episode_reward").get<double>());
      runs.push_back(std::move(report));
    } catch (const std::exception& e) {
      nlohmann::json failed;
      failed["seed"] = seed;
      failed["run_dir"] = run_dir;
      failed["ok"] = false;
      failed["error"] = e.what();
      runs.push_back(std::move(failed));
    }
  }

  auto mean_stderr = [](const std::vector<double>& v) {
    nlohmann::json j;
    if (v.empty()) {
      j["mean"] = nullptr;
      j["stderr"] = nullptr;
      return j;
    }
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    const double se = v.size() > 1 ? std::sqrt(var / (static_cast<double>(v.size()) - 1.0)) /
                                         std::sqrt(static_cast<double>(v.size()))
                                   : 0.0;
    j["mean"] = mean;
    j["stderr"] = se;
    return j;
  };

  nlohmann::json summary;
  summary["config"] = config_to_json(cfg);
  summary["algorithm"] = train::algorithm_name(cfg.trainer.algorithm);
  summary["environment"] = env_kind_name(cfg.environment.kind);
  summary["runs"] = std::move(runs);
  summary["final_eval_bias"] = mean_stderr(final_bias);
  summary["final_mean_episode_reward"] = mean_stderr(final_reward);
  summary["seeds_completed"] = final_bias.size();
  write_json_file(cfg.output_dir + "/summary.json", summary);
  return summary;
}

}  // namespace elbert::harness
