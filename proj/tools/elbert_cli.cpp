// Experiment CLI: train runs experiments from a JSON config, eval rolls out
// a checkpointed policy, plot renders SVG summaries from run directories.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "elbert/harness/config.hpp"
#include "elbert/harness/eval.hpp"
#include "elbert/harness/experiment.hpp"
#include "elbert/harness/plots.hpp"
#include "elbert/nn/mlp.hpp"
#include "nlohmann/json.hpp"

namespace {

int cmd_train(const std::string& config_path, const std::string& preset,
              const std::vector<std::uint64_t>& seeds, const std::string& out_dir,
              const std::string& algo, const std::string& resume) {
  elbert::harness::ExperimentConfig cfg = elbert::harness::load_config_file(config_path, preset);
  if (!seeds.empty()) cfg.seeds = seeds;
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (!algo.empty()) cfg.trainer.algorithm = elbert::train::algorithm_from_name(algo);
  cfg.validate();

  if (!resume.empty()) {
    if (cfg.seeds.size() != 1) {
      std::cerr << "--resume requires exactly one seed\n";
      return 1;
    }
    const std::string run_dir = cfg.output_dir + "/seed_" + std::to_string(cfg.seeds[0]);
    auto report = elbert::harness::run_single_seed(cfg, cfg.seeds[0], run_dir, resume);
    std::cout << report.dump(2) << std::endl;
    return 0;
  }
  auto summary = elbert::harness::run_experiment(cfg);
  std::cout << summary.dump(2) << std::endl;
  return 0;
}

int cmd_eval(const std::string& checkpoint_path, int episodes, std::uint64_t seed, bool greedy) {
  std::ifstream in(checkpoint_path);
  if (!in) {
    std::cerr << "cannot open checkpoint '" << checkpoint_path << "'\n";
    return 1;
  }
  nlohmann::json wrapper;
  in >> wrapper;
  auto cfg = elbert::harness::config_from_json(wrapper.at("experiment"));
  elbert::nn::Mlp policy = elbert::nn::Mlp::from_json(wrapper.at("trainer").at("policy"));
  auto result = elbert::harness::evaluate_policy(policy, cfg.environment, episodes, seed, greedy);
  nlohmann::json out;
  out["mean_episode_reward"] = result.mean_episode_reward;
  out["eval_bias"] = result.eval_bias;
  out["rates"] = result.rates;
  out["total_supply"] = result.total_supply;
  out["total_demand"] = result.total_demand;
  out["groups_without_demand"] = result.groups_without_demand;
  std::cout << out.dump(2) << std::endl;
  return 0;
}

int cmd_plot(const std::vector<std::string>& runs, const std::string& out_dir) {
  elbert::harness::emit_plots(runs, out_dir);
  std::cout << "wrote plots to " << out_dir << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Long-term-fairness RL experiments: supply-demand environments, "
               "fairness-aware PPO and baselines"};
  app.require_subcommand(1);

  std::string config_path, preset, out_dir, algo, resume, checkpoint_path;
  std::vector<std::uint64_t> seeds;
  int episodes = 5;
  std::uint64_t eval_seed = 0;
  bool greedy = false;
  std::vector<std::string> run_dirs;
  std::string plot_out = "plots";

  CLI::App* train = app.add_subcommand("train", "train a policy from a config file");
  train->add_option("--config", config_path, "JSON experiment config")->required();
  train->add_option("--preset", preset, "config preset (desk: full-scale hyperparameters at 1/10 steps)");
  train->add_option("--seed", seeds, "override the config seed list");
  train->add_option("--out", out_dir, "override the output directory");
  train->add_option("--algo", algo, "override the algorithm (elbert_po|g_ppo|r_ppo|a_ppo)");
  train->add_option("--resume", resume, "checkpoint file to resume from (single seed)");

  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a checkpointed policy");
  eval_cmd->add_option("--checkpoint", checkpoint_path, "checkpoint JSON file")->required();
  eval_cmd->add_option("--episodes", episodes, "evaluation episodes")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", eval_seed, "evaluation seed");
  eval_cmd->add_flag("--greedy", greedy, "deterministic action decode instead of sampling");

  CLI::App* plot = app.add_subcommand("plot", "render SVG plots from run directories");
  plot->add_option("--runs", run_dirs, "run directories (each with config.json + metrics.csv)")
      ->required();
  plot->add_option("--out", plot_out, "output directory for the SVG files");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(config_path, preset, seeds, out_dir, algo, resume);
    if (eval_cmd->parsed()) return cmd_eval(checkpoint_path, episodes, eval_seed, greedy);
    if (plot->parsed()) return cmd_plot(run_dirs, plot_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
