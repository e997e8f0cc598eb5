#include "elbert/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "elbert/errors.hpp"
#include "nlohmann/json.hpp"

extern char** environ;

namespace elbert::harness {

std::string env_kind_name(EnvKind k) {
  switch (k) {
    case EnvKind::kLending: return "lending";
    case EnvKind::kInfectiousOriginal: return "infectious_original";
    case EnvKind::kInfectiousHarder: return "infectious_harder";
    case EnvKind::kAttentionOriginal: return "attention_original";
    case EnvKind::kAttentionHarder: return "attention_harder";
  }
  return "lending";
}

EnvKind env_kind_from_name(const std::string& name) {
  if (name == "lending") return EnvKind::kLending;
  if (name == "infectious_original") return EnvKind::kInfectiousOriginal;
  if (name == "infectious_harder") return EnvKind::kInfectiousHarder;
  if (name == "attention_original") return EnvKind::kAttentionOriginal;
  if (name == "attention_harder") return EnvKind::kAttentionHarder;
  throw ConfigError("environment.name", "unknown environment '" + name + "'");
}

void ExperimentConfig::validate() const {
  trainer.validate();
  if (seeds.empty()) throw ConfigError("seeds", "at least one seed required");
  if (eval.episodes_per_eval < 1) throw ConfigError("eval.episodes_per_eval", "must be >= 1");
  if (eval.eval_interval_steps < 1) throw ConfigError("eval.eval_interval_steps", "must be >= 1");
  if (checkpoint_interval_steps < 0) {
    throw ConfigError("checkpoint_interval_steps", "must be >= 0");
  }
  if (output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
  switch (environment.kind) {
    case EnvKind::kLending: {
      env::LendingConfig c = environment.lending;
      c.resolve_defaults();
      c.validate();
      break;
    }
    case EnvKind::kInfectiousOriginal:
    case EnvKind::kInfectiousHarder: {
      env::InfectiousConfig c = environment.infectious;
      c.resolve_defaults();
      c.validate();
      break;
    }
    case EnvKind::kAttentionOriginal:
    case EnvKind::kAttentionHarder:
      environment.attention.validate();
      break;
  }
}

ExperimentConfig default_config(EnvKind kind) {
  ExperimentConfig cfg;
  cfg.environment.kind = kind;
  train::TrainerConfig& t = cfg.trainer;
  t.algorithm = train::Algorithm::kElbertPo;
  switch (kind) {
    case EnvKind::kLending:
      t.alpha = 2e5;
      t.learning_rate = 1e-5;
      t.total_steps = 2000000;
      t.r_ppo = {2.0, 0.005, false};
      t.a_ppo = {0.25, 0.25, 0.005};
      break;
    case EnvKind::kInfectiousOriginal:
      cfg.environment.infectious.resusceptible_prob = 0.0;
      t.alpha = 10.0;
      t.learning_rate = 1e-5;
      t.total_steps = 10000000;
      t.r_ppo = {0.1, 0.05, false};
      t.a_ppo = {0.1, 0.1, 0.05};
      break;
    case EnvKind::kInfectiousHarder:
      cfg.environment.infectious.resusceptible_prob = 0.2;
      t.alpha = 50.0;
      t.learning_rate = 1e-5;
      t.total_steps = 5000000;
      t.r_ppo = {0.1, 0.05, false};
      t.a_ppo = {0.1, 0.1, 0.05};
      break;
    case EnvKind::kAttentionOriginal:
      cfg.environment.attention = env::AttentionConfig::original();
      t.alpha = 50.0;
      t.beta_temp = 20.0;
      t.learning_rate = 1e-6;
      t.total_steps = 20000000;
      t.r_ppo = {10.0, 0.05, false};
      t.a_ppo = {0.15, 0.15, 0.05};
      break;
    case EnvKind::kAttentionHarder:
      cfg.environment.attention = env::AttentionConfig::harder();
      t.alpha = 2e4;
      t.beta_temp = 20.0;
      t.learning_rate = 1e-5;
      t.total_steps = 5000000;
      t.r_ppo = {20.0, 0.05, false};
      t.a_ppo = {0.15, 0.15, 0.05};
      break;
  }
  cfg.output_dir = "runs/" + env_kind_name(kind);
  return cfg;
}

void apply_desk_preset(ExperimentConfig& cfg) {
  cfg.trainer.total_steps = std::max<long long>(cfg.trainer.total_steps / 10,
                                                cfg.trainer.steps_per_iteration);
}

namespace {

nlohmann::json env_spec_to_json(const EnvSpec& s) {
  nlohmann::json j;
  j["name"] = env_kind_name(s.kind);
  switch (s.kind) {
    case EnvKind::kLending: {
      const env::LendingConfig& c = s.lending;
      j["num_score_bins"] = c.num_score_bins;
      j["initial_distribution_g0"] = c.initial_distribution_g0;
      j["initial_distribution_g1"] = c.initial_distribution_g1;
      j["repay_prob"] = c.repay_prob;
      j["dynamic_rate"] = c.dynamic_rate;
      j["loan_gain"] = c.loan_gain;
      j["loan_loss"] = c.loan_loss;
      j["episode_length"] = c.episode_length;
      break;
    }
    case EnvKind::kInfectiousOriginal:
    case EnvKind::kInfectiousHarder: {
      const env::InfectiousConfig& c = s.infectious;
      j["infection_rate"] = c.infection_rate;
      j["recovery_prob"] = c.recovery_prob;
      j["resusceptible_prob"] = c.resusceptible_prob;
      j["episode_length"] = c.episode_length;
      j["nodes_per_group"] = s.nodes_per_group;
      j["intra_prob"] = s.intra_prob;
      j["inter_prob"] = s.inter_prob;
      j["graph_seed"] = s.graph_seed;
      j["graph_file"] = s.graph_file;
      break;
    }
    case EnvKind::kAttentionOriginal:
    case EnvKind::kAttentionHarder: {
      const env::AttentionConfig& c = s.attention;
      j["total_units"] = c.total_units;
      j["initial_rates"] = c.initial_rates;
      j["decay_rates"] = c.decay_rates;
      j["growth_rates"] = c.growth_rates;
      j["zeta"] = c.zeta;
      j["reward_form"] = c.reward_form == env::AttentionReward::kDiscoveredMinusMissed
                             ? "discovered_minus_missed"
                             : "negative_missed";
      j["episode_length"] = c.episode_length;
      break;
    }
  }
  return j;
}

void env_spec_from_json(const nlohmann::json& j, EnvSpec& s) {
  switch (s.kind) {
    case EnvKind::kLending: {
      env::LendingConfig& c = s.lending;
      if (j.contains("num_score_bins")) c.num_score_bins = j.at("num_score_bins").get<int>();
      if (j.contains("initial_distribution_g0")) c.initial_distribution_g0 = j.at("initial_distribution_g0").get<std::vector<double>>();
      if (j.contains("initial_distribution_g1")) c.initial_distribution_g1 = j.at("initial_distribution_g1").get<std::vector<double>>();
      if (j.contains("repay_prob")) c.repay_prob = j.at("repay_prob").get<std::vector<double>>();
      if (j.contains("dynamic_rate")) c.dynamic_rate = j.at("dynamic_rate").get<double>();
      if (j.contains("loan_gain")) c.loan_gain = j.at("loan_gain").get<double>();
      if (j.contains("loan_loss")) c.loan_loss = j.at("loan_loss").get<double>();
      if (j.contains("episode_length")) c.episode_length = j.at("episode_length").get<int>();
      break;
    }
    case EnvKind::kInfectiousOriginal:
    case EnvKind::kInfectiousHarder: {
      env::InfectiousConfig& c = s.infectious;
      if (j.contains("infection_rate")) c.infection_rate = j.at("infection_rate").get<double>();
      if (j.contains("recovery_prob")) c.recovery_prob = j.at("recovery_prob").get<double>();
      if (j.contains("resusceptible_prob")) c.resusceptible_prob = j.at("resusceptible_prob").get<double>();
      if (j.contains("episode_length")) c.episode_length = j.at("episode_length").get<int>();
      if (j.contains("nodes_per_group")) s.nodes_per_group = j.at("nodes_per_group").get<int>();
      if (j.contains("intra_prob")) s.intra_prob = j.at("intra_prob").get<double>();
      if (j.contains("inter_prob")) s.inter_prob = j.at("inter_prob").get<double>();
      if (j.contains("graph_seed")) s.graph_seed = j.at("graph_seed").get<std::uint64_t>();
      if (j.contains("graph_file")) s.graph_file = j.at("graph_file").get<std::string>();
      break;
    }
    case EnvKind::kAttentionOriginal:
    case EnvKind::kAttentionHarder: {
      env::AttentionConfig& c = s.attention;
      if (j.contains("total_units")) c.total_units = j.at("total_units").get<int>();
      if (j.contains("initial_rates")) c.initial_rates = j.at("initial_rates").get<std::vector<double>>();
      if (j.contains("decay_rates")) c.decay_rates = j.at("decay_rates").get<std::vector<double>>();
      if (j.contains("growth_rates")) c.growth_rates = j.at("growth_rates").get<std::vector<double>>();
      if (j.contains("zeta")) c.zeta = j.at("zeta").get<double>();
      if (j.contains("reward_form")) {
        const std::string form = j.at("reward_form").get<std::string>();
        if (form == "discovered_minus_missed") {
          c.reward_form = env::AttentionReward::kDiscoveredMinusMissed;
        } else if (form == "negative_missed") {
          c.reward_form = env::AttentionReward::kNegativeMissed;
        } else {
          throw ConfigError("environment.reward_form", "unknown reward form '" + form + "'");
        }
      }
      if (j.contains("episode_length")) c.episode_length = j.at("episode_length").get<int>();
      break;
    }
  }
}

void merge_into(nlohmann::json& base, const nlohmann::json& overlay) {
  if (!overlay.is_object() || !base.is_object()) {
    base = overlay;
    return;
  }
  for (auto it = overlay.begin(); it != overlay.end(); ++it) {
    if (base.contains(it.key())) {
      merge_into(base[it.key()], it.value());
    } else {
      base[it.key()] = it.value();
    }
  }
}

void collect_paths(const nlohmann::json& j, const std::string& prefix,
                   std::vector<std::string>& out) {
  if (!j.is_object()) {
    out.push_back(prefix);
    return;
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    collect_paths(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  }
}

std::string path_to_env_name(const std::string& path) {
  std::string name = "ELBERT_";
  for (char c : path) {
    name.push_back(c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return name;
}

void set_by_path(nlohmann::json& j, const std::string& path, const nlohmann::json& value) {
  nlohmann::json* cur = &j;
  std::size_t start = 0;
  for (;;) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (dot == std::string::npos) {
      (*cur)[key] = value;
      return;
    }
    cur = &(*cur)[key];
    start = dot + 1;
  }
}

}  // namespace

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["environment"] = env_spec_to_json(cfg.environment);
  j["trainer"] = cfg.trainer;
  j["eval"] = {{"episodes_per_eval", cfg.eval.episodes_per_eval},
               {"eval_interval_steps", cfg.eval.eval_interval_steps},
               {"greedy", cfg.eval.greedy}};
  j["output_dir"] = cfg.output_dir;
  j["seeds"] = cfg.seeds;
  j["checkpoint_interval_steps"] = cfg.checkpoint_interval_steps;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.contains("environment") || !j.at("environment").contains("name")) {
    throw ConfigError("environment.name", "missing");
  }
  const EnvKind kind = env_kind_from_name(j.at("environment").at("name").get<std::string>());
  ExperimentConfig cfg = default_config(kind);
  env_spec_from_json(j.at("environment"), cfg.environment);
  if (j.contains("trainer")) cfg.trainer = j.at("trainer").get<train::TrainerConfig>();
  if (j.contains("eval")) {
    const auto& e = j.at("eval");
    if (e.contains("episodes_per_eval")) cfg.eval.episodes_per_eval = e.at("episodes_per_eval").get<int>();
    if (e.contains("eval_interval_steps")) cfg.eval.eval_interval_steps = e.at("eval_interval_steps").get<long long>();
    if (e.contains("greedy")) cfg.eval.greedy = e.at("greedy").get<bool>();
  }
  if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  if (j.contains("checkpoint_interval_steps")) {
    cfg.checkpoint_interval_steps = j.at("checkpoint_interval_steps").get<long long>();
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig resolve_config(const nlohmann::json& file_json, const std::string& preset,
                                const std::map<std::string, std::string>& env_overrides) {
  if (!file_json.contains("environment") || !file_json.at("environment").contains("name")) {
    throw ConfigError("environment.name", "missing");
  }
  const EnvKind kind = env_kind_from_name(file_json.at("environment").at("name").get<std::string>());
  ExperimentConfig base = default_config(kind);
  if (preset == "desk") {
    apply_desk_preset(base);
  } else if (!preset.empty()) {
    throw ConfigError("preset", "unknown preset '" + preset + "'");
  }

  nlohmann::json resolved = config_to_json(base);
  merge_into(resolved, file_json);

  if (!env_overrides.empty()) {
    std::vector<std::string> paths;
    collect_paths(resolved, "", paths);
    for (const std::string& path : paths) {
      const auto it = env_overrides.find(path_to_env_name(path));
      if (it == env_overrides.end()) continue;
      nlohmann::json value;
      try {
        value = nlohmann::json::parse(it->second);
      } catch (const nlohmann::json::parse_error&) {
        value = it->second;  // plain string
      }
      set_by_path(resolved, path, value);
    }
  }
  return config_from_json(resolved);
}

ExperimentConfig load_config_file(const std::string& path, const std::string& preset) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config", "parse error in '" + path + "': " + e.what());
  }
  return resolve_config(j, preset, environment_overrides());
}

std::map<std::string, std::string> environment_overrides() {
  std::map<std::string, std::string> out;
  for (char** e = environ; e && *e; ++e) {
    const std::string entry(*e);
    if (entry.rfind("ELBERT_", 0) != 0) continue;
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos) continue;
    out[entry.substr(0, eq)] = entry.substr(eq + 1);
  }
  return out;
}

std::unique_ptr<env::Environment> make_environment(const EnvSpec& spec, std::uint64_t seed) {
  switch (spec.kind) {
    case EnvKind::kLending:
      return std::make_unique<env::LendingEnv>(spec.lending, seed);
    case EnvKind::kInfectiousOriginal:
    case EnvKind::kInfectiousHarder: {
      env::InfectiousConfig cfg = spec.infectious;
      if (!spec.graph_file.empty()) {
        std::ifstream in(spec.graph_file);
        if (!in) throw ConfigError("environment.graph_file", "cannot open '" + spec.graph_file + "'");
        cfg.graph = env::load_graph(in);
      } else if (cfg.graph.num_nodes() == 0) {
        cfg.graph = env::make_two_community_graph(spec.nodes_per_group, spec.intra_prob,
                                                  spec.inter_prob, spec.graph_seed);
      }
      return std::make_unique<env::InfectiousEnv>(cfg, seed);
    }
    case EnvKind::kAttentionOriginal:
    case EnvKind::kAttentionHarder:
      return std::make_unique<env::AttentionEnv>(spec.attention, seed);
  }
  throw Error("make_environment: unknown environment kind");
}

}  // namespace elbert::harness
