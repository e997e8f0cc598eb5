#include "elbert/env/infectious.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>

#include "elbert/errors.hpp"
#include "elbert/nn/serialize.hpp"
#include "nlohmann/json.hpp"

namespace elbert::env {

void InfectiousGraph::validate() const {
  const int n = num_nodes();
  if (n < 2) throw ConfigError("graph", "needs at least two nodes");
  bool has[2] = {false, false};
  for (int g : group) {
    if (g != 0 && g != 1) throw ConfigError("graph", "group labels must be 0 or 1");
    has[g] = true;
  }
  if (!has[0] || !has[1]) throw ConfigError("graph", "both groups must be non-empty");
  if (static_cast<int>(neighbors.size()) != n) {
    throw ConfigError("graph", "adjacency list size must match node count");
  }
  for (const auto& adj : neighbors) {
    for (int v : adj) {
      if (v < 0 || v >= n) throw ConfigError("graph", "edge endpoint out of range");
    }
  }
}

InfectiousGraph make_two_community_graph(int nodes_per_group, double intra_prob,
                                         double inter_prob, std::uint64_t graph_seed) {
  const int n = 2 * nodes_per_group;
  InfectiousGraph g;
  g.group.resize(static_cast<std::size_t>(n));
  g.neighbors.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) g.group[static_cast<std::size_t>(v)] = v < nodes_per_group ? 0 : 1;
  nn::Rng rng(graph_seed);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const double p = g.group[static_cast<std::size_t>(u)] == g.group[static_cast<std::size_t>(v)]
                           ? intra_prob
                           : inter_prob;
      if (nn::bernoulli(rng, p)) {
        g.neighbors[static_cast<std::size_t>(u)].push_back(v);
        g.neighbors[static_cast<std::size_t>(v)].push_back(u);
      }
    }
  }
  g.validate();
  return g;
}

InfectiousGraph load_graph(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("graph_file", "empty graph file");
  std::istringstream header(line);
  std::string tag;
  header >> tag;
  if (tag != "groups") throw ConfigError("graph_file", "first line must start with 'groups'");
  InfectiousGraph g;
  int label;
  while (header >> label) g.group.push_back(label);
  // Accept 1/2 labels and normalize to 0/1.
  if (!g.group.empty() && *std::min_element(g.group.begin(), g.group.end()) == 1) {
    for (int& v : g.group) v -= 1;
  }
  g.neighbors.resize(g.group.size());
  int u, v;
  while (in >> u >> v) {
    if (u < 0 || v < 0 || u >= g.num_nodes() || v >= g.num_nodes()) {
      throw ConfigError("graph_file", "edge endpoint out of range");
    }
    g.neighbors[static_cast<std::size_t>(u)].push_back(v);
    g.neighbors[static_cast<std::size_t>(v)].push_back(u);
  }
  g.validate();
  return g;
}

void InfectiousConfig::resolve_defaults() {
  if (graph.num_nodes() == 0) graph = make_two_community_graph();
}

void InfectiousConfig::validate() const {
  graph.validate();
  if (!(infection_rate > 0.0 && infection_rate <= 1.0)) {
    throw ConfigError("infection_rate", "must be in (0,1]");
  }
  if (!(recovery_prob >= 0.0 && recovery_prob <= 1.0)) {
    throw ConfigError("recovery_prob", "must be in [0,1]");
  }
  if (!(resusceptible_prob >= 0.0 && resusceptible_prob <= 1.0)) {
    throw ConfigError("resusceptible_prob", "must be in [0,1]");
  }
  if (episode_length < 1) throw ConfigError("episode_length", "must be >= 1");
}

InfectiousEnv::InfectiousEnv(InfectiousConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)), rng_(seed) {
  cfg_.resolve_defaults();
  cfg_.validate();
  reset();
}

std::vector<double> InfectiousEnv::reset() {
  const int n = cfg_.graph.num_nodes();
  health_.assign(static_cast<std::size_t>(n), Health::kSusceptible);
  health_[nn::bounded_uint(rng_, static_cast<std::uint64_t>(n))] = Health::kInfected;
  step_index_ = 0;
  return current_observation();
}

std::vector<double> InfectiousEnv::current_observation() const {
  const int n = cfg_.graph.num_nodes();
  std::vector<double> obs(static_cast<std::size_t>(3 * n), 0.0);
  for (int v = 0; v < n; ++v) {
    obs[static_cast<std::size_t>(3 * v + static_cast<int>(health_[static_cast<std::size_t>(v)]))] = 1.0;
  }
  return obs;
}

void InfectiousEnv::set_health(std::vector<Health> h) {
  if (static_cast<int>(h.size()) != cfg_.graph.num_nodes()) {
    throw ShapeError("set_health: size must match node count");
  }
  health_ = std::move(h);
}

StepResult InfectiousEnv::step(std::span<const int> action) {
  const int n = cfg_.graph.num_nodes();
  if (action.size() != 1 || action[0] < 0 || action[0] > n) {
    throw Error("infectious step: action must name a node or the no-op index");
  }
  const int vaccinated = action[0] < n ? action[0] : -1;

  StepResult out;
  out.signals.supply.assign(2, 0.0);
  out.signals.demand.assign(2, 0.0);

  const std::vector<Health> start = health_;
  if (vaccinated >= 0) {
    out.signals.supply[static_cast<std::size_t>(
        cfg_.graph.group[static_cast<std::size_t>(vaccinated)])] = 1.0;
    if (start[static_cast<std::size_t>(vaccinated)] == Health::kSusceptible) {
      health_[static_cast<std::size_t>(vaccinated)] = Health::kRecovered;
    }
    // Infected and recovered nodes keep their state when vaccinated.
  }

  for (int v = 0; v < n; ++v) {
    if (v == vaccinated) continue;  // no stochastic transition this step
    switch (start[static_cast<std::size_t>(v)]) {
      case Health::kSusceptible: {
        int infected_neighbors = 0;
        for (int u : cfg_.graph.neighbors[static_cast<std::size_t>(v)]) {
          if (start[static_cast<std::size_t>(u)] == Health::kInfected) ++infected_neighbors;
        }
        if (infected_neighbors > 0) {
          const double p =
              1.0 - std::pow(1.0 - cfg_.infection_rate, static_cast<double>(infected_neighbors));
          if (nn::bernoulli(rng_, p)) {
            health_[static_cast<std::size_t>(v)] = Health::kInfected;
            out.signals.demand[static_cast<std::size_t>(
                cfg_.graph.group[static_cast<std::size_t>(v)])] += 1.0;
          }
        }
        break;
      }
      case Health::kInfected:
        if (nn::bernoulli(rng_, cfg_.recovery_prob)) {
          health_[static_cast<std::size_t>(v)] = Health::kRecovered;
        }
        break;
      case Health::kRecovered:
        if (cfg_.resusceptible_prob > 0.0 && nn::bernoulli(rng_, cfg_.resusceptible_prob)) {
          health_[static_cast<std::size_t>(v)] = Health::kSusceptible;
        }
        break;
    }
  }

  int not_infected = 0;
  for (Health h : health_) {
    if (h != Health::kInfected) ++not_infected;
  }
  out.signals.reward = static_cast<double>(not_infected) / n;

  ++step_index_;
  out.done = step_index_ >= cfg_.episode_length;
  out.observation = current_observation();
  return out;
}

nlohmann::json InfectiousEnv::state_to_json() const {
  nlohmann::json j;
  std::vector<int> h;
  h.reserve(health_.size());
  for (Health v : health_) h.push_back(static_cast<int>(v));
  j["health"] = h;
  j["step_index"] = step_index_;
  j["rng"] = nn::rng_to_string(rng_);
  return j;
}

void InfectiousEnv::state_from_json(const nlohmann::json& j) {
  auto h = j.at("health").get<std::vector<int>>();
  health_.clear();
  for (int v : h) health_.push_back(static_cast<Health>(v));
  step_index_ = j.at("step_index").get<int>();
  rng_ = nn::rng_from_string(j.at("rng").get<std::string>());
}

}  // namespace elbert::env
