#ifndef ELBERT_ENV_INFECTIOUS_HPP_
#define ELBERT_ENV_INFECTIOUS_HPP_

#include <iosfwd>
#include <vector>

#include "elbert/env/env.hpp"

namespace elbert::env {

enum class Health : int { kSusceptible = 0, kInfected = 1, kRecovered = 2 };

struct InfectiousGraph {
  std::vector<int> group;                   // group label per node, 0 or 1
  std::vector<std::vector<int>> neighbors;  // adjacency lists

  int num_nodes() const { return static_cast<int>(group.size()); }
  void validate() const;
};

// Two-community random graph: dense within a community, sparse across.
InfectiousGraph make_two_community_graph(int nodes_per_group = 25, double intra_prob = 0.3,
                                         double inter_prob = 0.05,
                                         std::uint64_t graph_seed = 1234);

// Edge-list format: first line "groups g0 g1 ... g_{n-1}" (labels 0/1 or 1/2),
// then one "u v" edge per line (0-based node indices).
InfectiousGraph load_graph(std::istream& in);

// Vaccination on a social network. One node (or nobody) is vaccinated each
// step; a vaccinated susceptible node moves straight to recovered and the
// vaccinated node skips every stochastic transition that step. Susceptible
// nodes are infected with probability 1-(1-tau)^k for k infected neighbors at
// the start of the step; infected nodes recover with probability rho; in the
// harder variant recovered nodes become susceptible again with probability
// resusceptible_prob. Supply counts vaccinations per group, demand counts new
// infections per group.
struct InfectiousConfig {
  InfectiousGraph graph;  // empty -> make_two_community_graph defaults
  double infection_rate = 0.1;      // tau
  double recovery_prob = 0.005;     // rho
  double resusceptible_prob = 0.0;  // 0.2 in the harder variant
  int episode_length = 20;

  void validate() const;
  void resolve_defaults();
};

class InfectiousEnv : public Environment {
 public:
  InfectiousEnv(InfectiousConfig cfg, std::uint64_t seed);

  int observation_dim() const override { return 3 * cfg_.graph.num_nodes(); }
  ActionKind action_kind() const override { return ActionKind::kCategorical; }
  // One action per node plus the no-op.
  int action_dim() const override { return cfg_.graph.num_nodes() + 1; }
  int num_groups() const override { return 2; }
  int episode_length() const override { return cfg_.episode_length; }

  std::vector<double> reset() override;
  std::vector<double> current_observation() const override;
  StepResult step(std::span<const int> action) override;

  nlohmann::json state_to_json() const override;
  void state_from_json(const nlohmann::json& j) override;

  const InfectiousConfig& config() const { return cfg_; }
  const std::vector<Health>& health() const { return health_; }
  void set_health(std::vector<Health> h);  // test/experimentation hook

 private:
  InfectiousConfig cfg_;
  nn::Rng rng_;
  std::vector<Health> health_;
  int step_index_ = 0;
};

}  // namespace elbert::env

#endif  // ELBERT_ENV_INFECTIOUS_HPP_
