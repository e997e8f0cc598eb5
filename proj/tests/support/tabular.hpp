#ifndef ELBERT_TESTS_SUPPORT_TABULAR_HPP_
#define ELBERT_TESTS_SUPPORT_TABULAR_HPP_

// Exactly enumerable finite-horizon supply-demand MDP with a softmax-tabular
// policy. Everything here is computed by dynamic programming with no
// sampling, so assembled policy gradients can be compared against central
// finite differences of the exactly evaluated objective.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "elbert/nn/rand.hpp"

namespace elbert_tests {

struct TabularSdMdp {
  int num_states = 2;
  int num_actions = 2;
  int horizon = 5;
  double gamma = 0.95;
  std::vector<double> initial;     // [S]
  std::vector<double> transition;  // [s][a][s'] flattened
  std::vector<double> reward;      // [s][a]
  std::array<std::vector<double>, 2> supply;  // per group, [s][a]
  std::array<std::vector<double>, 2> demand;

  double trans(int s, int a, int s2) const {
    return transition[static_cast<std::size_t>((s * num_actions + a) * num_states + s2)];
  }
};

inline TabularSdMdp random_tabular_mdp(elbert::nn::Rng& rng, int max_states = 6, int horizon = 5) {
  TabularSdMdp m;
  m.num_states = 2 + static_cast<int>(elbert::nn::bounded_uint(rng, static_cast<std::uint64_t>(max_states - 1)));
  m.num_actions = 2;
  m.horizon = horizon;
  m.gamma = 0.95;
  auto simplex = [&](int n, std::vector<double>& out) {
    out.resize(static_cast<std::size_t>(n));
    double total = 0.0;
    for (double& v : out) {
      v = elbert::nn::uniform01(rng) + 1e-3;
      total += v;
    }
    for (double& v : out) v /= total;
  };
  simplex(m.num_states, m.initial);
  m.transition.resize(static_cast<std::size_t>(m.num_states * m.num_actions * m.num_states));
  for (int s = 0; s < m.num_states; ++s)
    for (int a = 0; a < m.num_actions; ++a) {
      std::vector<double> row;
      simplex(m.num_states, row);
      for (int s2 = 0; s2 < m.num_states; ++s2) {
        m.transition[static_cast<std::size_t>((s * m.num_actions + a) * m.num_states + s2)] = row[static_cast<std::size_t>(s2)];
      }
    }
  const int sa = m.num_states * m.num_actions;
  m.reward.resize(static_cast<std::size_t>(sa));
  for (double& v : m.reward) v = elbert::nn::uniform01(rng);
  for (int g = 0; g < 2; ++g) {
    m.supply[static_cast<std::size_t>(g)].resize(static_cast<std::size_t>(sa));
    m.demand[static_cast<std::size_t>(g)].resize(static_cast<std::size_t>(sa));
    for (double& v : m.supply[static_cast<std::size_t>(g)]) v = elbert::nn::uniform01(rng);
    // Demand bounded away from zero keeps every benefit rate well defined.
    for (double& v : m.demand[static_cast<std::size_t>(g)]) v = 0.2 + elbert::nn::uniform01(rng);
  }
  return m;
}

// pi(a|s) = softmax over actions of theta[s][a].
inline std::vector<double> tabular_policy(const TabularSdMdp& m, const std::vector<double>& theta,
                                          int s) {
  std::vector<double> p(static_cast<std::size_t>(m.num_actions));
  double mx = theta[static_cast<std::size_t>(s * m.num_actions)];
  for (int a = 1; a < m.num_actions; ++a) {
    mx = std::max(mx, theta[static_cast<std::size_t>(s * m.num_actions + a)]);
  }
  double total = 0.0;
  for (int a = 0; a < m.num_actions; ++a) {
    p[static_cast<std::size_t>(a)] = std::exp(theta[static_cast<std::size_t>(s * m.num_actions + a)] - mx);
    total += p[static_cast<std::size_t>(a)];
  }
  for (double& v : p) v /= total;
  return p;
}

// Time-indexed V[t][s] and Q[t][s][a] for one scalar signal x(s,a).
struct SignalValues {
  std::vector<std::vector<double>> v;               // [t][s]
  std::vector<std::vector<std::vector<double>>> q;  // [t][s][a]
  double eta = 0.0;
};

inline SignalValues exact_signal_values(const TabularSdMdp& m, const std::vector<double>& theta,
                                        const std::vector<double>& x) {
  SignalValues out;
  out.v.assign(static_cast<std::size_t>(m.horizon) + 1,
               std::vector<double>(static_cast<std::size_t>(m.num_states), 0.0));
  out.q.assign(static_cast<std::size_t>(m.horizon),
               std::vector<std::vector<double>>(static_cast<std::size_t>(m.num_states),
                                                std::vector<double>(static_cast<std::size_t>(m.num_actions), 0.0)));
  for (int t = m.horizon - 1; t >= 0; --t) {
    for (int s = 0; s < m.num_states; ++s) {
      const std::vector<double> p = tabular_policy(m, theta, s);
      double v = 0.0;
      for (int a = 0; a < m.num_actions; ++a) {
        double next = 0.0;
        for (int s2 = 0; s2 < m.num_states; ++s2) {
          next += m.trans(s, a, s2) * out.v[static_cast<std::size_t>(t) + 1][static_cast<std::size_t>(s2)];
        }
        const double q = x[static_cast<std::size_t>(s * m.num_actions + a)] + m.gamma * next;
        out.q[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)][static_cast<std::size_t>(a)] = q;
        v += p[static_cast<std::size_t>(a)] * q;
      }
      out.v[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)] = v;
    }
  }
  for (int s = 0; s < m.num_states; ++s) {
    out.eta += m.initial[static_cast<std::size_t>(s)] * out.v[0][static_cast<std::size_t>(s)];
  }
  return out;
}

// State distribution P_t(s) under the policy.
inline std::vector<std::vector<double>> state_occupancy(const TabularSdMdp& m,
                                                        const std::vector<double>& theta) {
  std::vector<std::vector<double>> p(static_cast<std::size_t>(m.horizon),
                                     std::vector<double>(static_cast<std::size_t>(m.num_states), 0.0));
  p[0] = m.initial;
  for (int t = 0; t + 1 < m.horizon; ++t) {
    for (int s = 0; s < m.num_states; ++s) {
      const std::vector<double> pi = tabular_policy(m, theta, s);
      for (int a = 0; a < m.num_actions; ++a) {
        const double w = p[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)] * pi[static_cast<std::size_t>(a)];
        if (w == 0.0) continue;
        for (int s2 = 0; s2 < m.num_states; ++s2) {
          p[static_cast<std::size_t>(t) + 1][static_cast<std::size_t>(s2)] += w * m.trans(s, a, s2);
        }
      }
    }
  }
  return p;
}

struct TabularEtas {
  double eta_r = 0.0;
  std::array<double, 2> eta_s{};
  std::array<double, 2> eta_d{};
};

inline TabularEtas exact_etas(const TabularSdMdp& m, const std::vector<double>& theta) {
  TabularEtas e;
  e.eta_r = exact_signal_values(m, theta, m.reward).eta;
  for (int g = 0; g < 2; ++g) {
    e.eta_s[static_cast<std::size_t>(g)] = exact_signal_values(m, theta, m.supply[static_cast<std::size_t>(g)]).eta;
    e.eta_d[static_cast<std::size_t>(g)] = exact_signal_values(m, theta, m.demand[static_cast<std::size_t>(g)]).eta;
  }
  return e;
}

// J = eta_r - alpha (z1 - z2)^2 + zeta_reg * eta_d[reg_group]
inline double tabular_objective(const TabularSdMdp& m, const std::vector<double>& theta,
                                double alpha, double zeta_reg = 0.0, int reg_group = 0) {
  const TabularEtas e = exact_etas(m, theta);
  const double z1 = e.eta_s[0] / e.eta_d[0];
  const double z2 = e.eta_s[1] / e.eta_d[1];
  return e.eta_r - alpha * (z1 - z2) * (z1 - z2) + zeta_reg * e.eta_d[static_cast<std::size_t>(reg_group)];
}

// Exact policy gradient assembled through the fairness-aware advantage:
// grad[s,b] = sum_t gamma^t P_t(s) sum_a pi(a|s) (1{a=b} - pi(b|s)) Afair(s,a,t).
inline std::vector<double> tabular_gradient_via_fair_advantage(const TabularSdMdp& m,
                                                               const std::vector<double>& theta,
                                                               double alpha, double zeta_reg = 0.0,
                                                               int reg_group = 0) {
  const SignalValues vr = exact_signal_values(m, theta, m.reward);
  std::array<SignalValues, 2> vs, vd;
  for (int g = 0; g < 2; ++g) {
    vs[static_cast<std::size_t>(g)] = exact_signal_values(m, theta, m.supply[static_cast<std::size_t>(g)]);
    vd[static_cast<std::size_t>(g)] = exact_signal_values(m, theta, m.demand[static_cast<std::size_t>(g)]);
  }
  const double z1 = vs[0].eta / vd[0].eta;
  const double z2 = vs[1].eta / vd[1].eta;
  const std::array<double, 2> dh{2.0 * (z1 - z2), -2.0 * (z1 - z2)};

  const auto occupancy = state_occupancy(m, theta);
  std::vector<double> grad(static_cast<std::size_t>(m.num_states * m.num_actions), 0.0);
  double gamma_t = 1.0;
  for (int t = 0; t < m.horizon; ++t) {
    for (int s = 0; s < m.num_states; ++s) {
      const double ps = occupancy[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)];
      if (ps == 0.0) continue;
      const std::vector<double> pi = tabular_policy(m, theta, s);
      for (int a = 0; a < m.num_actions; ++a) {
        double afair = vr.q[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)][static_cast<std::size_t>(a)] -
                       vr.v[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)];
        for (int g = 0; g < 2; ++g) {
          const double as = vs[static_cast<std::size_t>(g)].q[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)][static_cast<std::size_t>(a)] -
                            vs[static_cast<std::size_t>(g)].v[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)];
          const double ad = vd[static_cast<std::size_t>(g)].q[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)][static_cast<std::size_t>(a)] -
                            vd[static_cast<std::size_t>(g)].v[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)];
          const double eta_d = vd[static_cast<std::size_t>(g)].eta;
          const double eta_s = vs[static_cast<std::size_t>(g)].eta;
          afair -= alpha * dh[static_cast<std::size_t>(g)] * (as / eta_d - eta_s * ad / (eta_d * eta_d));
          if (zeta_reg != 0.0 && g == reg_group) afair += zeta_reg * ad;
        }
        const double w = gamma_t * ps * pi[static_cast<std::size_t>(a)];
        for (int b = 0; b < m.num_actions; ++b) {
          const double indicator = a == b ? 1.0 : 0.0;
          grad[static_cast<std::size_t>(s * m.num_actions + b)] +=
              w * (indicator - pi[static_cast<std::size_t>(b)]) * afair;
        }
      }
    }
    gamma_t *= m.gamma;
  }
  return grad;
}

inline std::vector<double> tabular_gradient_fd(const TabularSdMdp& m, std::vector<double> theta,
                                               double alpha, double zeta_reg = 0.0,
                                               int reg_group = 0, double h = 1e-5) {
  std::vector<double> grad(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double saved = theta[i];
    theta[i] = saved + h;
    const double fp = tabular_objective(m, theta, alpha, zeta_reg, reg_group);
    theta[i] = saved - h;
    const double fm = tabular_objective(m, theta, alpha, zeta_reg, reg_group);
    theta[i] = saved;
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

}  // namespace elbert_tests

#endif  // ELBERT_TESTS_SUPPORT_TABULAR_HPP_
