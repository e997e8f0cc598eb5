#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "elbert/errors.hpp"
#include "elbert/nn/rand.hpp"
#include "elbert/sd/bias.hpp"
#include "elbert/sd/signals.hpp"
#include "nlohmann/json.hpp"

using namespace elbert;
using sd::BenefitRates;
using sd::BiasMode;
using sd::BiasSpec;
using sd::CumulativeSignals;
using sd::SupplyDemandSignals;
using sd::Trajectory;
using sd::TrajectoryStep;

namespace {

Trajectory make_episode(const std::vector<double>& rewards,
                        const std::vector<std::vector<double>>& supplies,
                        const std::vector<std::vector<double>>& demands, bool terminate = true) {
  Trajectory t;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    TrajectoryStep s;
    s.observation = {0.0};
    s.action = {0};
    SupplyDemandSignals sig;
    sig.reward = rewards[i];
    sig.supply = supplies[i];
    sig.demand = demands[i];
    s.signals = {sig};
    s.done = terminate && i + 1 == rewards.size();
    t.steps.push_back(std::move(s));
  }
  t.final_observation = {0.0};
  return t;
}

// Independent extended-precision evaluation of the smooth bias formula,
// written directly from its closed form (no max shift).
long double soft_bias_ld(const std::vector<double>& rates, long double beta) {
  long double pos = 0.0L, neg = 0.0L;
  for (double z : rates) {
    pos += expl(beta * static_cast<long double>(z));
    neg += expl(-beta * static_cast<long double>(z));
  }
  return (logl(pos) + logl(neg)) / beta;
}

}  // namespace

TEST_CASE("discounted_cumulate: single episode undiscounted sums") {
  auto t = make_episode({1, 2, 3}, {{0}, {0}, {0}}, {{0}, {0}, {0}});
  std::vector<Trajectory> batch{t};
  auto c = sd::discounted_cumulate(batch, 1.0);
  REQUIRE(c.size() == 1);
  CHECK(c[0].eta_r == 6.0);
}

TEST_CASE("discounted_cumulate: gamma 0.5 on constant supply") {
  auto t = make_episode({0, 0, 0}, {{1}, {1}, {1}}, {{0}, {0}, {0}});
  std::vector<Trajectory> batch{t};
  auto c = sd::discounted_cumulate(batch, 0.5);
  CHECK(c[0].eta_s[0] == 1.75);
}

TEST_CASE("discounted_cumulate: mean over episodes") {
  auto a = make_episode({1}, {{0}}, {{0}});
  auto b = make_episode({3}, {{0}}, {{0}});
  std::vector<Trajectory> batch{a, b};
  auto c = sd::discounted_cumulate(batch, 1.0);
  CHECK(c[0].eta_r == 2.0);
}

TEST_CASE("discounted_cumulate: two episodes inside one trajectory, trailing partial excluded") {
  Trajectory t = make_episode({1, 1}, {{1}, {1}}, {{1}, {1}});
  Trajectory more = make_episode({5, 7, 100}, {{0}, {0}, {9}}, {{0}, {0}, {9}}, false);
  more.steps[1].done = true;  // episodes: [5,7] complete, [100] partial
  std::vector<Trajectory> batch{t, more};
  auto c = sd::discounted_cumulate(batch, 1.0);
  CHECK(c[0].eta_r == doctest::Approx((2.0 + 12.0) / 2.0));
  CHECK(c[0].eta_s[0] == doctest::Approx(1.0));  // (2 + 0) / 2
}

TEST_CASE("discounted_cumulate: empty batch and bad gamma rejected") {
  std::vector<Trajectory> empty;
  CHECK_THROWS_AS(sd::discounted_cumulate(empty, 1.0), Error);
  auto t = make_episode({1}, {{0}}, {{0}});
  std::vector<Trajectory> batch{t};
  CHECK_THROWS_AS(sd::discounted_cumulate(batch, 0.0), Error);
  CHECK_THROWS_AS(sd::discounted_cumulate(batch, 1.5), Error);
}

TEST_CASE("discounted_cumulate is linear in the signals") {
  nn::Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int len = 2 + static_cast<int>(nn::bounded_uint(rng, 6));
    std::vector<double> rewards(static_cast<std::size_t>(len));
    std::vector<std::vector<double>> sup(static_cast<std::size_t>(len)), dem(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) {
      rewards[static_cast<std::size_t>(i)] = nn::uniform01(rng);
      sup[static_cast<std::size_t>(i)] = {nn::uniform01(rng), nn::uniform01(rng)};
      dem[static_cast<std::size_t>(i)] = {nn::uniform01(rng), nn::uniform01(rng)};
    }
    const double a = 0.5 + 2.0 * nn::uniform01(rng);
    auto scaled_r = rewards;
    auto scaled_s = sup;
    auto scaled_d = dem;
    for (auto& v : scaled_r) v *= a;
    for (auto& row : scaled_s)
      for (auto& v : row) v *= a;
    for (auto& row : scaled_d)
      for (auto& v : row) v *= a;

    std::vector<Trajectory> b1{make_episode(rewards, sup, dem)};
    std::vector<Trajectory> b2{make_episode(scaled_r, scaled_s, scaled_d)};
    auto c1 = sd::discounted_cumulate(b1, 0.9);
    auto c2 = sd::discounted_cumulate(b2, 0.9);
    CHECK(c2[0].eta_r == doctest::Approx(a * c1[0].eta_r).epsilon(1e-12));
    for (int g = 0; g < 2; ++g) {
      CHECK(c2[0].eta_s[static_cast<std::size_t>(g)] ==
            doctest::Approx(a * c1[0].eta_s[static_cast<std::size_t>(g)]).epsilon(1e-12));
      CHECK(c2[0].eta_d[static_cast<std::size_t>(g)] ==
            doctest::Approx(a * c1[0].eta_d[static_cast<std::size_t>(g)]).epsilon(1e-12));
    }
  }
}

TEST_CASE("benefit rates: skewed lending totals give bias 99/101") {
  CumulativeSignals c;
  c.eta_s = {100.0, 1.0};
  c.eta_d = {101.0, 101.0};
  auto r = sd::benefit_rates_and_bias(c);
  CHECK(r.rates[0] == doctest::Approx(100.0 / 101.0).epsilon(1e-15));
  CHECK(r.rates[1] == doctest::Approx(1.0 / 101.0).epsilon(1e-15));
  CHECK(r.bias == doctest::Approx(99.0 / 101.0).epsilon(1e-15));
}

TEST_CASE("benefit rates: equal rates give zero bias; spread is max minus min") {
  CumulativeSignals eq;
  eq.eta_s = {2.0, 4.0, 6.0};
  eq.eta_d = {4.0, 8.0, 12.0};
  CHECK(sd::benefit_rates_and_bias(eq).bias == 0.0);

  CumulativeSignals c;
  c.eta_s = {0.2, 0.5, 0.9};
  c.eta_d = {1.0, 1.0, 1.0};
  CHECK(sd::benefit_rates_and_bias(c).bias == doctest::Approx(0.7));
}

TEST_CASE("benefit rates: zero demand raises DegenerateDemand naming the group") {
  CumulativeSignals c;
  c.eta_s = {1.0, 1.0};
  c.eta_d = {1.0, 0.0};
  try {
    sd::benefit_rates_and_bias(c);
    FAIL("expected DegenerateDemandError");
  } catch (const DegenerateDemandError& e) {
    CHECK(e.group() == 1);
  }
}

TEST_CASE("soft bias: equal rates collapse to 2 ln(M) / beta") {
  for (int m : {2, 3, 5, 8}) {
    std::vector<double> rates(static_cast<std::size_t>(m), 0.37);
    for (double beta : {1.0, 10.0, 100.0}) {
      CHECK(sd::soft_bias(rates, beta) ==
            doctest::Approx(2.0 * std::log(static_cast<double>(m)) / beta).epsilon(1e-12));
    }
  }
}

TEST_CASE("soft bias: single group is exactly zero") {
  std::vector<double> rates{0.8};
  CHECK(sd::soft_bias(rates, 10.0) == doctest::Approx(0.0));
}

TEST_CASE("soft bias: matches extended-precision closed form and the spread bound") {
  std::vector<double> rates{0.1, 0.2, 0.3};
  const double beta = 10.0;
  const double got = sd::soft_bias(rates, beta);
  const double expect = static_cast<double>(soft_bias_ld(rates, 10.0L));
  CHECK(got == doctest::Approx(expect).epsilon(1e-14));
  CHECK(got >= 0.2);
  CHECK(got <= 0.2 + 2.0 * std::log(3.0) / beta);
}

TEST_CASE("soft bias: bound holds over random draws (bias <= soft <= bias + 2lnM/beta)") {
  nn::Rng rng(123);
  for (int trial = 0; trial < 10000; ++trial) {
    const int m = 2 + static_cast<int>(nn::bounded_uint(rng, 7));
    std::vector<double> rates(static_cast<std::size_t>(m));
    for (double& z : rates) z = nn::uniform01(rng);
    const double beta_choices[] = {1.0, 10.0, 20.0, 100.0};
    const double beta = beta_choices[nn::bounded_uint(rng, 4)];
    double mx = rates[0], mn = rates[0];
    for (double z : rates) {
      mx = std::max(mx, z);
      mn = std::min(mn, z);
    }
    const double hard = mx - mn;
    const double soft = sd::soft_bias(rates, beta);
    CHECK(soft >= hard - 1e-12);
    CHECK(soft <= hard + 2.0 * std::log(static_cast<double>(m)) / beta + 1e-12);
  }
}

TEST_CASE("soft bias: non-increasing in beta and converging to the spread") {
  nn::Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> rates(2 + nn::bounded_uint(rng, 5));
    for (double& z : rates) z = nn::uniform01(rng);
    double prev = sd::soft_bias(rates, 0.5);
    for (double beta : {1.0, 2.0, 5.0, 10.0, 50.0, 200.0}) {
      const double cur = sd::soft_bias(rates, beta);
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
  }
  // two groups, large beta: within 2 ln 2 / beta of |z1 - z2|
  std::vector<double> two{0.83, 0.21};
  const double beta = 500.0;
  CHECK(std::abs(sd::soft_bias(two, beta) - std::abs(two[0] - two[1])) <=
        2.0 * std::log(2.0) / beta + 1e-12);
}

TEST_CASE("soft bias: non-finite rates rejected") {
  std::vector<double> rates{0.1, std::nan("")};
  CHECK_THROWS_AS(sd::soft_bias(rates, 10.0), NumericError);
}

TEST_CASE("bias_grad_h hard mode: (2(z1-z2), -2(z1-z2))") {
  BiasSpec spec;
  spec.mode = BiasMode::kHardTwoGroup;
  spec.num_groups = 2;
  std::vector<double> rates{0.9, 0.1};
  auto g = sd::bias_grad_h(rates, spec);
  CHECK(g[0] == doctest::Approx(1.6).epsilon(1e-15));
  CHECK(g[1] == doctest::Approx(-1.6).epsilon(1e-15));
}

TEST_CASE("bias_grad_h soft mode: zero at equal rates") {
  BiasSpec spec;
  spec.mode = BiasMode::kSoftMultiGroup;
  spec.num_groups = 4;
  spec.beta_temp = 20.0;
  std::vector<double> rates(4, 0.6);
  for (double v : sd::bias_grad_h(rates, spec)) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("bias_grad_h: arity mismatch rejected") {
  BiasSpec spec;
  spec.mode = BiasMode::kHardTwoGroup;
  spec.num_groups = 2;
  std::vector<double> rates{0.1, 0.2, 0.3};
  CHECK_THROWS_AS(sd::bias_grad_h(rates, spec), ShapeError);
  BiasSpec bad;
  bad.mode = BiasMode::kHardTwoGroup;
  bad.num_groups = 3;
  CHECK_THROWS_AS(sd::bias_grad_h(rates, bad), ConfigError);
}

TEST_CASE("bias_grad_h matches finite differences of its generating scalar") {
  nn::Rng rng(55);
  auto h_of = [](const std::vector<double>& z, const BiasSpec& spec) -> long double {
    if (spec.mode == BiasMode::kHardTwoGroup) {
      const long double d = static_cast<long double>(z[0]) - z[1];
      return d * d;
    }
    const long double sb = soft_bias_ld(z, static_cast<long double>(spec.beta_temp));
    return sb * sb;
  };
  for (int trial = 0; trial < 40; ++trial) {
    BiasSpec spec;
    if (trial % 2 == 0) {
      spec.mode = BiasMode::kHardTwoGroup;
      spec.num_groups = 2;
    } else {
      spec.mode = BiasMode::kSoftMultiGroup;
      spec.num_groups = 2 + static_cast<int>(nn::bounded_uint(rng, 5));
      spec.beta_temp = std::vector<double>{1.0, 10.0, 20.0}[nn::bounded_uint(rng, 3)];
    }
    std::vector<double> rates(static_cast<std::size_t>(spec.num_groups));
    for (double& z : rates) z = nn::uniform01(rng);
    auto grads = sd::bias_grad_h(rates, spec);
    const double h = 1e-6;
    for (std::size_t g = 0; g < rates.size(); ++g) {
      std::vector<double> zp = rates, zm = rates;
      zp[g] += h;
      zm[g] -= h;
      const double fd = static_cast<double>((h_of(zp, spec) - h_of(zm, spec)) / (2.0L * h));
      if (std::abs(grads[g]) < 1e-8 && std::abs(fd) < 1e-8) {
        CHECK(std::abs(grads[g] - fd) < 1e-8);
      } else {
        CHECK(std::abs(grads[g] - fd) / std::max(std::abs(grads[g]), std::abs(fd)) < 1e-6);
      }
    }
  }
}

TEST_CASE("bias_grad_h soft mode at spec example rates") {
  BiasSpec spec;
  spec.mode = BiasMode::kSoftMultiGroup;
  spec.num_groups = 3;
  spec.beta_temp = 20.0;
  std::vector<double> rates{0.1, 0.5, 0.9};
  auto grads = sd::bias_grad_h(rates, spec);
  const double h = 1e-6;
  for (std::size_t g = 0; g < rates.size(); ++g) {
    std::vector<double> zp = rates, zm = rates;
    zp[g] += h;
    zm[g] -= h;
    const long double bp = soft_bias_ld(zp, 20.0L), bm = soft_bias_ld(zm, 20.0L);
    const double fd = static_cast<double>((bp * bp - bm * bm) / (2.0L * h));
    if (std::abs(grads[g]) < 1e-8 && std::abs(fd) < 1e-8) {
      CHECK(std::abs(grads[g] - fd) < 1e-8);
    } else {
      CHECK(std::abs(grads[g] - fd) / std::max(std::abs(grads[g]), std::abs(fd)) < 1e-6);
    }
  }
}

TEST_CASE("multi_pair_bias: single pair matches benefit_rates_and_bias") {
  CumulativeSignals c;
  c.eta_s = {3.0, 1.0};
  c.eta_d = {4.0, 2.0};
  std::vector<CumulativeSignals> pairs{c};
  auto multi = sd::multi_pair_bias(pairs);
  auto single = sd::benefit_rates_and_bias(c);
  REQUIRE(multi.size() == 1);
  CHECK(multi[0].rates == single.rates);
  CHECK(multi[0].bias == single.bias);
}

TEST_CASE("multi_pair_bias: squared-penalty sum over pairs") {
  // TPR pair with bias 0.1, FPR pair with bias 0.2: alpha (b1^2 + b2^2) = 0.05.
  CumulativeSignals tpr, fpr;
  tpr.eta_s = {0.5, 0.4};
  tpr.eta_d = {1.0, 1.0};
  fpr.eta_s = {0.6, 0.4};
  fpr.eta_d = {1.0, 1.0};
  std::vector<CumulativeSignals> pairs{tpr, fpr};
  auto out = sd::multi_pair_bias(pairs);
  const double alpha = 1.0;
  double penalty = 0.0;
  for (const auto& p : out) penalty += alpha * p.bias * p.bias;
  CHECK(penalty == doctest::Approx(0.05).epsilon(1e-12));

  CumulativeSignals zero;
  zero.eta_s = {0.5, 0.5};
  zero.eta_d = {1.0, 1.0};
  std::vector<CumulativeSignals> zpairs{zero, zero};
  double zp = 0.0;
  for (const auto& p : sd::multi_pair_bias(zpairs)) zp += p.bias * p.bias;
  CHECK(zp == 0.0);
}

TEST_CASE("discounted_cumulate: two supply-demand pairs tracked independently") {
  Trajectory t;
  for (int i = 0; i < 2; ++i) {
    TrajectoryStep s;
    s.observation = {0.0};
    s.action = {0};
    SupplyDemandSignals tpr, fpr;
    tpr.reward = 1.0;
    tpr.pair_id = 0;
    tpr.supply = {1.0, 0.0};
    tpr.demand = {1.0, 1.0};
    fpr.reward = 1.0;
    fpr.pair_id = 1;
    fpr.supply = {0.0, 2.0};
    fpr.demand = {2.0, 2.0};
    s.signals = {tpr, fpr};
    s.done = i == 1;
    t.steps.push_back(std::move(s));
  }
  t.final_observation = {0.0};
  std::vector<Trajectory> batch{t};
  auto c = sd::discounted_cumulate(batch, 1.0);
  REQUIRE(c.size() == 2);
  CHECK(c[0].eta_s == std::vector<double>{2.0, 0.0});
  CHECK(c[0].eta_d == std::vector<double>{2.0, 2.0});
  CHECK(c[1].eta_s == std::vector<double>{0.0, 4.0});
  CHECK(c[1].eta_d == std::vector<double>{4.0, 4.0});
  CHECK(c[0].eta_r == c[1].eta_r);
  auto pairs = sd::multi_pair_bias(c);
  CHECK(pairs[0].bias == doctest::Approx(1.0));
  CHECK(pairs[1].bias == doctest::Approx(1.0));
}

TEST_CASE("cumulative signals serialize with fixed field names") {
  CumulativeSignals c;
  c.eta_r = 1.5;
  c.eta_s = {1.0, 2.0};
  c.eta_d = {3.0, 4.0};
  c.gamma = 0.99;
  nlohmann::json j = c;
  CHECK(j.contains("eta_r"));
  CHECK(j.contains("eta_s"));
  CHECK(j.contains("eta_d"));
  CHECK(j.contains("gamma"));
  auto back = j.get<CumulativeSignals>();
  CHECK(back.eta_r == c.eta_r);
  CHECK(back.eta_s == c.eta_s);
  CHECK(back.eta_d == c.eta_d);
  CHECK(back.gamma == c.gamma);
}
