#include "elbert/nn/categorical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "elbert/errors.hpp"

namespace elbert::nn {

namespace {
void require_logits(std::span<const double> logits, const char* op) {
  if (logits.empty()) throw Error(std::string(op) + ": empty logits");
  for (double v : logits) {
    if (!std::isfinite(v)) throw NumericError(std::string(op) + ": non-finite logit");
  }
}
}  // namespace

std::vector<double> log_softmax_vec(std::span<const double> logits) {
  require_logits(logits, "log_softmax");
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double v : logits) sum += std::exp(v - mx);
  const double lse = mx + std::log(sum);
  std::vector<double> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lse;
  return out;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out = log_softmax_vec(logits);
  for (double& v : out) v = std::exp(v);
  return out;
}

double categorical_entropy(std::span<const double> logits) {
  std::vector<double> logp = log_softmax_vec(logits);
  double h = 0.0;
  for (double lp : logp) h -= std::exp(lp) * lp;
  return h;
}

int argmax_index(std::span<const double> values) {
  if (values.empty()) throw Error("argmax: empty input");
  return static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
}

CategoricalSample sample_categorical(std::span<const double> logits, Rng& rng) {
  std::vector<double> logp = log_softmax_vec(logits);
  const double u = uniform01(rng);
  double acc = 0.0;
  int action = static_cast<int>(logits.size()) - 1;
  for (std::size_t i = 0; i < logp.size(); ++i) {
    acc += std::exp(logp[i]);
    if (u < acc) {
      action = static_cast<int>(i);
      break;
    }
  }
  CategoricalSample s;
  s.action = action;
  s.log_prob = logp[static_cast<std::size_t>(action)];
  double h = 0.0;
  for (double lp : logp) h -= std::exp(lp) * lp;
  s.entropy = h;
  return s;
}

std::vector<int> sample_multinomial(std::span<const double> probs, int units, Rng& rng) {
  if (probs.empty()) throw Error("sample_multinomial: empty probabilities");
  if (units < 0) throw Error("sample_multinomial: negative unit count");
  std::vector<int> counts(probs.size(), 0);
  for (int u = 0; u < units; ++u) {
    counts[static_cast<std::size_t>(sample_from_probs(probs, rng))]++;
  }
  return counts;
}

std::vector<int> largest_remainder_allocation(std::span<const double> probs, int units) {
  if (probs.empty()) throw Error("largest_remainder_allocation: empty probabilities");
  if (units < 0) throw Error("largest_remainder_allocation: negative unit count");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw NumericError("largest_remainder_allocation: negative weight");
    total += p;
  }
  if (total <= 0.0) throw NumericError("largest_remainder_allocation: weights sum to zero");

  const std::size_t n = probs.size();
  std::vector<int> alloc(n, 0);
  std::vector<double> remainder(n, 0.0);
  int assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double target = units * probs[i] / total;
    alloc[i] = static_cast<int>(std::floor(target));
    remainder[i] = target - alloc[i];
    assigned += alloc[i];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < units; ++k) {
    alloc[order[k % n]] += 1;
    ++assigned;
  }
  return alloc;
}

}  // namespace elbert::nn
