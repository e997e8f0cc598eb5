#ifndef ELBERT_NN_CATEGORICAL_HPP_
#define ELBERT_NN_CATEGORICAL_HPP_

#include <span>
#include <vector>

#include "elbert/nn/rand.hpp"

namespace elbert::nn {

struct CategoricalSample {
  int action = 0;
  double log_prob = 0.0;
  double entropy = 0.0;
};

// Max-shifted softmax / log-softmax over a logit vector.
std::vector<double> softmax(std::span<const double> logits);
std::vector<double> log_softmax_vec(std::span<const double> logits);

// Shannon entropy of softmax(logits), in nats.
double categorical_entropy(std::span<const double> logits);

int argmax_index(std::span<const double> values);

// Draws an action from softmax(logits); log_prob is the log-softmax at the
// sampled index.
CategoricalSample sample_categorical(std::span<const double> logits, Rng& rng);

// Counts of `units` independent categorical draws from `probs`.
std::vector<int> sample_multinomial(std::span<const double> probs, int units, Rng& rng);

// Deterministic rounding of units * probs that preserves the total exactly:
// floor everything, then hand the leftover units to the largest remainders.
std::vector<int> largest_remainder_allocation(std::span<const double> probs, int units);

}  // namespace elbert::nn

#endif  // ELBERT_NN_CATEGORICAL_HPP_
