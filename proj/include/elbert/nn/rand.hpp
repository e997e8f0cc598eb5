#ifndef ELBERT_NN_RAND_HPP_
#define ELBERT_NN_RAND_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace elbert::nn {

using Rng = std::mt19937_64;

// Derives an independent stream seed from a base seed (splitmix64 mixing).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// Uniform double in [0, 1) with 53 random bits. Hand-rolled so that the
// stream is identical on every platform for a given engine state.
double uniform01(Rng& rng);

// Uniform integer in [0, n) via rejection sampling (exact, portable).
std::uint64_t bounded_uint(Rng& rng, std::uint64_t n);

bool bernoulli(Rng& rng, double p);

// Samples an index from an unnormalized non-negative weight vector.
int sample_from_probs(std::span<const double> probs, Rng& rng);

// Poisson sample via chunked Knuth multiplication (exact for any mean).
long long sample_poisson(Rng& rng, double mean);

// In-place Fisher-Yates shuffle driven by bounded_uint.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(bounded_uint(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace elbert::nn

#endif  // ELBERT_NN_RAND_HPP_
