#include "elbert/nn/rand.hpp"

#include <cmath>

#include "elbert/errors.hpp"

namespace elbert::nn {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t bounded_uint(Rng& rng, std::uint64_t n) {
  if (n == 0) throw Error("bounded_uint: n must be positive");
  std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

int sample_from_probs(std::span<const double> probs, Rng& rng) {
  if (probs.empty()) throw Error("sample_from_probs: empty weights");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw NumericError("sample_from_probs: negative or NaN weight");
    total += p;
  }
  if (total <= 0.0) throw NumericError("sample_from_probs: weights sum to zero");
  double u = uniform01(rng) * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;  // rounding edge
}

long long sample_poisson(Rng& rng, double mean) {
  if (!(mean >= 0.0)) throw NumericError("sample_poisson: mean must be non-negative");
  long long count = 0;
  // Poisson additivity: split large means into chunks so exp() stays in range.
  double remaining = mean;
  const double kChunk = 500.0;
  while (remaining > 0.0) {
    double mu = remaining > kChunk ? kChunk : remaining;
    remaining -= mu;
    double limit = std::exp(-mu);
    double prod = uniform01(rng);
    while (prod > limit) {
      ++count;
      prod *= uniform01(rng);
    }
  }
  return count;
}

}  // namespace elbert::nn
