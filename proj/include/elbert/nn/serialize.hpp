#ifndef ELBERT_NN_SERIALIZE_HPP_
#define ELBERT_NN_SERIALIZE_HPP_

#include <span>
#include <string>
#include <vector>

#include "elbert/nn/rand.hpp"
#include "elbert/nn/tensor.hpp"
#include "nlohmann/json_fwd.hpp"

namespace elbert::nn {

// Bit-exact double <-> hex round trip (16 hex chars per value, fixed byte
// order). Checkpoints use this so reloads are exact, not shortest-decimal.
std::string hex_encode(std::span<const double> values);
std::vector<double> hex_decode(const std::string& hex);

nlohmann::json tensor_to_json(const Tensor& t);
Tensor tensor_from_json(const nlohmann::json& j);

std::string rng_to_string(const Rng& rng);
Rng rng_from_string(const std::string& s);

}  // namespace elbert::nn

#endif  // ELBERT_NN_SERIALIZE_HPP_
