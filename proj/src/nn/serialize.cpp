#include "elbert/nn/serialize.hpp"

#include <bit>
#include <cstdint>
#include <sstream>

#include "elbert/errors.hpp"
#include "nlohmann/json.hpp"

namespace elbert::nn {

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw Error(std::string("invalid hex character '") + c + "'");
}
}  // namespace

std::string hex_encode(std::span<const double> values) {
  std::string out;
  out.reserve(values.size() * 16);
  for (double v : values) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int shift = 60; shift >= 0; shift -= 4) {
      out.push_back(kHexDigits[(bits >> shift) & 0xF]);
    }
  }
  return out;
}

std::vector<double> hex_decode(const std::string& hex) {
  if (hex.size() % 16 != 0) throw Error("hex string length must be a multiple of 16");
  std::vector<double> out;
  out.reserve(hex.size() / 16);
  for (std::size_t i = 0; i < hex.size(); i += 16) {
    std::uint64_t bits = 0;
    for (std::size_t k = 0; k < 16; ++k) {
      bits = (bits << 4) | static_cast<std::uint64_t>(hex_value(hex[i + k]));
    }
    out.push_back(std::bit_cast<double>(bits));
  }
  return out;
}

nlohmann::json tensor_to_json(const Tensor& t) {
  nlohmann::json j;
  j["shape"] = t.shape();
  j["hex"] = hex_encode(t.data());
  return j;
}

Tensor tensor_from_json(const nlohmann::json& j) {
  return Tensor(j.at("shape").get<std::vector<int>>(),
                hex_decode(j.at("hex").get<std::string>()));
}

std::string rng_to_string(const Rng& rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

Rng rng_from_string(const std::string& s) {
  Rng rng;
  std::istringstream is(s);
  is >> rng;
  if (is.fail()) throw Error("failed to parse rng state");
  return rng;
}

}  // namespace elbert::nn
