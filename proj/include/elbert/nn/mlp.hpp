#ifndef ELBERT_NN_MLP_HPP_
#define ELBERT_NN_MLP_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "elbert/nn/graph.hpp"
#include "elbert/nn/rand.hpp"
#include "elbert/nn/tensor.hpp"
#include "nlohmann/json_fwd.hpp"

namespace elbert::nn {

enum class Activation { kTanh, kRelu, kIdentity };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

struct MlpSpec {
  int input_dim = 1;
  std::vector<int> hidden_dims = {64, 64};
  int output_dim = 1;
  Activation activation = Activation::kTanh;

  void validate() const;  // throws ConfigError
};

// Fully-connected network with a linear output layer. Parameters are stored
// as alternating weight/bias tensors per layer.
class Mlp {
 public:
  Mlp() = default;
  // Scaled-uniform init (Glorot limits), biases zero. final_layer_scale
  // shrinks the output layer; policy heads use 0.01 to start near-uniform.
  Mlp(MlpSpec spec, std::uint64_t init_seed, double final_layer_scale = 1.0);

  const MlpSpec& spec() const { return spec_; }
  int num_layers() const { return static_cast<int>(spec_.hidden_dims.size()) + 1; }

  std::vector<Tensor>& params() { return params_; }
  const std::vector<Tensor>& params() const { return params_; }

  // Records the forward pass on the tape. input shape [batch, input_dim].
  // param_nodes (if given) receives one ValueRef per parameter tensor, in
  // params() order, for gradient retrieval after backward().
  ValueRef forward(Graph& g, ValueRef input, std::vector<ValueRef>* param_nodes = nullptr) const;

  // Plain arithmetic forward with no tape; returns [batch * output_dim].
  std::vector<double> forward_nograd(std::span<const double> input, int batch) const;

  nlohmann::json to_json() const;
  static Mlp from_json(const nlohmann::json& j);

 private:
  MlpSpec spec_;
  std::vector<Tensor> params_;  // W0, b0, W1, b1, ...
};

}  // namespace elbert::nn

#endif  // ELBERT_NN_MLP_HPP_
