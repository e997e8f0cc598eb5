#include "elbert/nn/mlp.hpp"

#include <cmath>

#include "elbert/errors.hpp"
#include "elbert/nn/serialize.hpp"
#include "nlohmann/json.hpp"

namespace elbert::nn {

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::kTanh: return "tanh";
    case Activation::kRelu: return "relu";
    case Activation::kIdentity: return "identity";
  }
  return "tanh";
}

Activation activation_from_name(const std::string& name) {
  if (name == "tanh") return Activation::kTanh;
  if (name == "relu") return Activation::kRelu;
  if (name == "identity") return Activation::kIdentity;
  throw ConfigError("activation", "unknown activation '" + name + "'");
}

void MlpSpec::validate() const {
  if (input_dim < 1) throw ConfigError("input_dim", "must be >= 1");
  if (output_dim < 1) throw ConfigError("output_dim", "must be >= 1");
  if (hidden_dims.empty()) throw ConfigError("hidden_dims", "at least one hidden layer required");
  for (int d : hidden_dims) {
    if (d < 1) throw ConfigError("hidden_dims", "all hidden widths must be >= 1");
  }
}

Mlp::Mlp(MlpSpec spec, std::uint64_t init_seed, double final_layer_scale)
    : spec_(std::move(spec)) {
  spec_.validate();
  Rng rng(init_seed);
  std::vector<int> dims;
  dims.push_back(spec_.input_dim);
  for (int h : spec_.hidden_dims) dims.push_back(h);
  dims.push_back(spec_.output_dim);
  const int layers = static_cast<int>(dims.size()) - 1;
  for (int l = 0; l < layers; ++l) {
    const int fan_in = dims[static_cast<std::size_t>(l)];
    const int fan_out = dims[static_cast<std::size_t>(l) + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    const double scale = (l == layers - 1) ? final_layer_scale : 1.0;
    Tensor w({fan_in, fan_out});
    for (int i = 0; i < w.numel(); ++i) {
      w[i] = scale * limit * (2.0 * uniform01(rng) - 1.0);
    }
    params_.push_back(std::move(w));
    params_.push_back(Tensor({fan_out}));
  }
}

ValueRef Mlp::forward(Graph& g, ValueRef input, std::vector<ValueRef>* param_nodes) const {
  const Tensor& in = g.value(input);
  if (in.rank() != 2 || in.dim(1) != spec_.input_dim) {
    throw ShapeError("mlp forward: expected input [batch," + std::to_string(spec_.input_dim) +
                     "], got " + in.shape_str());
  }
  if (param_nodes) param_nodes->clear();
  ValueRef x = input;
  const int layers = num_layers();
  for (int l = 0; l < layers; ++l) {
    const Tensor& w = params_[static_cast<std::size_t>(2 * l)];
    const Tensor& b = params_[static_cast<std::size_t>(2 * l) + 1];
    if (g.value(x).dim(1) != w.dim(0)) {
      throw ShapeError("mlp forward: layer " + std::to_string(l) + " expects width " +
                       std::to_string(w.dim(0)) + ", got " + g.value(x).shape_str());
    }
    ValueRef wn = g.param(w);
    ValueRef bn = g.param(b);
    if (param_nodes) {
      param_nodes->push_back(wn);
      param_nodes->push_back(bn);
    }
    x = g.add_row(g.matmul(x, wn), bn);
    if (l < layers - 1) {
      switch (spec_.activation) {
        case Activation::kTanh: x = g.tanh(x); break;
        case Activation::kRelu: x = g.relu(x); break;
        case Activation::kIdentity: break;
      }
    }
  }
  return x;
}

std::vector<double> Mlp::forward_nograd(std::span<const double> input, int batch) const {
  if (batch < 0 || static_cast<int>(input.size()) != batch * spec_.input_dim) {
    throw ShapeError("mlp forward_nograd: input size " + std::to_string(input.size()) +
                     " does not match batch " + std::to_string(batch) + " x input_dim " +
                     std::to_string(spec_.input_dim));
  }
  std::vector<double> cur(input.begin(), input.end());
  std::vector<double> next;
  int width = spec_.input_dim;
  const int layers = num_layers();
  for (int l = 0; l < layers; ++l) {
    const Tensor& w = params_[static_cast<std::size_t>(2 * l)];
    const Tensor& b = params_[static_cast<std::size_t>(2 * l) + 1];
    const int out_w = w.dim(1);
    next.assign(static_cast<std::size_t>(batch) * out_w, 0.0);
    for (int i = 0; i < batch; ++i) {
      const double* row = cur.data() + static_cast<std::size_t>(i) * width;
      double* orow = next.data() + static_cast<std::size_t>(i) * out_w;
      for (int j = 0; j < out_w; ++j) orow[j] = b[j];
      for (int k = 0; k < width; ++k) {
        const double v = row[k];
        if (v == 0.0) continue;
        const double* wrow = w.data().data() + static_cast<std::size_t>(k) * out_w;
        for (int j = 0; j < out_w; ++j) orow[j] += v * wrow[j];
      }
    }
    if (l < layers - 1) {
      switch (spec_.activation) {
        case Activation::kTanh:
          for (double& v : next) v = std::tanh(v);
          break;
        case Activation::kRelu:
          for (double& v : next) v = std::max(0.0, v);
          break;
        case Activation::kIdentity:
          break;
      }
    }
    cur.swap(next);
    width = out_w;
  }
  return cur;
}

nlohmann::json Mlp::to_json() const {
  nlohmann::json j;
  j["format_version"] = 1;
  j["input_dim"] = spec_.input_dim;
  j["hidden_dims"] = spec_.hidden_dims;
  j["output_dim"] = spec_.output_dim;
  j["activation"] = activation_name(spec_.activation);
  nlohmann::json arr = nlohmann::json::array();
  for (const Tensor& t : params_) arr.push_back(tensor_to_json(t));
  j["params"] = std::move(arr);
  return j;
}

Mlp Mlp::from_json(const nlohmann::json& j) {
  Mlp m;
  m.spec_.input_dim = j.at("input_dim").get<int>();
  m.spec_.hidden_dims = j.at("hidden_dims").get<std::vector<int>>();
  m.spec_.output_dim = j.at("output_dim").get<int>();
  m.spec_.activation = activation_from_name(j.at("activation").get<std::string>());
  m.spec_.validate();
  for (const auto& t : j.at("params")) m.params_.push_back(tensor_from_json(t));
  const int expected = 2 * m.num_layers();
  if (static_cast<int>(m.params_.size()) != expected) {
    throw ConfigError("params", "expected " + std::to_string(expected) + " tensors");
  }
  return m;
}

}  // namespace elbert::nn
