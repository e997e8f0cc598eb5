#include "elbert/nn/optimizer.hpp"

#include <cmath>

#include "elbert/errors.hpp"
#include "elbert/nn/serialize.hpp"
#include "nlohmann/json.hpp"

namespace elbert::nn {

std::string optimizer_name(OptimizerKind k) {
  return k == OptimizerKind::kAdam ? "adam" : "sgd";
}

OptimizerKind optimizer_from_name(const std::string& name) {
  if (name == "adam") return OptimizerKind::kAdam;
  if (name == "sgd") return OptimizerKind::kSgd;
  throw ConfigError("optimizer", "unknown optimizer '" + name + "'");
}

Optimizer::Optimizer(const std::vector<Tensor>& params, OptimizerConfig cfg) : cfg_(cfg) {
  for (const Tensor& p : params) {
    first_moment_.emplace_back(p.shape());
    second_moment_.emplace_back(p.shape());
  }
}

void Optimizer::step(std::vector<Tensor>& params, const std::vector<Tensor>& grads) {
  if (params.size() != grads.size() || params.size() != first_moment_.size()) {
    throw ShapeError("optimizer step: parameter/gradient count mismatch");
  }
  ++step_count_;
  const double lr = cfg_.learning_rate;
  if (cfg_.kind == OptimizerKind::kSgd) {
    for (std::size_t t = 0; t < params.size(); ++t) {
      if (!params[t].same_shape(grads[t])) throw ShapeError("optimizer step: shape mismatch");
      for (int i = 0; i < params[t].numel(); ++i) params[t][i] -= lr * grads[t][i];
      params[t].require_finite("sgd update");
    }
    return;
  }
  const double b1 = cfg_.beta1, b2 = cfg_.beta2, eps = cfg_.epsilon_stab;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_count_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_count_));
  for (std::size_t t = 0; t < params.size(); ++t) {
    if (!params[t].same_shape(grads[t])) throw ShapeError("optimizer step: shape mismatch");
    Tensor& m = first_moment_[t];
    Tensor& v = second_moment_[t];
    Tensor& p = params[t];
    const Tensor& g = grads[t];
    for (int i = 0; i < p.numel(); ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
    p.require_finite("adam update");
  }
}

nlohmann::json Optimizer::to_json() const {
  nlohmann::json j;
  j["kind"] = optimizer_name(cfg_.kind);
  j["learning_rate"] = cfg_.learning_rate;
  j["beta1"] = cfg_.beta1;
  j["beta2"] = cfg_.beta2;
  j["epsilon_stab"] = cfg_.epsilon_stab;
  j["step_count"] = step_count_;
  nlohmann::json ms = nlohmann::json::array(), vs = nlohmann::json::array();
  for (const Tensor& t : first_moment_) ms.push_back(tensor_to_json(t));
  for (const Tensor& t : second_moment_) vs.push_back(tensor_to_json(t));
  j["first_moment"] = std::move(ms);
  j["second_moment"] = std::move(vs);
  return j;
}

Optimizer Optimizer::from_json(const nlohmann::json& j) {
  Optimizer o;
  o.cfg_.kind = optimizer_from_name(j.at("kind").get<std::string>());
  o.cfg_.learning_rate = j.at("learning_rate").get<double>();
  o.cfg_.beta1 = j.at("beta1").get<double>();
  o.cfg_.beta2 = j.at("beta2").get<double>();
  o.cfg_.epsilon_stab = j.at("epsilon_stab").get<double>();
  o.step_count_ = j.at("step_count").get<std::int64_t>();
  for (const auto& t : j.at("first_moment")) o.first_moment_.push_back(tensor_from_json(t));
  for (const auto& t : j.at("second_moment")) o.second_moment_.push_back(tensor_from_json(t));
  return o;
}

}  // namespace elbert::nn
