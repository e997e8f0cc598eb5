#ifndef ELBERT_NN_OPTIMIZER_HPP_
#define ELBERT_NN_OPTIMIZER_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "elbert/nn/tensor.hpp"
#include "nlohmann/json_fwd.hpp"

namespace elbert::nn {

enum class OptimizerKind { kAdam, kSgd };

std::string optimizer_name(OptimizerKind k);
OptimizerKind optimizer_from_name(const std::string& name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon_stab = 1e-8;
};

// Gradient-descent step on a parameter set. Adam keeps first/second moments
// per tensor with bias correction; sgd applies the raw step.
class Optimizer {
 public:
  Optimizer() = default;
  Optimizer(const std::vector<Tensor>& params, OptimizerConfig cfg);

  void step(std::vector<Tensor>& params, const std::vector<Tensor>& grads);

  std::int64_t step_count() const { return step_count_; }
  const OptimizerConfig& config() const { return cfg_; }
  void set_learning_rate(double lr) { cfg_.learning_rate = lr; }

  nlohmann::json to_json() const;
  static Optimizer from_json(const nlohmann::json& j);

 private:
  OptimizerConfig cfg_;
  std::int64_t step_count_ = 0;
  std::vector<Tensor> first_moment_;
  std::vector<Tensor> second_moment_;
};

}  // namespace elbert::nn

#endif  // ELBERT_NN_OPTIMIZER_HPP_
