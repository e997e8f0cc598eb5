#ifndef ELBERT_NN_GRAPH_HPP_
#define ELBERT_NN_GRAPH_HPP_

#include <span>
#include <vector>

#include "elbert/nn/tensor.hpp"

namespace elbert::nn {

// Handle to a node in a Graph.
struct ValueRef {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode tape over a small set of primitive operations. Nodes are
// appended in topological order; backward() sweeps the tape once in reverse
// and accumulates gradients into every node reachable from the root.
//
// Every operation validates shapes and raises NumericError if it would
// produce a non-finite value.
class Graph {
 public:
  // Leaves. param() marks the node as a parameter so callers can assert the
  // full gradient set is populated after backward().
  ValueRef input(Tensor t);
  ValueRef param(const Tensor& t);

  ValueRef matmul(ValueRef a, ValueRef b);      // [m,k] x [k,n] -> [m,n]
  ValueRef add(ValueRef a, ValueRef b);         // same shape
  ValueRef add_row(ValueRef a, ValueRef b);     // [m,n] + [n] broadcast
  ValueRef sub(ValueRef a, ValueRef b);         // same shape
  ValueRef mul(ValueRef a, ValueRef b);         // elementwise, same shape
  ValueRef add_scalar(ValueRef a, double c);
  ValueRef mul_scalar(ValueRef a, double c);
  ValueRef tanh(ValueRef a);
  ValueRef relu(ValueRef a);
  ValueRef exp(ValueRef a);
  ValueRef log_softmax(ValueRef a);             // rows of [m,n] (or a 1-d row)
  ValueRef gather(ValueRef a, std::span<const int> idx);  // [m,n] -> [m]
  ValueRef row_sum(ValueRef a);                 // [m,n] -> [m]
  ValueRef sum(ValueRef a);                     // -> [1]
  ValueRef mean(ValueRef a);                    // -> [1]
  ValueRef clip(ValueRef a, double lo, double hi);
  ValueRef min(ValueRef a, ValueRef b);         // elementwise, same shape

  const Tensor& value(ValueRef r) const;
  // Valid after backward(); zero tensor for nodes the root does not reach.
  const Tensor& grad(ValueRef r) const;

  // Root must hold exactly one element.
  void backward(ValueRef root);

  int size() const { return static_cast<int>(nodes_.size()); }

 private:
  enum class Op {
    kLeaf, kMatmul, kAdd, kAddRow, kSub, kMul, kAddScalar, kMulScalar,
    kTanh, kRelu, kExp, kLogSoftmax, kGather, kRowSum, kSum, kMean,
    kClip, kMin,
  };

  struct Node {
    Op op;
    int a = -1;
    int b = -1;
    double c0 = 0.0;
    double c1 = 0.0;
    std::vector<int> idx;
    Tensor value;
    Tensor grad;
    bool is_param = false;
  };

  ValueRef push(Node node, const char* op_name);
  const Node& node(ValueRef r) const;
  Node& node_mut(ValueRef r);
  void check_ref(ValueRef r) const;

  std::vector<Node> nodes_;
};

}  // namespace elbert::nn

#endif  // ELBERT_NN_GRAPH_HPP_
