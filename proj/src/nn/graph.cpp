#include "elbert/nn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "elbert/errors.hpp"

namespace elbert::nn {

namespace {

void require_rank2(const Tensor& t, const char* op) {
  if (t.rank() > 2) throw ShapeError(std::string(op) + ": rank > 2 unsupported, got " + t.shape_str());
}

}  // namespace

void Graph::check_ref(ValueRef r) const {
  if (r.id < 0 || r.id >= static_cast<int>(nodes_.size())) {
    throw Error("invalid graph node reference");
  }
}

const Graph::Node& Graph::node(ValueRef r) const {
  check_ref(r);
  return nodes_[static_cast<std::size_t>(r.id)];
}

Graph::Node& Graph::node_mut(ValueRef r) {
  check_ref(r);
  return nodes_[static_cast<std::size_t>(r.id)];
}

ValueRef Graph::push(Node node, const char* op_name) {
  node.value.require_finite(op_name);
  nodes_.push_back(std::move(node));
  return ValueRef{static_cast<int>(nodes_.size()) - 1};
}

const Tensor& Graph::value(ValueRef r) const { return node(r).value; }

const Tensor& Graph::grad(ValueRef r) const {
  const Node& n = node(r);
  if (n.grad.numel() != n.value.numel()) {
    throw Error("gradient not populated; call backward() first");
  }
  return n.grad;
}

ValueRef Graph::input(Tensor t) {
  Node n;
  n.op = Op::kLeaf;
  n.value = std::move(t);
  return push(std::move(n), "input");
}

ValueRef Graph::param(const Tensor& t) {
  Node n;
  n.op = Op::kLeaf;
  n.value = t;
  n.is_param = true;
  return push(std::move(n), "param");
}

ValueRef Graph::matmul(ValueRef a, ValueRef b) {
  const Tensor& ta = node(a).value;
  const Tensor& tb = node(b).value;
  if (ta.rank() != 2 || tb.rank() != 2 || ta.dim(1) != tb.dim(0)) {
    throw ShapeError("matmul: incompatible shapes " + ta.shape_str() + " x " + tb.shape_str());
  }
  const int m = ta.dim(0), k = ta.dim(1), p = tb.dim(1);
  Node n;
  n.op = Op::kMatmul;
  n.a = a.id;
  n.b = b.id;
  n.value = Tensor({m, p});
  const double* A = ta.data().data();
  const double* B = tb.data().data();
  double* C = n.value.data().data();
  for (int i = 0; i < m; ++i) {
    double* crow = C + static_cast<std::size_t>(i) * p;
    const double* arow = A + static_cast<std::size_t>(i) * k;
    for (int kk = 0; kk < k; ++kk) {
      const double av = arow[kk];
      if (av == 0.0) continue;
      const double* brow = B + static_cast<std::size_t>(kk) * p;
      for (int j = 0; j < p; ++j) crow[j] += av * brow[j];
    }
  }
  return push(std::move(n), "matmul");
}

ValueRef Graph::add(ValueRef a, ValueRef b) {
  const Tensor& ta = node(a).value;
  const Tensor& tb = node(b).value;
  if (!ta.same_shape(tb)) {
    throw ShapeError("add: shape mismatch " + ta.shape_str() + " vs " + tb.shape_str());
  }
  Node n;
  n.op = Op::kAdd;
  n.a = a.id;
  n.b = b.id;
  n.value = ta;
  for (int i = 0; i < n.value.numel(); ++i) n.value[i] += tb[i];
  return push(std::move(n), "add");
}

ValueRef Graph::add_row(ValueRef a, ValueRef b) {
  const Tensor& ta = node(a).value;
  const Tensor& tb = node(b).value;
  if (ta.rank() != 2 || tb.rank() != 1 || ta.dim(1) != tb.dim(0)) {
    throw ShapeError("add_row: expected [m,n] + [n], got " + ta.shape_str() + " + " + tb.shape_str());
  }
  Node n;
  n.op = Op::kAddRow;
  n.a = a.id;
  n.b = b.id;
  n.value = ta;
  const int m = ta.dim(0), c = ta.dim(1);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < c; ++j) n.value.at(i, j) += tb[j];
  return push(std::move(n), "add_row");
}

ValueRef Graph::sub(ValueRef a, ValueRef b) {
  const Tensor& ta = node(a).value;
  const Tensor& tb = node(b).value;
  if (!ta.same_shape(tb)) {
    throw ShapeError("sub: shape mismatch " + ta.shape_str() + " vs " + tb.shape_str());
  }
  Node n;
  n.op = Op::kSub;
  n.a = a.id;
  n.b = b.id;
  n.value = ta;
  for (int i = 0; i < n.value.numel(); ++i) n.value[i] -= tb[i];
  return push(std::move(n), "sub");
}

ValueRef Graph::mul(ValueRef a, ValueRef b) {
  const Tensor& ta = node(a).value;
  const Tensor& tb = node(b).value;
  if (!ta.same_shape(tb)) {
    throw ShapeError("mul: shape mismatch " + ta.shape_str() + " vs " + tb.shape_str());
  }
  Node n;
  n.op = Op::kMul;
  n.a = a.id;
  n.b = b.id;
  n.value = ta;
  for (int i = 0; i < n.value.numel(); ++i) n.value[i] *= tb[i];
  return push(std::move(n), "mul");
}

ValueRef Graph::add_scalar(ValueRef a, double c) {
  Node n;
  n.op = Op::kAddScalar;
  n.a = a.id;
  n.c0 = c;
  n.value = node(a).value;
  for (int i = 0; i < n.value.numel(); ++i) n.value[i] += c;
  return push(std::move(n), "add_scalar");
}

ValueRef Graph::mul_scalar(ValueRef a, double c) {
  Node n;
  n.op = Op::kMulScalar;
  n.a = a.id;
  n.c0 = c;
  n.value = node(a).value;
  for (int i = 0; i < n.value.numel(); ++i) n.value[i] *= c;
  return push(std::move(n), "mul_scalar");
}

ValueRef Graph::tanh(ValueRef a) {
  Node n;
  n.op = Op::kTanh;
  n.a = a.id;
  n.value = node(a).value;
  for (int i = 0; i < n.value.numel(); ++i) n.value[i] = std::tanh(n.value[i]);
  return push(std::move(n), "tanh");
}

ValueRef Graph::relu(ValueRef a) {
  Node n;
  n.op = Op::kRelu;
  n.a = a.id;
  n.value = node(a).value;
  for (int i = 0; i < n.value.numel(); ++i) n.value[i] = std::max(0.0, n.value[i]);
  return push(std::move(n), "relu");
}

ValueRef Graph::exp(ValueRef a) {
  Node n;
  n.op = Op::kExp;
  n.a = a.id;
  n.value = node(a).value;
  for (int i = 0; i < n.value.numel(); ++i) n.value[i] = std::exp(n.value[i]);
  return push(std::move(n), "exp");
}

ValueRef Graph::log_softmax(ValueRef a) {
  const Tensor& ta = node(a).value;
  require_rank2(ta, "log_softmax");
  if (ta.numel() == 0) throw ShapeError("log_softmax: empty tensor");
  Node n;
  n.op = Op::kLogSoftmax;
  n.a = a.id;
  n.value = ta;
  const int m = ta.rows(), c = ta.cols();
  for (int i = 0; i < m; ++i) {
    double* row = n.value.data().data() + static_cast<std::size_t>(i) * c;
    double mx = row[0];
    for (int j = 1; j < c; ++j) mx = std::max(mx, row[j]);
    double sum = 0.0;
    for (int j = 0; j < c; ++j) sum += std::exp(row[j] - mx);
    double lse = mx + std::log(sum);
    for (int j = 0; j < c; ++j) row[j] -= lse;
  }
  return push(std::move(n), "log_softmax");
}

ValueRef Graph::gather(ValueRef a, std::span<const int> idx) {
  const Tensor& ta = node(a).value;
  require_rank2(ta, "gather");
  const int m = ta.rows(), c = ta.cols();
  if (static_cast<int>(idx.size()) != m) {
    throw ShapeError("gather: index count " + std::to_string(idx.size()) +
                     " does not match row count " + std::to_string(m));
  }
  Node n;
  n.op = Op::kGather;
  n.a = a.id;
  n.idx.assign(idx.begin(), idx.end());
  n.value = Tensor({m});
  for (int i = 0; i < m; ++i) {
    int j = n.idx[static_cast<std::size_t>(i)];
    if (j < 0 || j >= c) throw ShapeError("gather: index out of range");
    n.value[i] = ta.at(i, j);
  }
  return push(std::move(n), "gather");
}

ValueRef Graph::row_sum(ValueRef a) {
  const Tensor& ta = node(a).value;
  require_rank2(ta, "row_sum");
  const int m = ta.rows(), c = ta.cols();
  Node n;
  n.op = Op::kRowSum;
  n.a = a.id;
  n.value = Tensor({m});
  for (int i = 0; i < m; ++i) {
    double s = 0.0;
    for (int j = 0; j < c; ++j) s += ta.at(i, j);
    n.value[i] = s;
  }
  return push(std::move(n), "row_sum");
}

ValueRef Graph::sum(ValueRef a) {
  const Tensor& ta = node(a).value;
  Node n;
  n.op = Op::kSum;
  n.a = a.id;
  double s = 0.0;
  for (int i = 0; i < ta.numel(); ++i) s += ta[i];
  n.value = Tensor::scalar(s);
  return push(std::move(n), "sum");
}

ValueRef Graph::mean(ValueRef a) {
  const Tensor& ta = node(a).value;
  if (ta.numel() == 0) throw ShapeError("mean: empty tensor");
  Node n;
  n.op = Op::kMean;
  n.a = a.id;
  double s = 0.0;
  for (int i = 0; i < ta.numel(); ++i) s += ta[i];
  n.value = Tensor::scalar(s / ta.numel());
  return push(std::move(n), "mean");
}

ValueRef Graph::clip(ValueRef a, double lo, double hi) {
  if (!(lo <= hi)) throw Error("clip: lo must not exceed hi");
  Node n;
  n.op = Op::kClip;
  n.a = a.id;
  n.c0 = lo;
  n.c1 = hi;
  n.value = node(a).value;
  for (int i = 0; i < n.value.numel(); ++i) n.value[i] = std::clamp(n.value[i], lo, hi);
  return push(std::move(n), "clip");
}

ValueRef Graph::min(ValueRef a, ValueRef b) {
  const Tensor& ta = node(a).value;
  const Tensor& tb = node(b).value;
  if (!ta.same_shape(tb)) {
    throw ShapeError("min: shape mismatch " + ta.shape_str() + " vs " + tb.shape_str());
  }
  Node n;
  n.op = Op::kMin;
  n.a = a.id;
  n.b = b.id;
  n.value = ta;
  for (int i = 0; i < n.value.numel(); ++i) n.value[i] = std::min(n.value[i], tb[i]);
  return push(std::move(n), "min");
}

void Graph::backward(ValueRef root) {
  Node& r = node_mut(root);
  if (r.value.numel() != 1) {
    throw ShapeError("backward: root must be scalar, got shape " + r.value.shape_str());
  }

  // Mark nodes reachable from the root so the sweep skips dead subgraphs.
  std::vector<char> reachable(nodes_.size(), 0);
  reachable[static_cast<std::size_t>(root.id)] = 1;
  for (int i = root.id; i >= 0; --i) {
    if (!reachable[static_cast<std::size_t>(i)]) continue;
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    if (n.a >= 0) reachable[static_cast<std::size_t>(n.a)] = 1;
    if (n.b >= 0) reachable[static_cast<std::size_t>(n.b)] = 1;
  }

  for (auto& n : nodes_) {
    n.grad = Tensor(n.value.shape());
  }
  r.grad.fill(1.0);

  for (int i = root.id; i >= 0; --i) {
    if (!reachable[static_cast<std::size_t>(i)]) continue;
    Node& n = nodes_[static_cast<std::size_t>(i)];
    const Tensor& g = n.grad;
    switch (n.op) {
      case Op::kLeaf:
        break;
      case Op::kMatmul: {
        Node& pa = nodes_[static_cast<std::size_t>(n.a)];
        Node& pb = nodes_[static_cast<std::size_t>(n.b)];
        const int m = pa.value.dim(0), k = pa.value.dim(1), p = pb.value.dim(1);
        // dA += G * B^T
        for (int ii = 0; ii < m; ++ii) {
          const double* grow = g.data().data() + static_cast<std::size_t>(ii) * p;
          double* darow = pa.grad.data().data() + static_cast<std::size_t>(ii) * k;
          for (int kk = 0; kk < k; ++kk) {
            const double* brow = pb.value.data().data() + static_cast<std::size_t>(kk) * p;
            double acc = 0.0;
            for (int j = 0; j < p; ++j) acc += grow[j] * brow[j];
            darow[kk] += acc;
          }
        }
        // dB += A^T * G
        for (int ii = 0; ii < m; ++ii) {
          const double* arow = pa.value.data().data() + static_cast<std::size_t>(ii) * k;
          const double* grow = g.data().data() + static_cast<std::size_t>(ii) * p;
          for (int kk = 0; kk < k; ++kk) {
            const double av = arow[kk];
            if (av == 0.0) continue;
            double* dbrow = pb.grad.data().data() + static_cast<std::size_t>(kk) * p;
            for (int j = 0; j < p; ++j) dbrow[j] += av * grow[j];
          }
        }
        break;
      }
      case Op::kAdd: {
        Node& pa = nodes_[static_cast<std::size_t>(n.a)];
        Node& pb = nodes_[static_cast<std::size_t>(n.b)];
        for (int j = 0; j < g.numel(); ++j) {
          pa.grad[j] += g[j];
          pb.grad[j] += g[j];
        }
        break;
      }
      case Op::kAddRow: {
        Node& pa = nodes_[static_cast<std::size_t>(n.a)];
        Node& pb = nodes_[static_cast<std::size_t>(n.b)];
        const int m = pa.value.dim(0), c = pa.value.dim(1);
        for (int ii = 0; ii < m; ++ii)
          for (int j = 0; j < c; ++j) {
            pa.grad.at(ii, j) += g.at(ii, j);
            pb.grad[j] += g.at(ii, j);
          }
        break;
      }
      case Op::kSub: {
        Node& pa = nodes_[static_cast<std::size_t>(n.a)];
        Node& pb = nodes_[static_cast<std::size_t>(n.b)];
        for (int j = 0; j < g.numel(); ++j) {
          pa.grad[j] += g[j];
          pb.grad[j] -= g[j];
        }
        break;
      }
      case Op::kMul: {
        Node& pa = nodes_[static_cast<std::size_t>(n.a)];
        Node& pb = nodes_[static_cast<std::size_t>(n.b)];
        for (int j = 0; j < g.numel(); ++j) {
          pa.grad[j] += g[j] * pb.value[j];
          pb.grad[j] += g[j] * pa.value[j];
        }
        break;
      }
      case Op::kAddScalar: {
        Node& pa = nodes_[static_cast<std::size_t>(n.a)];
        for (int j = 0; j < g.numel(); ++j) pa.grad[j] += g[j];
        break;
      }
      case Op::kMulScalar: {
        Node& pa = nodes_[static_cast<std::size_t>(n.a)];
        for (int j = 0; j < g.numel(); ++j) pa.grad[j] += g[j] * n.c0;
        break;
      }
      case Op::kTanh: {
        Node& pa = nodes_[static_cast<std::size_t>(n.a)];
        for (int j = 0; j < g.numel(); ++j) pa.grad[j] += g[j] * (1.0 - n.value[j] * n.value[j]);
        break;
      }
      case Op::kRelu: {
        Node& pa = nodes_[static_cast<std::size_t>(n.a)];
        for (int j = 0; j < g.numel(); ++j) {
          if (pa.value[j] > 0.0) pa.grad[j] += g[j];
        }
        break;
      }
      case Op::kExp: {
        Node& pa = nodes_[static_cast<std::size_t>(n.a)];
        for (int j = 0; j < g.numel(); ++j) pa.grad[j] += g[j] * n.value[j];
        break;
      }
      case Op::kLogSoftmax: {
        Node& pa = nodes_[static_cast<std::size_t>(n.a)];
        const int m = n.value.rows(), c = n.value.cols();
        for (int ii = 0; ii < m; ++ii) {
          double gsum = 0.0;
          for (int j = 0; j < c; ++j) gsum += g[ii * c + j];
          for (int j = 0; j < c; ++j) {
            pa.grad[ii * c + j] += g[ii * c + j] - std::exp(n.value[ii * c + j]) * gsum;
          }
        }
        break;
      }
      case Op::kGather: {
        Node& pa = nodes_[static_cast<std::size_t>(n.a)];
        const int c = pa.value.cols();
        for (int ii = 0; ii < n.value.numel(); ++ii) {
          pa.grad[ii * c + n.idx[static_cast<std::size_t>(ii)]] += g[ii];
        }
        break;
      }
      case Op::kRowSum: {
        Node& pa = nodes_[static_cast<std::size_t>(n.a)];
        const int c = pa.value.cols();
        for (int ii = 0; ii < n.value.numel(); ++ii)
          for (int j = 0; j < c; ++j) pa.grad[ii * c + j] += g[ii];
        break;
      }
      case Op::kSum: {
        Node& pa = nodes_[static_cast<std::size_t>(n.a)];
        for (int j = 0; j < pa.grad.numel(); ++j) pa.grad[j] += g[0];
        break;
      }
      case Op::kMean: {
        Node& pa = nodes_[static_cast<std::size_t>(n.a)];
        const double w = g[0] / pa.value.numel();
        for (int j = 0; j < pa.grad.numel(); ++j) pa.grad[j] += w;
        break;
      }
      case Op::kClip: {
        Node& pa = nodes_[static_cast<std::size_t>(n.a)];
        for (int j = 0; j < g.numel(); ++j) {
          if (pa.value[j] >= n.c0 && pa.value[j] <= n.c1) pa.grad[j] += g[j];
        }
        break;
      }
      case Op::kMin: {
        Node& pa = nodes_[static_cast<std::size_t>(n.a)];
        Node& pb = nodes_[static_cast<std::size_t>(n.b)];
        for (int j = 0; j < g.numel(); ++j) {
          const double av = pa.value[j], bv = pb.value[j];
          if (av < bv) {
            pa.grad[j] += g[j];
          } else if (bv < av) {
            pb.grad[j] += g[j];
          } else {
            pa.grad[j] += 0.5 * g[j];
            pb.grad[j] += 0.5 * g[j];
          }
        }
        break;
      }
    }
  }

  for (const auto& n : nodes_) {
    if (n.is_param) n.grad.require_finite("parameter gradient");
  }
}

}  // namespace elbert::nn
