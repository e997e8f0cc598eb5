#ifndef ELBERT_NN_TENSOR_HPP_
#define ELBERT_NN_TENSOR_HPP_

#include <string>
#include <vector>

namespace elbert::nn {

// Dense row-major tensor of 64-bit reals. Rank 1 and 2 cover everything the
// library needs; higher ranks are representable but unused.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape);  // zero-filled
  Tensor(std::vector<int> shape, std::vector<double> values);

  static Tensor scalar(double v);
  static Tensor full(std::vector<int> shape, double v);

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int dim(int i) const { return shape_[static_cast<std::size_t>(i)]; }
  int numel() const { return static_cast<int>(data_.size()); }

  double operator[](int i) const { return data_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return data_[static_cast<std::size_t>(i)]; }
  double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols() + c]; }
  double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols() + c]; }

  // Row/column view: rank-2 as-is, rank-1 as a single row, rank-0 as 1x1.
  int rows() const { return rank() == 2 ? shape_[0] : 1; }
  int cols() const { return rank() == 2 ? shape_[1] : (rank() == 1 ? shape_[0] : 1); }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }
  bool all_finite() const;
  void require_finite(const std::string& what) const;  // throws NumericError
  void fill(double v);

  std::string shape_str() const;

 private:
  std::vector<int> shape_;
  std::vector<double> data_;
};

}  // namespace elbert::nn

#endif  // ELBERT_NN_TENSOR_HPP_
