#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace pairclust::diffcore {

// Dense row-major tensor of doubles, rank 1 or 2.  A rank-1 tensor of length n
// is stored as n rows and one column so row/col accessors stay meaningful.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(size_t n) : rank_(1), rows_(n), cols_(1), data_(n, 0.0) {}
  Tensor(size_t rows, size_t cols)
      : rank_(2), rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static Tensor vector(std::vector<double> v);
  static Tensor matrix(size_t rows, size_t cols, std::vector<double> v);

  size_t rank() const { return rank_; }
  size_t size() const { return data_.size(); }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  double& operator[](size_t i) { return data_[i]; }
  double operator[](size_t i) const { return data_[i]; }
  double& at(size_t r, size_t c) { return data_[r * cols_ + c]; }
  double at(size_t r, size_t c) const { return data_[r * cols_ + c]; }
  double* row(size_t r) { return data_.data() + r * cols_; }
  const double* row(size_t r) const { return data_.data() + r * cols_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  void fill(double v);
  bool all_finite() const;
  bool same_shape(const Tensor& o) const {
    return rank_ == o.rank_ && rows_ == o.rows_ && cols_ == o.cols_;
  }
  std::string shape_str() const;

  bool operator==(const Tensor& o) const {
    return same_shape(o) && data_ == o.data_;
  }

 private:
  size_t rank_ = 1;
  size_t rows_ = 0;
  size_t cols_ = 1;
  std::vector<double> data_;
};

}  // namespace pairclust::diffcore
