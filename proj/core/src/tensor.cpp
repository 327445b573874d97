#include "pairclust/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pairclust::diffcore {

Tensor Tensor::vector(std::vector<double> v) {
  Tensor t;
  t.rank_ = 1;
  t.rows_ = v.size();
  t.cols_ = 1;
  t.data_ = std::move(v);
  return t;
}

Tensor Tensor::matrix(size_t rows, size_t cols, std::vector<double> v) {
  if (v.size() != rows * cols) {
    throw std::invalid_argument("Tensor::matrix: " + std::to_string(v.size()) +
                                " values for shape (" + std::to_string(rows) + " x " +
                                std::to_string(cols) + ")");
  }
  Tensor t;
  t.rank_ = 2;
  t.rows_ = rows;
  t.cols_ = cols;
  t.data_ = std::move(v);
  return t;
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

std::string Tensor::shape_str() const {
  if (rank_ == 1) return "(" + std::to_string(rows_) + ")";
  return "(" + std::to_string(rows_) + " x " + std::to_string(cols_) + ")";
}

}  // namespace pairclust::diffcore
