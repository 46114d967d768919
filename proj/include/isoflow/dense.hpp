#pragma once

#include <cstddef>
#include <vector>

namespace isoflow {

// Small row-major square matrix used for traces, eigenvector storage and
// verification. Not meant for large problems.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  DenseMatrix operator*(const DenseMatrix& other) const;
  DenseMatrix operator-(const DenseMatrix& other) const;
  DenseMatrix transpose() const;

  double trace() const;
  double max_abs() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

}  // namespace isoflow
