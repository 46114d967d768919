#include "isoflow/dense.hpp"

#include <algorithm>
#include <cmath>

#include "isoflow/banded.hpp"

namespace isoflow {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& other) const {
  DenseMatrix out(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t k = 0; k < n_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < n_; ++j) out(i, j) += a * other(k, j);
    }
  return out;
}

DenseMatrix DenseMatrix::operator-(const DenseMatrix& other) const {
  DenseMatrix out(n_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - other.data_[i];
  return out;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix out(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

double DenseMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool TridiagonalOperator::row_exact(std::size_t i) const {
  if (i == 0 && !lower_exact) return false;
  if (i + 1 == size() && !upper_exact) return false;
  return true;
}

double TridiagonalOperator::norm_inf() const {
  double best = 0.0;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(diag[i]);
    if (i > 0) row += std::abs(off[i - 1]);
    if (i + 1 < n) row += std::abs(off[i]);
    best = std::max(best, row);
  }
  return best;
}

DenseMatrix TridiagonalOperator::to_dense() const {
  DenseMatrix m(size());
  for (std::size_t i = 0; i < size(); ++i) m(i, i) = diag[i];
  for (std::size_t i = 0; i < off.size(); ++i) {
    m(i, i + 1) = off[i];
    m(i + 1, i) = off[i];
  }
  return m;
}

DenseMatrix SkewTridiagonalOperator::to_dense() const {
  DenseMatrix m(dim);
  for (std::size_t i = 0; i < off.size(); ++i) {
    m(i + 1, i) = off[i];
    m(i, i + 1) = -off[i];
  }
  return m;
}

DenseMatrix BandedOperator::to_dense() const {
  DenseMatrix m(size());
  for (std::size_t i = 0; i < size(); ++i) m(i, i) = diag[i];
  for (std::size_t i = 0; i < lower.size(); ++i) m(i + 1, i) = lower[i];
  for (std::size_t i = 0; i < upper.size(); ++i) m(i, i + 1) = upper[i];
  return m;
}

}  // namespace isoflow
