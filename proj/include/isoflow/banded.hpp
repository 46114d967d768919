#pragma once

#include <cstddef>
#include <vector>

#include "isoflow/dense.hpp"

namespace isoflow {

// Symmetric tridiagonal operator on the basis window
// {e_base, ..., e_{base+size-1}}. off[i] couples rows i and i+1.
//
// For a truncated infinite representation the first and/or last row is not
// the exact matrix row of the operator; the *_exact flags record this and
// row-local identity checks skip such rows.
struct TridiagonalOperator {
  long base_index = 0;
  std::vector<double> diag;
  std::vector<double> off;
  bool lower_exact = true;
  bool upper_exact = true;

  std::size_t size() const { return diag.size(); }
  // True if row i (window position) is an exact row of the operator.
  bool row_exact(std::size_t i) const;
  // Maximum absolute row sum.
  double norm_inf() const;
  DenseMatrix to_dense() const;
};

// Skew-symmetric tridiagonal operator: the action on basis vectors is
// e_i -> off[i] e_{i+1} - off[i-1] e_{i-1}, so the matrix has entry
// (i+1, i) = off[i] and (i, i+1) = -off[i].
struct SkewTridiagonalOperator {
  long base_index = 0;
  std::size_t dim = 0;
  std::vector<double> off;
  bool lower_exact = true;
  bool upper_exact = true;

  std::size_t size() const { return dim; }
  DenseMatrix to_dense() const;
};

// General operator with at most one sub- and one super-diagonal. Used for
// the generator matrices H, E, F, N of a representation.
struct BandedOperator {
  long base_index = 0;
  std::vector<double> lower;  // entry (i+1, i)
  std::vector<double> diag;
  std::vector<double> upper;  // entry (i, i+1)

  std::size_t size() const { return diag.size(); }
  DenseMatrix to_dense() const;
};

}  // namespace isoflow
