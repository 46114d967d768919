#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "isoflow/dense.hpp"
#include "isoflow/flows.hpp"
#include "isoflow/higher_rank.hpp"

namespace isoflow {

using MultiIndex = std::vector<int>;

// All rho in N^{d+1} with |rho| = N, lexicographically descending, so that
// (N, 0, ..., 0) comes first.
std::vector<MultiIndex> multi_indices(std::size_t d, int N);

// N! / prod rho_i!
double multinomial(const MultiIndex& rho);

std::string format_multi_index(const MultiIndex& rho);  // "2-0-1"

// Coefficients P(sigma', rho') of
//   prod_i (z_0 + sum_j u_{i,j} z_j)^{rho_i} = sum_sigma binom(N, sigma) P(sigma', rho') z^sigma
// with u_{i,j} = p_j(lambda_i), eigenvalues ascending.
struct MVKTable {
  std::size_t d = 0;
  int N = 0;
  std::string eigen_order = "ascending";
  std::vector<double> eigenvalues;
  std::vector<double> weights;
  DenseMatrix u;  // u(i, j) = p_j(lambda_i), i, j = 0..d
  std::vector<MultiIndex> indices;
  std::vector<double> W;                 // W_rho = prod w_i^{rho_i / 2}
  std::vector<double> level;             // sum_i lambda_i rho_i
  bool degenerate = false;               // two levels closer than 1e-9 * scale
  std::size_t degenerate_pair[2] = {0, 0};
  double min_level_gap = 0.0;

  std::size_t count() const { return indices.size(); }
  // Position of a multi-index in `indices`; throws ParameterError if absent.
  std::size_t position(const MultiIndex& idx) const;
  bool contains(const MultiIndex& idx) const;
  double P(std::size_t sigma, std::size_t rho) const { return entries[sigma * count() + rho]; }
  double P(const MultiIndex& sigma, const MultiIndex& rho) const;

  std::vector<double> entries;  // row-major, entries[sigma * count() + rho]
  std::unordered_map<std::uint64_t, std::size_t> positions;  // packed index -> position
};

MVKTable mvk_table(const ChainState& state, int N);

struct MVKOrthogonality {
  double primal = 0.0;  // sum_sigma binom(N,sigma) P(sigma,rho) P(sigma,eta) vs delta / (binom(N,rho) W_rho^2)
  double dual = 0.0;    // sum_rho binom(N,rho) W_rho^2 P(sigma,rho) P(tau,rho) vs delta / binom(N,sigma)
};
// Both relations are multiplied by their diagonal normalizers, so the
// reported numbers are deviations from the identity matrix.
MVKOrthogonality mvk_orthogonality_check(const MVKTable& table);

// Max over (tau, rho) of the eigenvalue recurrence residual, divided by
// max(1, max |P|).
double mvk_recurrence_check(const MVKTable& table, const ChainState& state);

// Max |P(f_i', f_j') - p_i(lambda_j)| for an N = 1 table.
double mvk_unit_check(const MVKTable& table);

struct MVKDerivativeReport {
  double eigvec = 0.0;  // M x^rho - d/dt x^rho - C x^rho, C from the x_0^N coefficient
  double eigvec_half = 0.0;
  double eigvec_order = 0.0;
  double theorem = 0.0;  // with constant W u_1 sum rho_i p_1(lambda_i)
  double theorem_half = 0.0;
  double theorem_order = 0.0;
  double theorem_alt_const = 0.0;  // with the alternative constant N u_1
  double theorem_alt_const_half = 0.0;
  double constant_gap = 0.0;  // max |C_numeric - (u_1 sum rho_i p_1 - dW/W)|
};

// Central differences of width h and h/2 around `state`. Residuals are taken
// on the unit-normalized eigenvectors, whose x^tau entries in the orthonormal
// monomial basis are W_rho sqrt(binom(N,tau) binom(N,rho)) P(tau', rho'). Throws
// DegenerateSpectrumError if two levels sum lambda_i rho_i coincide.
MVKDerivativeReport mvk_time_derivative_check(const ChainState& state, const UPolicy& policy,
                                              int N, double h);

struct KrawtchoukReduction {
  double C = 0.0;
  double p = 0.0;
  double residual_pn = 0.0;
  double residual_sum = 0.0;
};

// Chain with s_i = s i (i-1-d), r_i = r sqrt(i (d+1-i)).
ChainState krawtchouk_chain(double s, double r, std::size_t d);
KrawtchoukReduction krawtchouk_reduction_check(double s, double r, std::size_t d, int N);

void write_mvk_csv(std::ostream& os, const MVKTable& table, int digits = 17);

}  // namespace isoflow
