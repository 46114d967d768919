#pragma once

#include <vector>

#include "isoflow/banded.hpp"
#include "isoflow/dense.hpp"
#include "isoflow/flows.hpp"

namespace isoflow {

// L = sum s_i H_i + sum r_i (E_{i-1,i} + E_{i,i-1}) on C^{d+1}, with
// s_0 = s_{d+1} = 0. Arrays are 0-based: s[i-1] holds s_i.
struct ChainState {
  double t = 0.0;
  std::vector<double> s;
  std::vector<double> r;

  std::size_t d() const { return s.size(); }
  void validate() const;
};

struct ChainRate {
  std::vector<double> ds;
  std::vector<double> dr;
};

// u_i = g r_i; ds_i = 2 r_i u_i, dr_i = u_i (s_{i-1} - 2 s_i + s_{i+1}).
ChainRate chain_rhs(const ChainState& state, double g);

// Diagonal s_{n+1} - s_n, off-diagonal r_{n+1}.
TridiagonalOperator build_chain_L(const ChainState& state);

// M = sum u_i (E_{i-1,i} - E_{i,i-1}), u_i = g r_i.
SkewTridiagonalOperator build_chain_M(const ChainState& state, double g);

struct ChainLaxResidual {
  double with_ML = 0.0;  // max |dL/dt - (ML - LM)|
  double with_LM = 0.0;  // max |dL/dt - (LM - ML)|
};
ChainLaxResidual chain_lax_residual(const ChainState& state, double g);

struct EigenPolys {
  std::vector<double> p;  // p_0 .. p_d
  double closure = 0.0;   // lambda p_d - (-s_d p_d + r_d p_{d-1})
};
EigenPolys eigen_polys(const ChainState& state, double lambda);

struct ChainSpectrum {
  std::vector<double> eigenvalues;  // ascending
  double trace_sum = 0.0;           // sum of eigenvalues
  double min_gap = 0.0;
  bool simple = true;               // min_gap >= 1e-12
};
ChainSpectrum chain_spectrum(const ChainState& state);

struct ChristoffelData {
  std::vector<double> eigenvalues;
  std::vector<double> weights;     // 1 / sum_n p_n(lambda_r)^2
  std::vector<double> ql_weights;  // squared first eigenvector components
  DenseMatrix P;                   // P(n, r) = p_n(lambda_r)
  DenseMatrix Q;                   // Q(n, r) = p_n(lambda_r) sqrt(w_r)
  double q_orthogonality = 0.0;    // max |Q^T Q - I|
  double dual_orthogonality = 0.0; // max |sum_r p_n p_m w_r - delta|
  double primal_orthogonality = 0.0;  // max |w_r sum_n p_n(l_r) p_n(l_s) - delta|
};
ChristoffelData christoffel_weights(const ChainState& state);

struct TraceInvariants {
  double tr2_single_weight = 0.0;    // sum (s_{n+1}-s_n)^2 + sum r_n^2
  double tr2_corrected = 0.0;  // Tr D0^2 + 2 Tr D^2
  double tr3_closed = 0.0;
  double tr4_closed = 0.0;
  double tr2_dense = 0.0;
  double tr3_dense = 0.0;
  double tr4_dense = 0.0;
};
TraceInvariants trace_invariants(const ChainState& state);

// g(t) from a policy: u_i = g r_i, so g = u_of(policy, t, 1).
double chain_g(const UPolicy& policy, double t);

// One classical RK4 step of size h (h may be negative).
ChainState chain_rk4_step(const ChainState& state, const UPolicy& policy, double h);

using ChainTrajectory = std::vector<ChainState>;
ChainTrajectory integrate_chain(const ChainState& state0, const UPolicy& policy, double dt,
                                double t_end, int record_every = 1);

struct ChainDrift {
  double spectrum = 0.0;
  double tr2 = 0.0;
  double tr3 = 0.0;
  double tr4 = 0.0;
};
ChainDrift chain_drift(const ChainTrajectory& traj);

struct PnDerivativeReport {
  double residual = 0.0;         // eigenvalue rows, 1 <= n <= d, step h
  double residual_half = 0.0;    // same at h/2
  double order = 0.0;            // log2(residual / residual_half)
  double polynomial = 0.0;       // 0 <= n < d at fixed non-eigenvalue lambdas, step h
  double polynomial_half = 0.0;
  double polynomial_order = 0.0;
  double reversed_sign = 0.0;       // residual of the sign-reversed right-hand side
};

// Central differences of p_n(lambda_r(t); t) around `state` against
// dp_n/dt = u_{n+1} p_{n+1} - u_n p_{n-1} - u_1 p_1 p_n.
PnDerivativeReport pn_time_derivative_check(const ChainState& state, const UPolicy& policy,
                                            double h);

void write_chain_csv(std::ostream& os, const ChainTrajectory& traj, int digits = 17);
void write_chain_spectrum_csv(std::ostream& os, const ChainTrajectory& traj, int digits = 17);

}  // namespace isoflow
