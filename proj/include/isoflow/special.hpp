#pragma once

#include <complex>
#include <vector>

namespace isoflow {

using cplx = std::complex<double>;

// Principal-branch log Gamma (Lanczos, g = 7, with reflection for Re z < 1/2).
// Throws PoleError at non-positive integers.
cplx complex_log_gamma(cplx z);

// 2F1(a, b; c; z) / Gamma(c), summed as sum_k (a)_k (b)_k z^k / (Gamma(c+k) k!)
// in long double. Entire in c. For z <= -0.75 the Pfaff transform
// (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)) is used when allow_pfaff is set.
// Throws DomainError for |z| >= 1 (non-terminating) and PrecisionError when
// the series has not converged after 10^4 terms.
cplx regularized_2f1(cplx a, cplx b, cplx c, double z, bool allow_pfaff = true);

struct BesselValue {
  double value = 0.0;
  bool underflow = false;  // true when the result flushed to zero
};

// J_n(z) for integer n by Miller's backward recurrence normalized with
// J_0 + 2 sum J_{2k} = 1.
BesselValue bessel_j_checked(long n, double z);
double bessel_j(long n, double z);

// Meixner function m_n(x; lambda, eps, c) with lambda = -1/2 + i rho.
double meixner_function(long n, long x, double rho, double eps_rep, double c);

// Weight c^{-x} / (Gamma(x+eps+lambda+1) Gamma(x+eps-lambda)) of the Meixner
// functions.
double meixner_function_weight(long x, double rho, double eps_rep, double c);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [lo, hi].
QuadratureRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

}  // namespace isoflow
