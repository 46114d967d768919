#pragma once

#include <string>
#include <variant>

#include "isoflow/banded.hpp"

namespace isoflow {

// Structure constants of g(a,b): [E,F] = aH + bN, [H,E] = 2E, [H,F] = -2F,
// N central, with *-structure E* = epsilon F. c_param is the coefficient of
// H in the Lax operator L = cH + s(aH + bN) + r(E + E*).
struct AlgebraSpec {
  double a = 1.0;
  double b = 0.0;
  double c_param = 0.0;
  int epsilon = +1;

  static AlgebraSpec su2(double c = 0.0) { return {1.0, 0.0, c, +1}; }
  static AlgebraSpec su11(double c = 0.0) { return {1.0, 0.0, c, -1}; }
  static AlgebraSpec oscillator(double c = 0.0) { return {0.0, 1.0, c, +1}; }
  static AlgebraSpec e2(double c = 0.0) { return {0.0, 0.0, c, +1}; }

  void validate() const;
  std::string name() const;
};

namespace rep {

// Spin-j representation of su(2) on C^{2j+1}, basis e_0 .. e_{2j}.
struct SU2 {
  double j = 0.5;
};

// Positive discrete series of su(1,1) on l^2(N), truncated to 0..n_max.
struct DiscreteSeriesPlus {
  double k = 1.0;
  long n_max = 60;
};

// Principal unitary series of su(1,1) on l^2(Z) with lambda = -1/2 + i rho,
// truncated to n_min..n_max.
struct PrincipalSeries {
  double rho = 0.7;
  double eps_rep = 0.3;
  long n_min = -40;
  long n_max = 40;
};

// Oscillator algebra b(1) representation pi_{k,h} on l^2(N), truncated.
struct Oscillator {
  double k = 0.0;
  double h = 1.0;
  long n_max = 60;
};

// e(2) representation on l^2(Z), truncated to n_min..n_max.
struct E2 {
  double k = 1.0;
  long n_min = -40;
  long n_max = 40;
};

}  // namespace rep

using RepresentationSpec =
    std::variant<rep::SU2, rep::DiscreteSeriesPlus, rep::PrincipalSeries, rep::Oscillator, rep::E2>;

void validate(const RepresentationSpec& rep);
std::string rep_name(const RepresentationSpec& rep);

// The (a, b, epsilon) the representation belongs to, with the given c.
AlgebraSpec natural_algebra(const RepresentationSpec& rep, double c_param = 0.0);

// Throws ConfigurationError unless rep is a *-representation of alg.
void check_compatible(const RepresentationSpec& rep, const AlgebraSpec& alg);

// First and last basis index of the (possibly truncated) window.
long window_begin(const RepresentationSpec& rep);
long window_end(const RepresentationSpec& rep);

// Matrix coefficients of the generators at absolute basis index n:
// H e_n = h e_n, E e_n = e e_{n+1}, F e_n = f e_{n-1}, N e_n = scalar e_n.
// These are the untruncated coefficients; they vanish where the
// representation has a natural boundary.
struct GeneratorCoefficients {
  double h = 0.0;
  double e = 0.0;
  double f = 0.0;
};
GeneratorCoefficients generator_coefficients(const RepresentationSpec& rep, long n);
double central_scalar(const RepresentationSpec& rep);

struct Generators {
  BandedOperator H;
  BandedOperator E;
  BandedOperator F;
  BandedOperator N;
  bool lower_exact = true;
  bool upper_exact = true;
};

Generators build_generators(const RepresentationSpec& rep);

// pi(L) for L = cH + s(aH + bN) + r(E + E*).
TridiagonalOperator build_L(const RepresentationSpec& rep, const AlgebraSpec& alg, double r,
                            double s);

// pi(M) for M = u(E - E*).
SkewTridiagonalOperator build_M(const RepresentationSpec& rep, double u);

// Max-norm over exact rows of (ds/dt dL/ds + dr/dt dL/dr) - [M, L], with the
// rates taken from the flow equations. Analytically zero.
double lax_residual(const RepresentationSpec& rep, const AlgebraSpec& alg, double r, double s,
                    double u);

}  // namespace isoflow
