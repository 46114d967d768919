#pragma once

#include <vector>

#include "isoflow/algebra_reps.hpp"
#include "isoflow/banded.hpp"
#include "isoflow/dense.hpp"
#include "isoflow/family_tag.hpp"
#include "isoflow/flows.hpp"
#include "isoflow/ortho_families.hpp"

namespace isoflow {

struct SpectralDecomposition {
  std::vector<double> eigenvalues;  // ascending
  DenseMatrix vectors;              // column r belongs to eigenvalues[r]
  std::vector<double> weights;      // squared first components
};

// Implicit-shift QL on a symmetric tridiagonal matrix. Eigenvectors are
// normalized with a non-negative first component.
SpectralDecomposition eigs_sym_tridiag(const std::vector<double>& diag,
                                       const std::vector<double>& off);
SpectralDecomposition eigs_sym_tridiag(const TridiagonalOperator& T);

// Eigenvalue the diagonalization theorem assigns to spectral point x.
double theorem_eigenvalue(FamilyTag family, const ParameterMap& map, const RepresentationSpec& rep,
                          const AlgebraSpec& alg, double x);

// Value at row n of the theorem's eigenfunction for spectral point x
// (degree_sign^n times the family value; zero below the natural boundary).
double eigenfunction(const ParameterMap& map, long n, double x);

// |row n of pi(L) applied to the eigenfunction - eigenvalue * psi_n|, divided
// by max(1, |psi_{n-1}|, |psi_n|, |psi_{n+1}|).
double recurrence_residual(FamilyTag family, const RepresentationSpec& rep, const AlgebraSpec& alg,
                           double r, double s, long n, double x);

// Backward error of the eigenfunction on rows n_lo..n_hi: the largest row
// residual divided by the largest |psi_n| over n_lo-1..n_hi+1.
double eigenvector_residual(FamilyTag family, const RepresentationSpec& rep,
                            const AlgebraSpec& alg, double r, double s, double x, long n_lo,
                            long n_hi);

// Eigenvalues followed along a flow: all of them for finite representations,
// the lowest `leading` for windows with an exact lower edge, otherwise the
// `leading` ones nearest the window centre. Ascending.
std::vector<double> tracked_spectrum(const TridiagonalOperator& L, std::size_t leading = 5);

// Max over samples of the sup-distance between the tracked eigenvalues at t
// and at t0. Finite representations track the whole spectrum; truncated
// representations track `leading` eigenvalues (lowest ones for windows with
// an exact lower edge, the ones nearest the window centre otherwise).
double isospectrality_drift(const Trajectory& traj, const RepresentationSpec& rep,
                            const AlgebraSpec& alg, std::size_t leading = 5);

// Residual of k r (e^{i(n+1)x} + e^{i(n-1)x}) = 2 k r cos(x) e^{inx} over an
// x grid of `points` nodes and |n| <= 10.
double degenerate_e2_check(double k, double r, int points = 64);

}  // namespace isoflow
