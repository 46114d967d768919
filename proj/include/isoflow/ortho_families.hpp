#pragma once

#include <variant>
#include <vector>

#include "isoflow/algebra_reps.hpp"
#include "isoflow/family_tag.hpp"

namespace isoflow {

namespace fam {
struct Krawtchouk {
  double p = 0.5;
  long N = 1;
};
struct Meixner {
  double beta = 1.0;
  double c = 0.5;
};
// Polynomial argument is x / scale.
struct Laguerre {
  double alpha = 0.0;
  double scale = 1.0;
};
struct MeixnerPollaczek {
  double lambda = 1.0;
  double phi = 1.5707963267948966;
};
struct Charlier {
  double a = 1.0;
};
// Polynomial argument is (x + shift) / scale.
struct Hermite {
  double shift = 0.0;
  double scale = 1.0;
};
// psi_n(m) = J_{m-n}(z).
struct BesselE2 {
  double z = 1.0;
};
struct MeixnerFunction {
  double rho = 0.7;
  double eps_rep = 0.3;
  double c = 0.2;
};
}  // namespace fam

using FamilyParams = std::variant<fam::Krawtchouk, fam::Meixner, fam::Laguerre,
                                  fam::MeixnerPollaczek, fam::Charlier, fam::Hermite,
                                  fam::BesselE2, fam::MeixnerFunction>;

FamilyTag tag_of(const FamilyParams& params);
void validate(const FamilyParams& params);

// Orthonormal polynomial p_n(x) by forward three-term recurrence. Only the
// six polynomial families; Bessel and Meixner functions throw ParameterError.
double eval_rec(const FamilyParams& params, long n, double x);
// p_0(x) .. p_n(x).
std::vector<double> eval_rec_all(const FamilyParams& params, long n, double x);

// The same polynomial from its terminating hypergeometric series.
double eval_hyper(const FamilyParams& params, long n, double x);

// Orthogonality weight at x, in the variable x of eval_rec (scale and shift
// included, so that sum or integral of weight * p_n * p_m is delta_{nm}).
// BesselE2 has unit weight on Z. Throws DomainError off the support.
double weight(const FamilyParams& params, double x);

struct ParameterMap {
  double C = 0.0;
  FamilyParams params;
  // Eigenfunction on row n is degree_sign^n times the family value.
  int degree_sign = +1;
};

// Family parameters for which the eigenfunctions of pi(L(r, s)) are the given
// family. For su(2) and su(1,1) the constant c enters as s + c.
ParameterMap parameter_map(FamilyTag family, const RepresentationSpec& rep,
                           const AlgebraSpec& alg, double r, double s);

}  // namespace isoflow
