#include "isoflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <numbers>

#include "isoflow/errors.hpp"
#include "isoflow/special.hpp"

namespace isoflow {

SpectralDecomposition eigs_sym_tridiag(const std::vector<double>& diag,
                                       const std::vector<double>& off) {
  const std::size_t n = diag.size();
  if (n == 0) return {};
  if (off.size() + 1 != n) throw ParameterError("eigs_sym_tridiag: off must have size n-1");
  for (double v : diag)
    if (!std::isfinite(v)) throw ParameterError("eigs_sym_tridiag: non-finite diagonal");
  for (double v : off)
    if (!std::isfinite(v)) throw ParameterError("eigs_sym_tridiag: non-finite off-diagonal");

  std::vector<double> d = diag;
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = off[i];
  DenseMatrix z = DenseMatrix::identity(n);

  // tql2: e[i] couples rows i and i+1.
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw NumericalError("eigs_sym_tridiag: QL iteration did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        std::size_t i = m;
        bool underflow = false;
        while (i-- > l) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (std::size_t k = 0; k < n; ++k) {
            f = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * f;
            z(k, i) = c * z(k, i) - s * f;
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.vectors = DenseMatrix(n);
  out.weights.resize(n);
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    out.eigenvalues[col] = d[src];
    const double sgn = z(0, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, col) = sgn * z(k, src);
    out.weights[col] = out.vectors(0, col) * out.vectors(0, col);
  }
  return out;
}

SpectralDecomposition eigs_sym_tridiag(const TridiagonalOperator& T) {
  return eigs_sym_tridiag(T.diag, T.off);
}

double theorem_eigenvalue(FamilyTag family, const ParameterMap& map, const RepresentationSpec& rep,
                          const AlgebraSpec& alg, double x) {
  switch (family) {
    case FamilyTag::Krawtchouk:
      return 2.0 * map.C * (std::get<rep::SU2>(rep).j - x);
    case FamilyTag::Meixner:
      return 2.0 * map.C * (x + std::get<rep::DiscreteSeriesPlus>(rep).k);
    case FamilyTag::Laguerre:
    case FamilyTag::Hermite:
      return x;
    case FamilyTag::MeixnerPollaczek:
      return -2.0 * map.C * x;
    case FamilyTag::Charlier: {
      const auto& osc = std::get<rep::Oscillator>(rep);
      return 2.0 * alg.c_param * (x + osc.k) - map.C * osc.h;
    }
    case FamilyTag::BesselE2:
      return 2.0 * alg.c_param * x;
    case FamilyTag::MeixnerFunction:
      return 2.0 * map.C * (x + std::get<rep::PrincipalSeries>(rep).eps_rep);
  }
  throw ParameterError("theorem_eigenvalue: unknown family");
}

double eigenfunction(const ParameterMap& map, long n, double x) {
  const double sign = (map.degree_sign < 0 && (n % 2 != 0)) ? -1.0 : 1.0;
  if (const auto* b = std::get_if<fam::BesselE2>(&map.params))
    return sign * bessel_j(static_cast<long>(std::lround(x)) - n, b->z);
  if (const auto* mf = std::get_if<fam::MeixnerFunction>(&map.params))
    return sign * meixner_function(n, std::lround(x), mf->rho, mf->eps_rep, mf->c);
  if (n < 0) return 0.0;
  if (const auto* k = std::get_if<fam::Krawtchouk>(&map.params))
    if (n > k->N) return 0.0;
  return sign * eval_rec(map.params, n, x);
}

namespace {

struct RowResidual {
  double raw = 0.0;
  double local_scale = 1.0;
};

RowResidual row_residual(const ParameterMap& map, double lambda, const RepresentationSpec& rep,
                         const AlgebraSpec& alg, double r, double s, long n, double x) {
  const GeneratorCoefficients here = generator_coefficients(rep, n);
  const double e_below = generator_coefficients(rep, n - 1).e;
  const double diag = alg.c_param * here.h + s * (alg.a * here.h + alg.b * central_scalar(rep));

  const double pm = eigenfunction(map, n - 1, x);
  const double p0 = eigenfunction(map, n, x);
  const double pp = eigenfunction(map, n + 1, x);
  const double lhs = r * here.e * pp + diag * p0 + r * e_below * pm;
  return {std::abs(lhs - lambda * p0), std::max({1.0, std::abs(pm), std::abs(p0), std::abs(pp)})};
}

}  // namespace

double recurrence_residual(FamilyTag family, const RepresentationSpec& rep, const AlgebraSpec& alg,
                           double r, double s, long n, double x) {
  const ParameterMap map = parameter_map(family, rep, alg, r, s);
  const double lambda = theorem_eigenvalue(family, map, rep, alg, x);
  const RowResidual row = row_residual(map, lambda, rep, alg, r, s, n, x);
  return row.raw / row.local_scale;
}

double eigenvector_residual(FamilyTag family, const RepresentationSpec& rep,
                            const AlgebraSpec& alg, double r, double s, double x, long n_lo,
                            long n_hi) {
  if (n_lo > n_hi) throw ParameterError("eigenvector_residual: empty row range");
  const ParameterMap map = parameter_map(family, rep, alg, r, s);
  const double lambda = theorem_eigenvalue(family, map, rep, alg, x);
  double worst = 0.0, size = 0.0;
  for (long n = n_lo - 1; n <= n_hi + 1; ++n) size = std::max(size, std::abs(eigenfunction(map, n, x)));
  if (!(size > 0.0)) throw NumericalError("eigenvector_residual: eigenfunction vanishes on the rows");
  for (long n = n_lo; n <= n_hi; ++n)
    worst = std::max(worst, row_residual(map, lambda, rep, alg, r, s, n, x).raw);
  return worst / size;
}

std::vector<double> tracked_spectrum(const TridiagonalOperator& L, std::size_t leading) {
  std::vector<double> ev = eigs_sym_tridiag(L).eigenvalues;
  if (L.lower_exact && L.upper_exact) return ev;
  const std::size_t k = std::min(leading, ev.size());
  if (L.lower_exact) {
    ev.resize(k);
    return ev;
  }
  const double centre = L.diag[L.diag.size() / 2];
  std::stable_sort(ev.begin(), ev.end(), [&](double a, double b) {
    return std::abs(a - centre) < std::abs(b - centre);
  });
  ev.resize(k);
  std::sort(ev.begin(), ev.end());
  return ev;
}

double isospectrality_drift(const Trajectory& traj, const RepresentationSpec& rep,
                            const AlgebraSpec& alg, std::size_t leading) {
  if (traj.size() < 2) return 0.0;
  const TridiagonalOperator L0 = build_L(rep, alg, traj.front().r, traj.front().s);
  const std::vector<double> ref = tracked_spectrum(L0, leading);
  double worst = 0.0;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const TridiagonalOperator L = build_L(rep, alg, traj[i].r, traj[i].s);
    std::vector<double> ev;
    if (L.lower_exact && L.upper_exact) {
      ev = eigs_sym_tridiag(L).eigenvalues;
    } else if (L.lower_exact) {
      ev = eigs_sym_tridiag(L).eigenvalues;
      ev.resize(ref.size());
    } else {
      // Match each reference eigenvalue to the nearest one at time t.
      const std::vector<double> all = eigs_sym_tridiag(L).eigenvalues;
      for (double v : ref) {
        const auto it = std::lower_bound(all.begin(), all.end(), v);
        double best = std::numeric_limits<double>::infinity();
        if (it != all.end()) best = *it;
        if (it != all.begin() && std::abs(*(it - 1) - v) < std::abs(best - v)) best = *(it - 1);
        ev.push_back(best);
      }
    }
    for (std::size_t k = 0; k < ref.size(); ++k) worst = std::max(worst, std::abs(ev[k] - ref[k]));
  }
  return worst;
}

double degenerate_e2_check(double k, double r, int points) {
  if (points < 1) throw ParameterError("degenerate_e2_check: points must be >= 1");
  double worst = 0.0;
  for (int j = 0; j < points; ++j) {
    const double x = 2.0 * std::numbers::pi * j / points;
    for (int n = -10; n <= 10; ++n) {
      const std::complex<double> lhs =
          k * r * (std::polar(1.0, (n + 1) * x) + std::polar(1.0, (n - 1) * x));
      const std::complex<double> rhs = 2.0 * k * r * std::cos(x) * std::polar(1.0, n * x);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

}  // namespace isoflow
