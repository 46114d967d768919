#include "isoflow/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "isoflow/errors.hpp"

namespace isoflow {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

// log Gamma for Re z >= 1/2.
cplx lanczos_log_gamma(cplx z) {
  z -= 1.0;
  cplx x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const cplx t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// log sin(pi z) for Im z >= 0 without overflow at large Im z.
cplx log_sin_pi(cplx z) {
  if (z.imag() < 10.0) return std::log(std::sin(kPi * z));
  // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z})
  const cplx i(0.0, 1.0);
  return std::log(0.5 * i) - i * kPi * z + std::log(1.0 - std::exp(2.0 * i * kPi * z));
}

}  // namespace

cplx complex_log_gamma(cplx z) {
  if (is_nonpositive_integer(z)) throw PoleError("log Gamma: pole at non-positive integer");
  if (z.imag() < 0.0) return std::conj(complex_log_gamma(std::conj(z)));
  if (z.real() >= 0.5) return lanczos_log_gamma(z);
  // Gamma(z) Gamma(1-z) = pi / sin(pi z)
  return std::log(kPi) - log_sin_pi(z) - lanczos_log_gamma(1.0 - z);
}

cplx regularized_2f1(cplx a, cplx b, cplx c, double z, bool allow_pfaff) {
  using lcplx = std::complex<long double>;
  if (allow_pfaff && z <= -0.75) {
    const double w = z / (z - 1.0);
    const cplx pref = std::exp(-a * std::log1p(-z));
    return pref * regularized_2f1(a, c - b, c, w, false);
  }

  auto terminates = [](cplx p) { return is_nonpositive_integer(p); };
  const bool finite_sum = terminates(a) || terminates(b);
  if (!finite_sum && std::abs(z) >= 1.0)
    throw DomainError("regularized 2F1: |z| >= 1 outside the series domain");

  // First index with nonzero 1/Gamma(c+k).
  long k0 = 0;
  lcplx term;
  if (is_nonpositive_integer(c)) {
    k0 = 1 - static_cast<long>(c.real());
    term = 1.0L;
    for (long k = 0; k < k0; ++k) {
      term *= (lcplx(a) + static_cast<long double>(k)) * (lcplx(b) + static_cast<long double>(k)) *
              static_cast<long double>(z) / static_cast<long double>(k + 1);
    }
    // Gamma(c + k0) = Gamma(1) = 1.
  } else {
    term = lcplx(std::exp(-complex_log_gamma(c)));
  }

  lcplx sum = term;
  const lcplx la(a), lb(b), lc(c);
  const long double lz = z;
  int small_run = 0;
  for (long k = k0; k < k0 + 10000; ++k) {
    const long double kk = static_cast<long double>(k);
    term *= (la + kk) * (lb + kk) * lz / ((lc + kk) * (kk + 1.0L));
    sum += term;
    if (term == lcplx(0.0L)) {
      if (finite_sum) return cplx(sum);
      ++small_run;
    } else if (std::abs(term) <= 1e-19L * std::abs(sum)) {
      ++small_run;
    } else {
      small_run = 0;
    }
    if (small_run >= 3) return cplx(sum);
  }
  throw PrecisionError("regularized 2F1: series did not converge in 10^4 terms");
}

BesselValue bessel_j_checked(long n, double z) {
  BesselValue out;
  if (z == 0.0) {
    out.value = n == 0 ? 1.0 : 0.0;
    return out;
  }
  const long m = std::labs(n);
  double sign = 1.0;
  if (n < 0 && (m % 2 == 1)) sign = -sign;
  if (z < 0.0) {
    z = -z;
    if (m % 2 == 1) sign = -sign;
  }

  // Start well past max(|n|, z), where J_k(z) has decayed below double precision.
  const long top = std::max({m, static_cast<long>(std::ceil(z)), 1L});
  long start =
      top + 20 + static_cast<long>(std::ceil(std::sqrt(160.0 * static_cast<double>(top))));
  if (start % 2 == 1) ++start;

  // j_{k-1} = (2k/z) j_k - j_{k+1}, from j_{start+1} = 0, j_start = tiny.
  double jp1 = 0.0;
  double j = 1e-30;
  double norm = 0.0;  // j_0 + 2 sum j_{2k}
  double target = 0.0;
  bool have_target = false;
  for (long k = start; k >= 1; --k) {
    const double jm1 = (2.0 * static_cast<double>(k) / z) * j - jp1;
    jp1 = j;
    j = jm1;  // now j = j_{k-1}
    const long idx = k - 1;
    if (idx == m) {
      target = j;
      have_target = true;
    }
    if (idx > 0 && idx % 2 == 0) norm += 2.0 * j;
    if (std::abs(j) > 1e250) {
      j *= 1e-250;
      jp1 *= 1e-250;
      norm *= 1e-250;
      target *= 1e-250;
    }
  }
  norm += j;
  out.value = have_target ? sign * target / norm : 0.0;
  if (out.value == 0.0 || std::abs(out.value) < 1e-300) {
    out.underflow = true;
    out.value = 0.0;
  }
  return out;
}

double bessel_j(long n, double z) { return bessel_j_checked(n, z).value; }

double meixner_function(long n, long x, double rho, double eps_rep, double c) {
  if (!(c > 0.0 && c < 1.0)) throw ParameterError("Meixner function: c must lie in (0,1)");
  if (!(rho > 0.0)) throw ParameterError("Meixner function: rho must be > 0");
  const double nn = static_cast<double>(n);
  // a = n + eps + lambda + 1 and b = n + eps - lambda are complex conjugates.
  const cplx a(nn + eps_rep + 0.5, rho);
  const cplx b(nn + eps_rep + 0.5, -rho);
  const cplx cc(nn + 1.0 - static_cast<double>(x), 0.0);
  const double z = c / (c - 1.0);

  // sqrt(Gamma(a) Gamma(b)) = |Gamma(a)|.
  const double log_pref = nn * std::log(std::sqrt(c) / (1.0 - c)) +
                          complex_log_gamma(a).real() - eps_rep * std::log1p(-c);
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;  // (c-1)^n < 0 for odd n

  const cplx series = regularized_2f1(a, b, cc, z);
  const double scale = std::max(std::abs(series), 1e-300);
  if (std::abs(series.imag()) > 1e-8 * scale)
    throw NumericalError("Meixner function: imaginary residue above 1e-8");
  return sign * std::exp(log_pref) * series.real();
}

double meixner_function_weight(long x, double rho, double eps_rep, double c) {
  const cplx g(static_cast<double>(x) + eps_rep + 0.5, rho);
  // Gamma(x+eps+lambda+1) Gamma(x+eps-lambda) = |Gamma(g)|^2.
  return std::exp(-static_cast<double>(x) * std::log(c) - 2.0 * complex_log_gamma(g).real());
}

QuadratureRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw ParameterError("gauss_legendre: n must be >= 1");
  QuadratureRule q;
  q.nodes.resize(n);
  q.weights.resize(n);
  const double mid = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes[i] = mid - half * x;
    q.nodes[n - 1 - i] = mid + half * x;
    q.weights[i] = half * w;
    q.weights[n - 1 - i] = half * w;
  }
  return q;
}

}  // namespace isoflow
