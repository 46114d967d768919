#include "isoflow/ortho_families.hpp"

#include <cmath>
#include <numbers>

#include "isoflow/errors.hpp"
#include "isoflow/special.hpp"

namespace isoflow {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kPi = std::numbers::pi;

bool is_integer(double x) { return std::isfinite(x) && x == std::floor(x); }

// lhs(x) p_n = a_n p_{n+1} + b_n p_n + a_{n-1} p_{n-1}
struct Jacobi {
  double lhs = 0.0;
  virtual double a(long n) const = 0;
  virtual double b(long n) const = 0;
  virtual ~Jacobi() = default;
};

struct KrawtchoukRec : Jacobi {
  double p, q, N;
  KrawtchoukRec(const fam::Krawtchouk& f, double x)
      : p(f.p), q(1.0 - f.p), N(static_cast<double>(f.N)) {
    lhs = (0.5 * N - x) / std::sqrt(p * q);
  }
  double a(long n) const override { return std::sqrt((n + 1.0) * (N - n)); }
  double b(long n) const override { return (p - 0.5) * (2.0 * n - N) / std::sqrt(p * q); }
};

struct MeixnerRec : Jacobi {
  double beta, c;
  MeixnerRec(const fam::Meixner& f, double x) : beta(f.beta), c(f.c) {
    lhs = (1.0 - c) * (x + 0.5 * beta) / std::sqrt(c);
  }
  double a(long n) const override { return std::sqrt((n + 1.0) * (n + beta)); }
  double b(long n) const override { return (1.0 + c) * (n + 0.5 * beta) / std::sqrt(c); }
};

struct LaguerreRec : Jacobi {
  double alpha;
  LaguerreRec(const fam::Laguerre& f, double x) : alpha(f.alpha) { lhs = x / f.scale; }
  double a(long n) const override { return std::sqrt((n + alpha + 1.0) * (n + 1.0)); }
  double b(long n) const override { return 2.0 * n + alpha + 1.0; }
};

struct MeixnerPollaczekRec : Jacobi {
  double lambda, phi;
  MeixnerPollaczekRec(const fam::MeixnerPollaczek& f, double x) : lambda(f.lambda), phi(f.phi) {
    lhs = 2.0 * x * std::sin(phi);
  }
  double a(long n) const override { return std::sqrt((n + 1.0) * (n + 2.0 * lambda)); }
  double b(long n) const override { return -2.0 * (n + lambda) * std::cos(phi); }
};

struct CharlierRec : Jacobi {
  double aa;
  CharlierRec(const fam::Charlier& f, double x) : aa(f.a) { lhs = -x; }
  double a(long n) const override { return std::sqrt(aa * (n + 1.0)); }
  double b(long n) const override { return -(n + aa); }
};

struct HermiteRec : Jacobi {
  HermiteRec(const fam::Hermite& f, double x) { lhs = std::sqrt(2.0) * (x + f.shift) / f.scale; }
  double a(long n) const override { return std::sqrt(n + 1.0); }
  double b(long) const override { return 0.0; }
};

std::vector<double> run_recurrence(const Jacobi& J, long n) {
  std::vector<double> p(static_cast<std::size_t>(n + 1));
  p[0] = 1.0;
  double prev = 0.0;
  for (long k = 0; k < n; ++k) {
    const double ak = J.a(k);
    const double back = k > 0 ? J.a(k - 1) * prev : 0.0;
    prev = p[k];
    p[k + 1] = ((J.lhs - J.b(k)) * p[k] - back) / ak;
  }
  return p;
}

// At a spectral point x in {0..N} the forward recurrence loses accuracy once
// p_n enters its decaying tail. There we run the recurrence downwards from the
// closed form p_N(x) = (p/q)^{N/2} (1 - 1/p)^x and switch at the peak of the
// forward values.
std::vector<double> krawtchouk_two_sided(const fam::Krawtchouk& f, double x, long n) {
  const KrawtchoukRec J(f, x);
  const long N = f.N;
  std::vector<double> fwd = run_recurrence(J, N);
  std::size_t peak = 0;
  for (std::size_t k = 1; k < fwd.size(); ++k)
    if (std::abs(fwd[k]) > std::abs(fwd[peak])) peak = k;
  const long join = static_cast<long>(peak);
  if (join < n) {
    const double q = 1.0 - f.p;
    const double log_top = 0.5 * N * std::log(f.p / q) + x * std::log(q / f.p);
    std::vector<double> bwd(static_cast<std::size_t>(N + 1), 0.0);
    bwd[N] = (static_cast<long>(x) % 2 ? -1.0 : 1.0) * std::exp(log_top);
    for (long k = N; k > join; --k) {
      const double ahead = k < N ? J.a(k) * bwd[k + 1] : 0.0;
      bwd[k - 1] = ((J.lhs - J.b(k)) * bwd[k] - ahead) / J.a(k - 1);
    }
    for (long k = join + 1; k <= N; ++k) fwd[k] = bwd[k];
  }
  fwd.resize(static_cast<std::size_t>(n + 1));
  return fwd;
}

}  // namespace

FamilyTag tag_of(const FamilyParams& params) {
  return std::visit(overloaded{
                        [](const fam::Krawtchouk&) { return FamilyTag::Krawtchouk; },
                        [](const fam::Meixner&) { return FamilyTag::Meixner; },
                        [](const fam::Laguerre&) { return FamilyTag::Laguerre; },
                        [](const fam::MeixnerPollaczek&) { return FamilyTag::MeixnerPollaczek; },
                        [](const fam::Charlier&) { return FamilyTag::Charlier; },
                        [](const fam::Hermite&) { return FamilyTag::Hermite; },
                        [](const fam::BesselE2&) { return FamilyTag::BesselE2; },
                        [](const fam::MeixnerFunction&) { return FamilyTag::MeixnerFunction; },
                    },
                    params);
}

void validate(const FamilyParams& params) {
  std::visit(
      overloaded{
          [](const fam::Krawtchouk& f) {
            if (!(f.p > 0.0 && f.p < 1.0)) throw ParameterError("Krawtchouk: p must lie in (0,1)");
            if (f.N < 0) throw ParameterError("Krawtchouk: N must be >= 0");
          },
          [](const fam::Meixner& f) {
            if (!(f.beta > 0.0)) throw ParameterError("Meixner: beta must be > 0");
            if (!(f.c > 0.0 && f.c < 1.0)) throw ParameterError("Meixner: c must lie in (0,1)");
          },
          [](const fam::Laguerre& f) {
            if (!(f.alpha > -1.0)) throw ParameterError("Laguerre: alpha must be > -1");
            if (!(f.scale > 0.0)) throw ParameterError("Laguerre: scale must be > 0");
          },
          [](const fam::MeixnerPollaczek& f) {
            if (!(f.lambda > 0.0)) throw ParameterError("Meixner-Pollaczek: lambda must be > 0");
            if (!(f.phi > 0.0 && f.phi < kPi))
              throw ParameterError("Meixner-Pollaczek: phi must lie in (0,pi)");
          },
          [](const fam::Charlier& f) {
            if (!(f.a > 0.0)) throw ParameterError("Charlier: a must be > 0");
          },
          [](const fam::Hermite& f) {
            if (!(f.scale != 0.0) || !std::isfinite(f.scale) || !std::isfinite(f.shift))
              throw ParameterError("Hermite: scale must be finite and nonzero");
          },
          [](const fam::BesselE2& f) {
            if (!std::isfinite(f.z)) throw ParameterError("Bessel: z must be finite");
          },
          [](const fam::MeixnerFunction& f) {
            if (!(f.rho > 0.0)) throw ParameterError("Meixner function: rho must be > 0");
            if (!(f.eps_rep >= 0.0 && f.eps_rep < 1.0))
              throw ParameterError("Meixner function: eps must lie in [0,1)");
            if (!(f.c > 0.0 && f.c < 1.0))
              throw ParameterError("Meixner function: c must lie in (0,1)");
          },
      },
      params);
}

std::vector<double> eval_rec_all(const FamilyParams& params, long n, double x) {
  validate(params);
  if (n < 0) throw ParameterError("eval_rec: n must be >= 0");
  return std::visit(
      overloaded{
          [&](const fam::Krawtchouk& f) {
            if (n > f.N) throw DomainError("Krawtchouk: degree exceeds N");
            if (is_integer(x) && x >= 0.0 && x <= static_cast<double>(f.N))
              return krawtchouk_two_sided(f, x, n);
            return run_recurrence(KrawtchoukRec(f, x), n);
          },
          [&](const fam::Meixner& f) { return run_recurrence(MeixnerRec(f, x), n); },
          [&](const fam::Laguerre& f) { return run_recurrence(LaguerreRec(f, x), n); },
          [&](const fam::MeixnerPollaczek& f) {
            return run_recurrence(MeixnerPollaczekRec(f, x), n);
          },
          [&](const fam::Charlier& f) { return run_recurrence(CharlierRec(f, x), n); },
          [&](const fam::Hermite& f) { return run_recurrence(HermiteRec(f, x), n); },
          [&](const fam::BesselE2&) -> std::vector<double> {
            throw ParameterError("eval_rec: Bessel functions are not a polynomial family");
          },
          [&](const fam::MeixnerFunction&) -> std::vector<double> {
            throw ParameterError("eval_rec: Meixner functions are not a polynomial family");
          },
      },
      params);
}

double eval_rec(const FamilyParams& params, long n, double x) {
  return eval_rec_all(params, n, x).back();
}

double eval_hyper(const FamilyParams& params, long n, double x) {
  validate(params);
  if (n < 0) throw ParameterError("eval_hyper: n must be >= 0");
  const double nn = static_cast<double>(n);
  return std::visit(
      overloaded{
          [&](const fam::Krawtchouk& f) {
            if (n > f.N) throw DomainError("Krawtchouk: degree exceeds N");
            const double N = static_cast<double>(f.N);
            // 2F1(-n, -x; -N; 1/p)
            double term = 1.0, sum = 1.0;
            for (long k = 0; k < n; ++k) {
              term *= (k - nn) * (k - x) / ((k - N) * (k + 1.0)) / f.p;
              sum += term;
            }
            const double binom = std::exp(std::lgamma(N + 1.0) - std::lgamma(nn + 1.0) -
                                          std::lgamma(N - nn + 1.0));
            return std::pow(f.p / (1.0 - f.p), 0.5 * nn) * std::sqrt(binom) * sum;
          },
          [&](const fam::Meixner& f) {
            // 2F1(-n, -x; beta; 1 - 1/c)
            const double z = 1.0 - 1.0 / f.c;
            double term = 1.0, sum = 1.0, norm = 1.0;
            for (long k = 0; k < n; ++k) {
              term *= (k - nn) * (k - x) / ((f.beta + k) * (k + 1.0)) * z;
              sum += term;
              norm *= (f.beta + k) / (k + 1.0) * f.c;
            }
            return ((n % 2) ? -1.0 : 1.0) * std::sqrt(norm) * sum;
          },
          [&](const fam::Laguerre& f) {
            // 1F1(-n; alpha+1; y)
            const double y = x / f.scale;
            double term = 1.0, sum = 1.0, norm = 1.0;
            for (long k = 0; k < n; ++k) {
              term *= (k - nn) / ((f.alpha + 1.0 + k) * (k + 1.0)) * y;
              sum += term;
              norm *= (f.alpha + 1.0 + k) / (k + 1.0);
            }
            return ((n % 2) ? -1.0 : 1.0) * std::sqrt(norm) * sum;
          },
          [&](const fam::MeixnerPollaczek& f) {
            // e^{i n phi} 2F1(-n, lambda + i x; 2 lambda; 1 - e^{-2 i phi})
            const cplx w = 1.0 - std::exp(cplx(0.0, -2.0 * f.phi));
            const cplx bx(f.lambda, x);
            cplx term = 1.0, sum = 1.0;
            double norm = 1.0, mass = 1.0;
            for (long k = 0; k < n; ++k) {
              term *= (k - nn) * (bx + static_cast<double>(k)) / ((2.0 * f.lambda + k) * (k + 1.0)) * w;
              sum += term;
              mass += std::abs(term);
              norm *= (2.0 * f.lambda + k) / (k + 1.0);
            }
            const cplx val = std::exp(cplx(0.0, nn * f.phi)) * std::sqrt(norm) * sum;
            // The series cancels for large n; judge the residue against the
            // size of its terms.
            if (std::abs(val.imag()) > 1e-12 * std::max(1.0, std::sqrt(norm) * mass))
              throw NumericalError("Meixner-Pollaczek: imaginary residue above 1e-12");
            return val.real();
          },
          [&](const fam::Charlier& f) {
            // 2F0(-n, -x; ; -1/a)
            double term = 1.0, sum = 1.0, norm = 1.0;
            for (long k = 0; k < n; ++k) {
              term *= (k - nn) * (k - x) / (k + 1.0) * (-1.0 / f.a);
              sum += term;
              norm *= f.a / (k + 1.0);
            }
            return std::sqrt(norm) * sum;
          },
          [&](const fam::Hermite& f) {
            // (sqrt2 y)^n / sqrt(n!) 2F0(-n/2, -(n-1)/2; ; -1/y^2), expanded
            // as a polynomial in y so that y = 0 is allowed.
            const double y = (x + f.shift) / f.scale;
            double coeff = 1.0, sum = 0.0;
            for (long k = 0; 2 * k <= n; ++k) {
              if (k > 0) coeff *= (k - 1 - 0.5 * nn) * (k - 1 - 0.5 * (nn - 1.0)) / k * (-1.0);
              sum += coeff * std::pow(y, static_cast<double>(n - 2 * k));
            }
            const double pref = std::pow(std::sqrt(2.0), nn) / std::exp(0.5 * std::lgamma(nn + 1.0));
            return pref * sum;
          },
          [&](const fam::BesselE2&) -> double {
            throw ParameterError("eval_hyper: Bessel functions are not a polynomial family");
          },
          [&](const fam::MeixnerFunction&) -> double {
            throw ParameterError("eval_hyper: Meixner functions are not a polynomial family");
          },
      },
      params);
}

double weight(const FamilyParams& params, double x) {
  validate(params);
  return std::visit(
      overloaded{
          [&](const fam::Krawtchouk& f) {
            const double N = static_cast<double>(f.N);
            if (!is_integer(x) || x < 0.0 || x > N)
              throw DomainError("Krawtchouk weight: x must be an integer in [0,N]");
            return std::exp(std::lgamma(N + 1.0) - std::lgamma(x + 1.0) - std::lgamma(N - x + 1.0) +
                            x * std::log(f.p) + (N - x) * std::log1p(-f.p));
          },
          [&](const fam::Meixner& f) {
            if (!is_integer(x) || x < 0.0)
              throw DomainError("Meixner weight: x must be a non-negative integer");
            return std::exp(std::lgamma(f.beta + x) - std::lgamma(f.beta) - std::lgamma(x + 1.0) +
                            x * std::log(f.c) + f.beta * std::log1p(-f.c));
          },
          [&](const fam::Laguerre& f) {
            const double y = x / f.scale;
            if (!(y >= 0.0)) throw DomainError("Laguerre weight: x must be >= 0");
            if (y == 0.0) {
              if (f.alpha > 0.0) return 0.0;
              if (f.alpha < 0.0) throw DomainError("Laguerre weight: singular at 0 for alpha < 0");
              return 1.0 / f.scale;
            }
            return std::exp(f.alpha * std::log(y) - y - std::lgamma(f.alpha + 1.0)) / f.scale;
          },
          [&](const fam::MeixnerPollaczek& f) {
            if (!std::isfinite(x)) throw DomainError("Meixner-Pollaczek weight: x must be finite");
            const double lg = complex_log_gamma(cplx(f.lambda, x)).real();
            return std::exp(2.0 * f.lambda * std::log(2.0 * std::sin(f.phi)) - std::log(2.0 * kPi) -
                            std::lgamma(2.0 * f.lambda) + (2.0 * f.phi - kPi) * x + 2.0 * lg);
          },
          [&](const fam::Charlier& f) {
            if (!is_integer(x) || x < 0.0)
              throw DomainError("Charlier weight: x must be a non-negative integer");
            return std::exp(x * std::log(f.a) - f.a - std::lgamma(x + 1.0));
          },
          [&](const fam::Hermite& f) {
            if (!std::isfinite(x)) throw DomainError("Hermite weight: x must be finite");
            const double y = (x + f.shift) / f.scale;
            return std::exp(-y * y) / (std::sqrt(kPi) * std::abs(f.scale));
          },
          [&](const fam::BesselE2&) {
            if (!is_integer(x)) throw DomainError("Bessel weight: x must be an integer");
            return 1.0;
          },
          [&](const fam::MeixnerFunction& f) {
            if (!is_integer(x)) throw DomainError("Meixner function weight: x must be an integer");
            return meixner_function_weight(static_cast<long>(x), f.rho, f.eps_rep, f.c);
          },
      },
      params);
}

namespace {

int sign_of(double v) { return v < 0.0 ? -1 : +1; }

template <class Rep>
const Rep& require_rep(const RepresentationSpec& rep, FamilyTag family) {
  const Rep* p = std::get_if<Rep>(&rep);
  if (!p)
    throw ConfigurationError(family_name(family) + " does not diagonalize L in the " +
                             rep_name(rep) + " representation");
  return *p;
}

}  // namespace

ParameterMap parameter_map(FamilyTag family, const RepresentationSpec& rep, const AlgebraSpec& alg,
                           double r, double s) {
  validate(rep);
  check_compatible(rep, alg);
  if (!std::isfinite(r) || !std::isfinite(s)) throw ParameterError("parameter_map: r, s must be finite");
  // For a = 1 the term cH merges into sH.
  const double se = s + (alg.a == 1.0 ? alg.c_param : 0.0);
  const double ar = std::abs(r);
  const double tol = 1e-12 * std::max({1.0, std::abs(se), ar});
  ParameterMap m;
  m.degree_sign = sign_of(r);

  switch (family) {
    case FamilyTag::Krawtchouk: {
      const auto& su2 = require_rep<rep::SU2>(rep, family);
      if (ar == 0.0) throw CaseMismatchError("Krawtchouk case needs r != 0");
      m.C = std::hypot(se, r);
      m.params = fam::Krawtchouk{0.5 + se / (2.0 * m.C), std::lround(2.0 * su2.j)};
      break;
    }
    case FamilyTag::Meixner: {
      const auto& ds = require_rep<rep::DiscreteSeriesPlus>(rep, family);
      if (!(ar > 0.0 && se > ar + tol))
        throw CaseMismatchError("Meixner case needs s^2 - r^2 > 0 with s > 0");
      m.C = std::sqrt((se - ar) * (se + ar));
      m.params = fam::Meixner{2.0 * ds.k, std::exp(-2.0 * std::acosh(se / ar))};
      break;
    }
    case FamilyTag::Laguerre: {
      const auto& ds = require_rep<rep::DiscreteSeriesPlus>(rep, family);
      if (!(ar > 0.0 && std::abs(se - ar) <= 1e-9 * std::max(1.0, ar)))
        throw CaseMismatchError("Laguerre case needs s = |r| > 0");
      m.C = 0.0;
      m.params = fam::Laguerre{2.0 * ds.k - 1.0, ar};
      break;
    }
    case FamilyTag::MeixnerPollaczek: {
      const auto& ds = require_rep<rep::DiscreteSeriesPlus>(rep, family);
      if (!(ar > 0.0 && std::abs(se) < ar - tol))
        throw CaseMismatchError("Meixner-Pollaczek case needs s^2 - r^2 < 0");
      m.C = std::sqrt((ar - se) * (ar + se));
      m.params = fam::MeixnerPollaczek{ds.k, std::acos(se / ar)};
      m.degree_sign = -sign_of(r);
      break;
    }
    case FamilyTag::Charlier: {
      const auto& osc = require_rep<rep::Oscillator>(rep, family);
      const double c = alg.c_param;
      if (c == 0.0) throw CaseMismatchError("Charlier case needs c != 0");
      if (ar == 0.0) throw CaseMismatchError("Charlier case needs r != 0");
      m.C = r * r / (2.0 * c) + s;
      m.params = fam::Charlier{osc.h * r * r / (4.0 * c * c)};
      m.degree_sign = -sign_of(r / c);
      break;
    }
    case FamilyTag::Hermite: {
      const auto& osc = require_rep<rep::Oscillator>(rep, family);
      if (alg.c_param != 0.0) throw CaseMismatchError("Hermite case needs c = 0");
      if (ar == 0.0) throw CaseMismatchError("Hermite case needs r != 0");
      m.C = 0.0;
      m.params = fam::Hermite{osc.h * s, r * std::sqrt(2.0 * osc.h)};
      m.degree_sign = +1;
      break;
    }
    case FamilyTag::BesselE2: {
      const auto& e2 = require_rep<rep::E2>(rep, family);
      if (alg.c_param == 0.0)
        throw CaseMismatchError("Bessel case needs c != 0 (c = 0 is the degenerate cosine case)");
      m.C = alg.c_param;
      m.params = fam::BesselE2{e2.k * r / alg.c_param};
      m.degree_sign = +1;
      break;
    }
    case FamilyTag::MeixnerFunction: {
      const auto& ps = require_rep<rep::PrincipalSeries>(rep, family);
      if (!(ar > 0.0 && se > ar + tol))
        throw CaseMismatchError("Meixner function case needs s^2 - r^2 > 0 with s > 0");
      m.C = std::sqrt((se - ar) * (se + ar));
      m.params = fam::MeixnerFunction{ps.rho, ps.eps_rep, std::exp(-2.0 * std::acosh(se / ar))};
      break;
    }
  }
  validate(m.params);
  return m;
}

}  // namespace isoflow
