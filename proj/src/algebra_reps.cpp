#include "isoflow/algebra_reps.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "isoflow/errors.hpp"

namespace isoflow {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_half_integer(double j) {
  const double twice = 2.0 * j;
  return j >= 0.0 && std::abs(twice - std::round(twice)) < 1e-12;
}

}  // namespace

void AlgebraSpec::validate() const {
  if (epsilon != 1 && epsilon != -1)
    throw ParameterError("algebra epsilon must be +1 or -1");
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c_param))
    throw ParameterError("algebra constants must be finite");
}

std::string AlgebraSpec::name() const {
  if (a == 1.0 && b == 0.0) return epsilon > 0 ? "su(2)" : "su(1,1)";
  if (a == 0.0 && b == 1.0 && epsilon > 0) return "b(1)";
  if (a == 0.0 && b == 0.0 && epsilon > 0) return "e(2)";
  std::ostringstream os;
  os << "g(" << a << "," << b << ")" << (epsilon > 0 ? "+" : "-");
  return os.str();
}

void validate(const RepresentationSpec& rep) {
  std::visit(overloaded{
                 [](const rep::SU2& r) {
                   if (!is_half_integer(r.j))
                     throw ParameterError("SU2: j must be a non-negative half-integer");
                 },
                 [](const rep::DiscreteSeriesPlus& r) {
                   if (!(r.k > 0.0)) throw ParameterError("DiscreteSeriesPlus: k must be > 0");
                   if (r.n_max < 0) throw ParameterError("DiscreteSeriesPlus: empty window");
                 },
                 [](const rep::PrincipalSeries& r) {
                   if (!(r.rho > 0.0)) throw ParameterError("PrincipalSeries: rho must be > 0");
                   if (!(r.eps_rep >= 0.0 && r.eps_rep < 1.0))
                     throw ParameterError("PrincipalSeries: eps must lie in [0,1)");
                   if (r.n_max < r.n_min) throw ParameterError("PrincipalSeries: empty window");
                 },
                 [](const rep::Oscillator& r) {
                   if (!(r.k >= 0.0)) throw ParameterError("Oscillator: k must be >= 0");
                   if (!(r.h > 0.0)) throw ParameterError("Oscillator: h must be > 0");
                   if (r.n_max < 0) throw ParameterError("Oscillator: empty window");
                 },
                 [](const rep::E2& r) {
                   if (!(r.k > 0.0)) throw ParameterError("E2: k must be > 0");
                   if (r.n_max < r.n_min) throw ParameterError("E2: empty window");
                 },
             },
             rep);
}

std::string rep_name(const RepresentationSpec& rep) {
  return std::visit(overloaded{
                        [](const rep::SU2&) { return std::string("su2"); },
                        [](const rep::DiscreteSeriesPlus&) { return std::string("discrete_series"); },
                        [](const rep::PrincipalSeries&) { return std::string("principal_series"); },
                        [](const rep::Oscillator&) { return std::string("oscillator"); },
                        [](const rep::E2&) { return std::string("e2"); },
                    },
                    rep);
}

AlgebraSpec natural_algebra(const RepresentationSpec& rep, double c_param) {
  return std::visit(overloaded{
                        [&](const rep::SU2&) { return AlgebraSpec::su2(c_param); },
                        [&](const rep::DiscreteSeriesPlus&) { return AlgebraSpec::su11(c_param); },
                        [&](const rep::PrincipalSeries&) { return AlgebraSpec::su11(c_param); },
                        [&](const rep::Oscillator&) { return AlgebraSpec::oscillator(c_param); },
                        [&](const rep::E2&) { return AlgebraSpec::e2(c_param); },
                    },
                    rep);
}

void check_compatible(const RepresentationSpec& rep, const AlgebraSpec& alg) {
  alg.validate();
  const AlgebraSpec want = natural_algebra(rep, alg.c_param);
  if (want.a != alg.a || want.b != alg.b || want.epsilon != alg.epsilon) {
    throw ConfigurationError("representation " + rep_name(rep) + " belongs to " + want.name() +
                             ", not to " + alg.name());
  }
}

long window_begin(const RepresentationSpec& rep) {
  return std::visit(overloaded{
                        [](const rep::SU2&) { return 0L; },
                        [](const rep::DiscreteSeriesPlus&) { return 0L; },
                        [](const rep::PrincipalSeries& r) { return r.n_min; },
                        [](const rep::Oscillator&) { return 0L; },
                        [](const rep::E2& r) { return r.n_min; },
                    },
                    rep);
}

long window_end(const RepresentationSpec& rep) {
  return std::visit(overloaded{
                        [](const rep::SU2& r) { return std::lround(2.0 * r.j); },
                        [](const rep::DiscreteSeriesPlus& r) { return r.n_max; },
                        [](const rep::PrincipalSeries& r) { return r.n_max; },
                        [](const rep::Oscillator& r) { return r.n_max; },
                        [](const rep::E2& r) { return r.n_max; },
                    },
                    rep);
}

GeneratorCoefficients generator_coefficients(const RepresentationSpec& rep, long n) {
  const double x = static_cast<double>(n);
  return std::visit(
      overloaded{
          [x](const rep::SU2& r) {
            const double twoj = 2.0 * r.j;
            GeneratorCoefficients g;
            g.h = 2.0 * (x - r.j);
            g.e = std::sqrt(std::max(0.0, (x + 1.0) * (twoj - x)));
            g.f = std::sqrt(std::max(0.0, x * (twoj - x + 1.0)));
            return g;
          },
          [x](const rep::DiscreteSeriesPlus& r) {
            GeneratorCoefficients g;
            g.h = 2.0 * (r.k + x);
            g.e = std::sqrt(std::max(0.0, (x + 1.0) * (2.0 * r.k + x)));
            g.f = -std::sqrt(std::max(0.0, x * (2.0 * r.k + x - 1.0)));
            return g;
          },
          [x](const rep::PrincipalSeries& r) {
            // (n+eps-lambda)(n+eps+lambda+1) = (n+eps+1/2)^2 + rho^2 for
            // lambda = -1/2 + i rho.
            const double up = x + r.eps_rep + 0.5;
            const double down = x + r.eps_rep - 0.5;
            GeneratorCoefficients g;
            g.h = 2.0 * (r.eps_rep + x);
            g.e = std::sqrt(up * up + r.rho * r.rho);
            g.f = -std::sqrt(down * down + r.rho * r.rho);
            return g;
          },
          [x](const rep::Oscillator& r) {
            GeneratorCoefficients g;
            g.h = 2.0 * (r.k + x);
            g.e = std::sqrt(r.h * (x + 1.0));
            g.f = std::sqrt(r.h * x);
            return g;
          },
          [x](const rep::E2& r) {
            GeneratorCoefficients g;
            g.h = 2.0 * x;
            g.e = r.k;
            g.f = r.k;
            return g;
          },
      },
      rep);
}

double central_scalar(const RepresentationSpec& rep) {
  if (const auto* osc = std::get_if<rep::Oscillator>(&rep)) return -osc->h;
  return 0.0;
}

namespace {

double h_coefficient(const RepresentationSpec& rep, long n) {
  return generator_coefficients(rep, n).h;
}

struct WindowFlags {
  bool lower_exact;
  bool upper_exact;
};

WindowFlags window_flags(const RepresentationSpec& rep) {
  return std::visit(overloaded{
                        [](const rep::SU2&) { return WindowFlags{true, true}; },
                        [](const rep::DiscreteSeriesPlus&) { return WindowFlags{true, false}; },
                        [](const rep::PrincipalSeries&) { return WindowFlags{false, false}; },
                        [](const rep::Oscillator&) { return WindowFlags{true, false}; },
                        [](const rep::E2&) { return WindowFlags{false, false}; },
                    },
                    rep);
}

}  // namespace

Generators build_generators(const RepresentationSpec& rep) {
  validate(rep);
  const long lo = window_begin(rep);
  const long hi = window_end(rep);
  const std::size_t n = static_cast<std::size_t>(hi - lo + 1);
  const WindowFlags flags = window_flags(rep);

  Generators g;
  g.lower_exact = flags.lower_exact;
  g.upper_exact = flags.upper_exact;
  for (BandedOperator* op : {&g.H, &g.E, &g.F, &g.N}) {
    op->base_index = lo;
    op->diag.assign(n, 0.0);
    op->lower.assign(n > 0 ? n - 1 : 0, 0.0);
    op->upper.assign(n > 0 ? n - 1 : 0, 0.0);
  }
  const double scalar = central_scalar(rep);
  for (std::size_t i = 0; i < n; ++i) {
    const long idx = lo + static_cast<long>(i);
    const GeneratorCoefficients c = generator_coefficients(rep, idx);
    g.H.diag[i] = h_coefficient(rep, idx);
    g.N.diag[i] = scalar;
    if (i + 1 < n) g.E.lower[i] = c.e;
    if (i > 0) g.F.upper[i - 1] = c.f;
  }
  return g;
}

TridiagonalOperator build_L(const RepresentationSpec& rep, const AlgebraSpec& alg, double r,
                            double s) {
  validate(rep);
  check_compatible(rep, alg);
  if (!std::isfinite(r) || !std::isfinite(s)) throw ParameterError("build_L: r, s must be finite");
  const long lo = window_begin(rep);
  const long hi = window_end(rep);
  const std::size_t n = static_cast<std::size_t>(hi - lo + 1);
  const WindowFlags flags = window_flags(rep);
  const double scalar = central_scalar(rep);

  TridiagonalOperator L;
  L.base_index = lo;
  L.lower_exact = flags.lower_exact;
  L.upper_exact = flags.upper_exact;
  L.diag.resize(n);
  L.off.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) {
    const long idx = lo + static_cast<long>(i);
    const double h = h_coefficient(rep, idx);
    L.diag[i] = alg.c_param * h + s * (alg.a * h + alg.b * scalar);
    if (i + 1 < n) L.off[i] = r * generator_coefficients(rep, idx).e;
  }
  return L;
}

SkewTridiagonalOperator build_M(const RepresentationSpec& rep, double u) {
  validate(rep);
  const long lo = window_begin(rep);
  const long hi = window_end(rep);
  const std::size_t n = static_cast<std::size_t>(hi - lo + 1);
  const WindowFlags flags = window_flags(rep);

  SkewTridiagonalOperator M;
  M.base_index = lo;
  M.dim = n;
  M.lower_exact = flags.lower_exact;
  M.upper_exact = flags.upper_exact;
  M.off.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i + 1 < n; ++i)
    M.off[i] = u * generator_coefficients(rep, lo + static_cast<long>(i)).e;
  return M;
}

double lax_residual(const RepresentationSpec& rep, const AlgebraSpec& alg, double r, double s,
                    double u) {
  const TridiagonalOperator L = build_L(rep, alg, r, s);
  const SkewTridiagonalOperator M = build_M(rep, u);
  const std::size_t n = L.size();

  // Flow equations: ds/dt = 2 eps r u, dr/dt = -2 (a s + c) u.
  const double ds = 2.0 * alg.epsilon * r * u;
  const double dr = -2.0 * (alg.a * s + alg.c_param) * u;
  const double scalar = central_scalar(rep);

  auto d = [&](long i) { return (i >= 0 && i < static_cast<long>(n)) ? L.diag[i] : 0.0; };
  auto o = [&](long i) { return (i >= 0 && i + 1 < static_cast<long>(n)) ? L.off[i] : 0.0; };
  auto m = [&](long i) { return (i >= 0 && i + 1 < static_cast<long>(n)) ? M.off[i] : 0.0; };

  double worst = 0.0;
  for (std::size_t row = 0; row < n; ++row) {
    if (!L.row_exact(row)) continue;
    const long i = static_cast<long>(row);
    const long idx = L.base_index + i;
    const double h = h_coefficient(rep, idx);

    // Entries of C = ML - LM on row i.
    const double c_diag = 2.0 * m(i - 1) * o(i - 1) - 2.0 * m(i) * o(i);
    const double c_up = m(i) * (d(i) - d(i + 1));
    const double c_down = m(i - 1) * (d(i - 1) - d(i));
    const double c_up2 = o(i) * m(i + 1) - m(i) * o(i + 1);
    const double c_down2 = o(i - 2) * m(i - 1) - m(i - 2) * o(i - 1);

    const double ldot_diag = ds * (alg.a * h + alg.b * scalar);
    const double e_up = (i + 1 < static_cast<long>(n)) ? generator_coefficients(rep, idx).e : 0.0;
    const double e_down = (i > 0) ? generator_coefficients(rep, idx - 1).e : 0.0;

    worst = std::max(worst, std::abs(ldot_diag - c_diag));
    worst = std::max(worst, std::abs(dr * e_up - c_up));
    worst = std::max(worst, std::abs(dr * e_down - c_down));
    worst = std::max(worst, std::abs(c_up2));
    worst = std::max(worst, std::abs(c_down2));
  }
  return worst;
}

}  // namespace isoflow
