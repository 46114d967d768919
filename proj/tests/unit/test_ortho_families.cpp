#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gen.hpp"
#include "isoflow/errors.hpp"
#include "isoflow/ortho_families.hpp"
#include "isoflow/special.hpp"

using namespace isoflow;

namespace {

// max |sum_x w(x) p_n(x) p_m(x) - delta_nm| over n, m <= top, for a discrete
// measure on the given points.
double discrete_orthonormality(const FamilyParams& f, long top, long x_lo, long x_hi) {
  double worst = 0.0;
  for (long n = 0; n <= top; ++n)
    for (long m = 0; m <= top; ++m) {
      double sum = 0.0;
      for (long x = x_lo; x <= x_hi; ++x)
        sum += weight(f, x) * eval_rec(f, n, x) * eval_rec(f, m, x);
      worst = std::max(worst, std::abs(sum - (n == m ? 1.0 : 0.0)));
    }
  return worst;
}

double continuous_orthonormality(const FamilyParams& f, long top, double lo, double hi, int pts) {
  const auto rule = gauss_legendre(pts, lo, hi);
  double worst = 0.0;
  for (long n = 0; n <= top; ++n)
    for (long m = 0; m <= top; ++m) {
      double sum = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = rule.nodes[i];
        sum += rule.weights[i] * weight(f, x) * eval_rec(f, n, x) * eval_rec(f, m, x);
      }
      worst = std::max(worst, std::abs(sum - (n == m ? 1.0 : 0.0)));
    }
  return worst;
}

}  // namespace

TEST_SUITE("ortho_families") {

TEST_CASE("orthonormality of the discrete families") {
  CHECK(discrete_orthonormality(fam::Krawtchouk{0.3, 12}, 12, 0, 12) <= 1e-12);
  CHECK(discrete_orthonormality(fam::Meixner{1.7, 0.3}, 8, 0, 200) <= 1e-12);
  CHECK(discrete_orthonormality(fam::Charlier{2.5}, 8, 0, 120) <= 1e-12);
}

TEST_CASE("orthonormality of the continuous families") {
  CHECK(continuous_orthonormality(fam::Laguerre{2.0, 1.5}, 6, 0.0, 150.0, 300) <= 1e-10);
  CHECK(continuous_orthonormality(fam::Hermite{0.4, 1.3}, 6, -20.0, 20.0, 200) <= 1e-10);
  CHECK(continuous_orthonormality(fam::MeixnerPollaczek{1.2, 1.1}, 5, -40.0, 40.0, 600) <= 1e-10);
}

TEST_CASE("recurrence and hypergeometric routes agree (property)") {
  testgen::Gen gen(99);
  for (int k = 0; k < testgen::kCases; ++k) {
    const long n = gen.integer(0, 10);
    const std::vector<std::pair<FamilyParams, double>> cases = {
        {fam::Krawtchouk{gen.uniform(0.3, 0.7), 12}, static_cast<double>(gen.integer(0, 12))},
        {fam::Meixner{gen.uniform(0.5, 3.0), gen.uniform(0.1, 0.8)},
         static_cast<double>(gen.integer(0, 20))},
        {fam::Laguerre{gen.uniform(-0.5, 3.0), gen.uniform(0.5, 2.0)}, gen.uniform(0.0, 15.0)},
        {fam::MeixnerPollaczek{gen.uniform(0.3, 2.0), gen.uniform(0.3, 2.8)},
         gen.uniform(-5.0, 5.0)},
        {fam::Charlier{gen.uniform(0.5, 4.0)}, static_cast<double>(gen.integer(0, 15))},
        {fam::Hermite{gen.uniform(-1.0, 1.0), gen.uniform(0.5, 2.0)}, gen.uniform(-4.0, 4.0)}};
    for (const auto& [f, x] : cases) {
      CAPTURE(family_name(tag_of(f)));
      CAPTURE(n);
      CAPTURE(x);
      const auto all = eval_rec_all(f, n, x);
      double size = 1.0;
      for (double v : all) size = std::max(size, std::abs(v));
      CHECK(std::abs(eval_rec(f, n, x) - eval_hyper(f, n, x)) <= 1e-9 * size);
    }
  }
}

TEST_CASE("Krawtchouk stays accurate at lopsided p") {
  // Forward recurrence alone loses about seven digits here.
  const fam::Krawtchouk f{0.9, 19};
  CHECK(discrete_orthonormality(f, 19, 0, 19) <= 1e-12);
  for (long x = 0; x <= 19; ++x) {
    const double top = std::pow(0.9 / 0.1, 9.5) * std::pow(1.0 - 1.0 / 0.9, static_cast<double>(x));
    CHECK(eval_rec(f, 19, x) == doctest::Approx(top).epsilon(1e-12));
  }
}

TEST_CASE("parameter map examples") {
  const auto m = parameter_map(FamilyTag::Meixner, rep::DiscreteSeriesPlus{1.0, 20},
                               AlgebraSpec::su11(), 3.0, 5.0);
  CHECK(m.C == doctest::Approx(4.0));
  CHECK(std::get<fam::Meixner>(m.params).c == doctest::Approx(1.0 / 9.0));
  const auto k = parameter_map(FamilyTag::Krawtchouk, rep::SU2{2.0}, AlgebraSpec::su2(), 3.0, 4.0);
  CHECK(k.C == doctest::Approx(5.0));
  CHECK(std::get<fam::Krawtchouk>(k.params).N == 4);
  // c enters as s + c for su(1,1)
  const auto shifted = parameter_map(FamilyTag::Meixner, rep::DiscreteSeriesPlus{1.0, 20},
                                     AlgebraSpec::su11(1.0), 3.0, 4.0);
  CHECK(shifted.C == doctest::Approx(4.0));
}

TEST_CASE("parameter map rejects the wrong regime or representation") {
  const rep::DiscreteSeriesPlus ds{1.0, 20};
  CHECK_THROWS_AS(parameter_map(FamilyTag::Meixner, ds, AlgebraSpec::su11(), 3.0, 1.0),
                  CaseMismatchError);
  CHECK_THROWS_AS(parameter_map(FamilyTag::MeixnerPollaczek, ds, AlgebraSpec::su11(), 1.0, 3.0),
                  CaseMismatchError);
  CHECK_THROWS_AS(parameter_map(FamilyTag::Laguerre, ds, AlgebraSpec::su11(), 1.0, 1.5),
                  CaseMismatchError);
  CHECK_THROWS_AS(parameter_map(FamilyTag::Charlier, ds, AlgebraSpec::su11(), 1.0, 1.5),
                  ConfigurationError);
  CHECK_THROWS_AS(parameter_map(FamilyTag::Hermite, rep::Oscillator{}, AlgebraSpec::oscillator(1.0),
                                1.0, 0.5),
                  CaseMismatchError);
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(eval_rec(fam::Krawtchouk{1.5, 3}, 1, 0.0), ParameterError);
  CHECK_THROWS_AS(eval_rec(fam::Krawtchouk{0.5, 3}, 4, 0.0), DomainError);
  CHECK_THROWS_AS(eval_rec(fam::BesselE2{1.0}, 1, 0.0), ParameterError);
  CHECK_THROWS_AS(weight(fam::Charlier{1.0}, -1.0), DomainError);
}

}  // TEST_SUITE
