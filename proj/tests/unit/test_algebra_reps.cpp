#include <doctest.h>

#include <Eigen/Dense>

#include "eigen_oracle.hpp"
#include "gen.hpp"
#include "isoflow/algebra_reps.hpp"
#include "isoflow/errors.hpp"

using namespace isoflow;

namespace {

std::vector<RepresentationSpec> sample_reps() {
  return {rep::SU2{0.5},         rep::SU2{3.0},
          rep::DiscreteSeriesPlus{0.75, 12},
          rep::PrincipalSeries{0.7, 0.3, -8, 8},
          rep::Oscillator{0.5, 2.0, 12},
          rep::E2{1.5, -8, 8}};
}

// Largest entry of m restricted to rows and columns 1..n-2.
double interior_max(const Eigen::MatrixXd& m) {
  const long n = m.rows();
  if (n <= 2) return m.cwiseAbs().maxCoeff();
  return m.block(1, 1, n - 2, n - 2).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("algebra_reps") {

TEST_CASE("spin-1 example is a Lax pair to machine precision") {
  CHECK(lax_residual(rep::SU2{1.0}, AlgebraSpec::su2(), 1.0, 0.3, 1.0) <= 1e-13);
}

TEST_CASE("generators satisfy the g(a,b) brackets and the star structure") {
  for (const auto& rp : sample_reps()) {
    CAPTURE(rep_name(rp));
    const AlgebraSpec alg = natural_algebra(rp);
    const Generators g = build_generators(rp);
    const Eigen::MatrixXd H = oracle::to_eigen(g.H.to_dense());
    const Eigen::MatrixXd E = oracle::to_eigen(g.E.to_dense());
    const Eigen::MatrixXd F = oracle::to_eigen(g.F.to_dense());
    const Eigen::MatrixXd N = oracle::to_eigen(g.N.to_dense());
    const bool finite = std::holds_alternative<rep::SU2>(rp);
    auto measure = [&](const Eigen::MatrixXd& m) {
      return finite ? m.cwiseAbs().maxCoeff() : interior_max(m);
    };
    CHECK(measure(E * F - F * E - alg.a * H - alg.b * N) <= 1e-11);
    CHECK(measure(H * E - E * H - 2.0 * E) <= 1e-11);
    CHECK(measure(H * F - F * H + 2.0 * F) <= 1e-11);
    CHECK((E.transpose() - alg.epsilon * F).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((N * E - E * N).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("L and M are assembled from the generators") {
  testgen::Gen gen(11);
  for (const auto& rp : sample_reps()) {
    const AlgebraSpec alg = natural_algebra(rp, gen.uniform(-1, 1));
    const double r = gen.uniform(-2, 2), s = gen.uniform(-2, 2), u = gen.uniform(-2, 2);
    const Generators g = build_generators(rp);
    const Eigen::MatrixXd H = oracle::to_eigen(g.H.to_dense());
    const Eigen::MatrixXd E = oracle::to_eigen(g.E.to_dense());
    const Eigen::MatrixXd N = oracle::to_eigen(g.N.to_dense());
    const Eigen::MatrixXd L_ref =
        alg.c_param * H + s * (alg.a * H + alg.b * N) + r * (E + E.transpose());
    const Eigen::MatrixXd M_ref = u * (E - E.transpose());
    CHECK((oracle::to_eigen(build_L(rp, alg, r, s).to_dense()) - L_ref).cwiseAbs().maxCoeff() <=
          1e-13);
    const Eigen::MatrixXd M = oracle::to_eigen(build_M(rp, u).to_dense());
    CHECK((M - M_ref).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((M + M.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("Lax residual vanishes for random states (property)") {
  testgen::Gen gen(2024);
  for (int k = 0; k < testgen::kCases; ++k) {
    for (const auto& rp : sample_reps()) {
      const AlgebraSpec alg = natural_algebra(rp, gen.uniform(-1, 1));
      const double r = gen.uniform(-2, 2), s = gen.uniform(-2, 2), u = gen.uniform(-2, 2);
      CHECK(lax_residual(rp, alg, r, s, u) <= 1e-12);
    }
  }
}

TEST_CASE("dense commutator agrees with the banded residual") {
  // Independent route: dL/dt from the flow equations against Eigen's [M, L].
  const rep::SU2 rp{2.0};
  const AlgebraSpec alg = AlgebraSpec::su2(0.4);
  const double r = 0.8, s = -0.3, u = 1.1;
  const double ds = 2.0 * alg.epsilon * r * u;
  const double dr = -2.0 * (alg.a * s + alg.c_param) * u;
  const Generators g = build_generators(rp);
  const Eigen::MatrixXd H = oracle::to_eigen(g.H.to_dense());
  const Eigen::MatrixXd E = oracle::to_eigen(g.E.to_dense());
  const Eigen::MatrixXd Ldot = ds * alg.a * H + dr * (E + E.transpose());
  const Eigen::MatrixXd L = oracle::to_eigen(build_L(rp, alg, r, s).to_dense());
  const Eigen::MatrixXd M = oracle::to_eigen(build_M(rp, u).to_dense());
  CHECK((Ldot - (M * L - L * M)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((Ldot - (L * M - M * L)).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("parameter validation and compatibility") {
  CHECK_THROWS_AS(validate(RepresentationSpec{rep::SU2{0.3}}), ParameterError);
  CHECK_THROWS_AS(validate(RepresentationSpec{rep::DiscreteSeriesPlus{-1.0, 10}}), ParameterError);
  CHECK_THROWS_AS(check_compatible(rep::SU2{1.0}, AlgebraSpec::su11()), ConfigurationError);
  CHECK_THROWS_AS(check_compatible(rep::E2{1.0}, AlgebraSpec::oscillator()), ConfigurationError);
  CHECK_NOTHROW(check_compatible(rep::Oscillator{}, AlgebraSpec::oscillator(2.0)));
}

TEST_CASE("window bounds") {
  CHECK(window_begin(rep::SU2{1.5}) == 0);
  CHECK(window_end(rep::SU2{1.5}) == 3);
  CHECK(window_begin(rep::E2{1.0, -5, 7}) == -5);
  CHECK(window_end(rep::E2{1.0, -5, 7}) == 7);
  const auto L = build_L(rep::DiscreteSeriesPlus{1.0, 10}, AlgebraSpec::su11(), 1.0, 2.0);
  CHECK(L.lower_exact);
  CHECK_FALSE(L.upper_exact);
}

}  // TEST_SUITE
