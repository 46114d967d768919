#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "eigen_oracle.hpp"
#include "gen.hpp"
#include "isoflow/spectral.hpp"

using namespace isoflow;

TEST_SUITE("spectral") {

TEST_CASE("QL solver against Eigen on random tridiagonals (property)") {
  testgen::Gen gen(17);
  for (int k = 0; k < testgen::kCases; ++k) {
    const std::size_t n = static_cast<std::size_t>(gen.integer(1, 30));
    std::vector<double> diag(n), off(n > 0 ? n - 1 : 0);
    for (auto& v : diag) v = gen.uniform(-3, 3);
    for (auto& v : off) v = gen.uniform(-2, 2);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) T(i, i) = diag[i];
    for (std::size_t i = 0; i + 1 < n; ++i) T(i, i + 1) = T(i + 1, i) = off[i];
    const auto dec = eigs_sym_tridiag(diag, off);
    const Eigen::VectorXd ref = oracle::sorted_eigenvalues(T);
    const Eigen::MatrixXd V = oracle::to_eigen(dec.vectors);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(dec.eigenvalues[i] - ref(i)) <= 1e-12 * (1.0 + ref.cwiseAbs().maxCoeff()));
      CHECK(V(0, i) >= 0.0);
      CHECK(dec.weights[i] == doctest::Approx(V(0, i) * V(0, i)));
    }
    CHECK((V.transpose() * V - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::VectorXd lam(n);
    for (std::size_t i = 0; i < n; ++i) lam(i) = dec.eigenvalues[i];
    CHECK((T * V - V * lam.asDiagonal()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + lam.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("su(2) spectrum is 2C(j - x)") {
  testgen::Gen gen(4);
  for (int k = 0; k < 10; ++k) {
    const rep::SU2 rp{0.5 * static_cast<double>(gen.integer(1, 12))};
    const auto alg = AlgebraSpec::su2(gen.uniform(-0.5, 0.5));
    const double r = gen.uniform(0.2, 2.0), s = gen.uniform(-2.0, 2.0);
    const auto ev = eigs_sym_tridiag(build_L(rp, alg, r, s)).eigenvalues;
    const double C = std::hypot(r, s + alg.c_param);
    for (std::size_t i = 0; i < ev.size(); ++i)
      CHECK(ev[i] == doctest::Approx(2.0 * C * (static_cast<double>(i) - rp.j)).epsilon(1e-12));
  }
}

TEST_CASE("eigenfunctions satisfy the recurrence in every family") {
  struct Case {
    FamilyTag f;
    RepresentationSpec rep;
    AlgebraSpec alg;
    double r, s;
    std::vector<double> xs;
    long lo, hi;
  };
  const std::vector<Case> cases = {
      {FamilyTag::Krawtchouk, rep::SU2{3.0}, AlgebraSpec::su2(), 1.0, 0.4, {0, 2, 5, 6}, 0, 6},
      {FamilyTag::Meixner, rep::DiscreteSeriesPlus{0.8, 30}, AlgebraSpec::su11(0.5), 1.0, 2.0,
       {0, 3, 7}, 0, 15},
      {FamilyTag::Laguerre, rep::DiscreteSeriesPlus{0.8, 30}, AlgebraSpec::su11(), 1.5, 1.5,
       {0.3, 2.0, 9.0}, 0, 15},
      {FamilyTag::MeixnerPollaczek, rep::DiscreteSeriesPlus{0.8, 30}, AlgebraSpec::su11(), 2.0,
       -0.5, {-2.0, 0.0, 1.3}, 0, 15},
      {FamilyTag::Charlier, rep::Oscillator{0.3, 1.5, 30}, AlgebraSpec::oscillator(-0.7), 1.2,
       0.4, {0, 1, 6}, 0, 15},
      {FamilyTag::Hermite, rep::Oscillator{0.3, 1.5, 30}, AlgebraSpec::oscillator(), -0.9, 0.4,
       {-2.0, 0.5, 3.0}, 0, 15},
      {FamilyTag::BesselE2, rep::E2{0.7, -20, 20}, AlgebraSpec::e2(1.3), 2.0, 0.0, {-3, 0, 4},
       -10, 10},
      {FamilyTag::MeixnerFunction, rep::PrincipalSeries{0.7, 0.3, -30, 30}, AlgebraSpec::su11(),
       1.0, 1.5, {-4, 0, 5}, -8, 8}};
  for (const auto& c : cases) {
    CAPTURE(family_name(c.f));
    for (double x : c.xs) {
      for (long n = c.lo; n <= c.hi; ++n)
        CHECK(recurrence_residual(c.f, c.rep, c.alg, c.r, c.s, n, x) <= 1e-10);
      CHECK(eigenvector_residual(c.f, c.rep, c.alg, c.r, c.s, x, c.lo, c.hi) <= 1e-11);
    }
  }
}

TEST_CASE("finite su(2) eigenvectors are the Krawtchouk functions") {
  // Route two: normalize the eigenfunction by the weight and compare with QL.
  const rep::SU2 rp{2.5};
  const auto alg = AlgebraSpec::su2();
  const double r = 0.8, s = 0.6;
  const auto map = parameter_map(FamilyTag::Krawtchouk, rp, alg, r, s);
  const auto dec = eigs_sym_tridiag(build_L(rp, alg, r, s));
  for (int x = 0; x <= 5; ++x) {
    const double lambda = theorem_eigenvalue(FamilyTag::Krawtchouk, map, rp, alg, x);
    const auto it = std::min_element(dec.eigenvalues.begin(), dec.eigenvalues.end(),
                                     [&](double a, double b) {
                                       return std::abs(a - lambda) < std::abs(b - lambda);
                                     });
    const std::size_t col = static_cast<std::size_t>(it - dec.eigenvalues.begin());
    const double w = weight(map.params, x);
    double sign = 0.0;
    for (long n = 0; n <= 5; ++n) {
      const double mine = std::sqrt(w) * eigenfunction(map, n, x);
      const double ql = dec.vectors(static_cast<std::size_t>(n), col);
      if (sign == 0.0 && std::abs(ql) > 1e-3) sign = (mine * ql > 0) ? 1.0 : -1.0;
      CHECK(std::abs(sign * mine - ql) <= 1e-12);
    }
  }
}

TEST_CASE("isospectrality along flows") {
  const auto traj =
      integrate(AlgebraSpec::su2(), FlowState{0, 1.0, 0.5}, policy::Toda{}, 1e-3, 1.0);
  CHECK(isospectrality_drift(traj, rep::SU2{2.5}, AlgebraSpec::su2()) <= 1e-8);
  const auto osc = integrate(AlgebraSpec::oscillator(1.0), FlowState{0, 1.0, 0.5},
                             policy::SignedScaled{1, 0.5}, 1e-3, 1.0, 10);
  CHECK(isospectrality_drift(osc, rep::Oscillator{0.5, 1.0, 80}, AlgebraSpec::oscillator(1.0), 3) <=
        1e-6);
}

TEST_CASE("degenerate e(2) case") { CHECK(degenerate_e2_check(1.3, 0.7) <= 1e-13); }

}  // TEST_SUITE
