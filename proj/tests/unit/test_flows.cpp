#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gen.hpp"
#include "isoflow/errors.hpp"
#include "isoflow/flows.hpp"

using namespace isoflow;

namespace {

FlowState at(double r, double s) { return FlowState{0.0, r, s}; }

double endpoint_s(double dt) {
  return integrate(AlgebraSpec::su2(), at(1.0, 0.0), policy::Toda{}, dt, 1.0).back().s;
}

}  // namespace

TEST_SUITE("flows") {

TEST_CASE("su(2) Toda orbit from (1,0) is tanh/sech") {
  const auto traj = integrate(AlgebraSpec::su2(), at(1.0, 0.0), policy::Toda{}, 1e-3, 0.5);
  REQUIRE(traj.back().t == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(traj.back().s - std::tanh(1.0)) <= 1e-9);
  CHECK(std::abs(traj.back().r - 1.0 / std::cosh(1.0)) <= 1e-9);
  for (const auto& smp : traj) {
    CHECK(std::abs(smp.s - std::tanh(2.0 * smp.t)) <= 1e-9);
    CHECK(smp.u == smp.r);
  }
}

TEST_CASE("RK4 is fourth order: Richardson factor >= 12") {
  const double e1 = std::abs(endpoint_s(0.05) - endpoint_s(0.025));
  const double e2 = std::abs(endpoint_s(0.025) - endpoint_s(0.0125));
  CHECK(e1 / e2 >= 12.0);
}

TEST_CASE("invariant is conserved for random states (property)") {
  testgen::Gen gen(7);
  const AlgebraSpec algs[] = {AlgebraSpec::su2(0.2), AlgebraSpec::oscillator(0.7),
                              AlgebraSpec::e2(0.5)};
  for (int k = 0; k < testgen::kCases; ++k) {
    const AlgebraSpec& alg = algs[k % 3];
    const FlowState s0 = at(gen.uniform(0.2, 1.5), gen.uniform(-1.0, 1.0));
    const auto traj = integrate(alg, s0, policy::SignedScaled{gen.sign(), 0.5}, 1e-2, 1.0);
    const double I0 = invariant(alg, s0);
    for (const auto& smp : traj)
      CHECK(std::abs(smp.invariant - I0) <= 1e-8 * std::max(1.0, std::abs(I0)));
  }
}

TEST_CASE("flow equations") {
  const AlgebraSpec alg{1.0, 0.0, 0.5, -1};
  const FlowRate rate = flow_rhs(alg, at(2.0, 3.0), 0.25);
  CHECK(rate.ds_dt == doctest::Approx(2.0 * -1 * 2.0 * 0.25));
  CHECK(rate.dr_dt == doctest::Approx(-2.0 * (3.0 + 0.5) * 0.25));
  CHECK(invariant(alg, at(2.0, 3.0)) == doctest::Approx(-4.0 + (3.0 + 1.0) * 3.0));
}

TEST_CASE("sign lemma hypotheses") {
  const auto su11 = AlgebraSpec::su11();
  const UPolicy good = policy::SignedScaled{-1, 0.1};
  const UPolicy bad = policy::SignedScaled{+1, 0.1};
  const auto traj = integrate(su11, at(0.5, 1.0), good, 1e-3, 1.0);
  const auto ok = check_sign_conditions(su11, at(0.5, 1.0), good, traj);
  CHECK(ok.pass);
  CHECK(ok.min_r > 0.0);
  CHECK(ok.min_s > 0.0);
  CHECK_FALSE(check_sign_conditions(su11, at(0.5, 1.0), bad).pass);
  CHECK_FALSE(check_sign_conditions(AlgebraSpec::su2(), at(-0.5, 1.0), policy::Toda{}).pass);
  CHECK(check_sign_conditions(AlgebraSpec::su2(), at(0.5, 1.0), policy::Toda{}).pass);
}

TEST_CASE("modification factor g is constant") {
  const auto traj = integrate(AlgebraSpec::su2(), at(1.0, 0.0), policy::Toda{}, 1e-3, 1.0);
  const auto rep = modification_report(traj, FamilyTag::Krawtchouk);
  CHECK(rep.max_constancy_deviation <= 1e-6);
  CHECK(rep.K_empirical == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(rep.closed_form_max_error <= 1e-8);

  const auto ch = integrate(AlgebraSpec::oscillator(1.0), at(1.0, 0.5),
                            policy::SignedScaled{+1, 0.5}, 1e-3, 1.0);
  CHECK(modification_report(ch, FamilyTag::Charlier).K_empirical ==
        doctest::Approx(-4.0).epsilon(1e-8));
}

TEST_CASE("degenerate ratio is reported") {
  const auto traj = integrate(AlgebraSpec::su2(), at(0.0, 0.5), policy::Toda{}, 1e-2, 0.1);
  CHECK_THROWS_AS(modification_report(traj, FamilyTag::Krawtchouk), DegenerateRatioError);
}

TEST_CASE("policies") {
  const GammaTable tab{{0.0, 1.0}, {1.0, 3.0}};
  CHECK(tab(0.5) == doctest::Approx(2.0));
  CHECK(tab(-1.0) == 1.0);
  CHECK(tab(5.0) == 3.0);
  CHECK(u_of(policy::Toda{}, 0.0, 0.7) == 0.7);
  CHECK(u_of(policy::SignedScaled{-1, tab}, 0.5, 2.0) == doctest::Approx(-4.0));
  CHECK_THROWS_AS(validate(UPolicy{policy::SignedScaled{0, 1.0}}), ParameterError);
  CHECK_THROWS_AS(validate(UPolicy{policy::SignedScaled{1, -1.0}}), ParameterError);
}

TEST_CASE("integrator bookkeeping") {
  const auto traj = integrate(AlgebraSpec::su2(), at(1.0, 0.0), policy::Toda{}, 0.1, 1.0, 3);
  // 10 steps, every third recorded, final step always recorded.
  REQUIRE(traj.size() == 5);
  CHECK(traj[1].t == doctest::Approx(0.3));
  CHECK(traj.back().t == doctest::Approx(1.0));
  CHECK_THROWS_AS(integrate(AlgebraSpec::su2(), at(1.0, 0.0), policy::Toda{}, 0.0, 1.0),
                  ParameterError);
}

TEST_CASE("trajectory csv") {
  std::ostringstream os;
  write_trajectory_csv(os, {{0.0, 1.0, 0.5, 1.0, 1.25}});
  CHECK(os.str() == "t,r,s,u,I\n0,1,0.5,1,1.25\n");
}

}  // TEST_SUITE
