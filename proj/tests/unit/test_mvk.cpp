#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gen.hpp"
#include "isoflow/errors.hpp"
#include "isoflow/mvk.hpp"

using namespace isoflow;

namespace {

double binomial(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

}  // namespace

TEST_SUITE("mvk") {

TEST_CASE("multi-index enumeration") {
  for (std::size_t d = 1; d <= 4; ++d)
    for (int N = 0; N <= 4; ++N) {
      const auto idx = multi_indices(d, N);
      CHECK(idx.size() == static_cast<std::size_t>(binomial(N + static_cast<int>(d), static_cast<int>(d)) + 0.5));
      REQUIRE_FALSE(idx.empty());
      CHECK(idx.front()[0] == N);
      for (const auto& m : idx) {
        int sum = 0;
        for (int v : m) sum += v;
        CHECK(sum == N);
      }
    }
  CHECK(multinomial({2, 0, 1}) == doctest::Approx(3.0));
  CHECK(format_multi_index({2, 0, 1}) == "2-0-1");
}

TEST_CASE("table identities for random chains (property)") {
  testgen::Gen gen(31);
  for (int k = 0; k < 12; ++k) {
    const std::size_t d = static_cast<std::size_t>(gen.integer(1, 3));
    const int N = static_cast<int>(gen.integer(1, 3));
    const auto st = gen.chain(d);
    const auto tab = mvk_table(st, N);
    MultiIndex top(d + 1, 0);
    top[0] = N;
    for (std::size_t rho = 0; rho < tab.count(); ++rho) CHECK(tab.P(tab.position(top), rho) == 1.0);
    const auto orth = mvk_orthogonality_check(tab);
    CHECK(orth.primal <= 1e-9);
    CHECK(orth.dual <= 1e-9);
    CHECK(mvk_recurrence_check(tab, st) <= 1e-9);
    CHECK(mvk_unit_check(mvk_table(st, 1)) <= 1e-12);
  }
}

TEST_CASE("N = 1 table is the eigenvector matrix") {
  testgen::Gen gen(32);
  const auto st = gen.chain(3);
  const auto tab = mvk_table(st, 1);
  for (std::size_t i = 0; i <= 3; ++i)
    for (std::size_t j = 0; j <= 3; ++j) {
      MultiIndex fi(4, 0), fj(4, 0);
      fi[i] = 1;
      fj[j] = 1;
      CHECK(tab.P(fi, fj) == doctest::Approx(eigen_polys(st, tab.eigenvalues[j]).p[i]).epsilon(1e-12));
    }
}

TEST_CASE("time-derivative identities") {
  testgen::Gen gen(33);
  const auto st = gen.chain(2);
  const auto rep = mvk_time_derivative_check(st, policy::Toda{}, 2, 1e-4);
  CHECK(rep.eigvec <= 1e-6);
  CHECK(rep.eigvec_order >= 1.9);
  CHECK(rep.theorem <= 1e-6);
  CHECK(rep.constant_gap <= 1e-9);
  // The alternative constant N u_1 leaves an h-independent residual.
  CHECK(rep.theorem_alt_const > 1e-3);
  CHECK(rep.theorem_alt_const / rep.theorem_alt_const_half < 1.5);
}

TEST_CASE("degenerate levels are refused") {
  // The Krawtchouk chain has equally spaced eigenvalues.
  CHECK_THROWS_AS(mvk_time_derivative_check(krawtchouk_chain(4.0, 3.0, 2), policy::Toda{}, 2, 1e-4),
                  DegenerateSpectrumError);
  CHECK(mvk_table(krawtchouk_chain(4.0, 3.0, 2), 2).degenerate);
}

TEST_CASE("Krawtchouk reduction") {
  for (std::size_t d : {1u, 2u, 3u, 4u}) {
    const auto red = krawtchouk_reduction_check(4.0, 3.0, d, 2);
    CHECK(red.C == doctest::Approx(5.0));
    CHECK(red.residual_pn <= 1e-10);
  }
  CHECK(krawtchouk_reduction_check(4.0, 3.0, 2, 2).residual_sum <= 1e-9);
  CHECK(krawtchouk_reduction_check(-1.0, 2.0, 2, 3).residual_sum <= 1e-9);
}

TEST_CASE("mvk csv") {
  ChainState st;
  st.s = {0.3};
  st.r = {1.0};
  std::ostringstream os;
  write_mvk_csv(os, mvk_table(st, 1));
  const std::string text = os.str();
  CHECK(text.rfind("sigma,rho,P\n1-0,1-0,1\n", 0) == 0);
}

}  // TEST_SUITE
