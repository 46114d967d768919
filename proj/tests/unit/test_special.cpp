#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gen.hpp"
#include "isoflow/errors.hpp"
#include "isoflow/special.hpp"

using namespace isoflow;

TEST_SUITE("special") {

TEST_CASE("log Gamma on the real line matches std::lgamma") {
  for (double x = 0.05; x < 40.0; x *= 1.37) {
    const cplx v = complex_log_gamma(x);
    CHECK(std::abs(v.real() - std::lgamma(x)) <= 1e-13 * std::max(1.0, std::abs(std::lgamma(x))));
    CHECK(std::abs(v.imag()) <= 1e-15);
  }
  CHECK(complex_log_gamma(0.5).real() == doctest::Approx(0.5 * std::log(std::numbers::pi)));
  CHECK_THROWS_AS(complex_log_gamma(-3.0), PoleError);
}

TEST_CASE("log Gamma functional equation and reflection (property)") {
  testgen::Gen gen(3);
  for (int k = 0; k < testgen::kCases; ++k) {
    const cplx z(gen.uniform(-6.0, 12.0), gen.uniform(-15.0, 15.0));
    CAPTURE(z);
    // Gamma(z+1) = z Gamma(z)
    const cplx step = std::exp(complex_log_gamma(z + 1.0) - complex_log_gamma(z));
    CHECK(std::abs(step - z) <= 1e-11 * std::abs(z));
    // Gamma(z) Gamma(1-z) sin(pi z) = pi
    const cplx refl = std::exp(complex_log_gamma(z) + complex_log_gamma(1.0 - z)) *
                      std::sin(std::numbers::pi * z);
    CHECK(std::abs(refl - std::numbers::pi) <= 1e-9 * std::numbers::pi);
    // conjugate symmetry
    CHECK(std::abs(complex_log_gamma(std::conj(z)) - std::conj(complex_log_gamma(z))) <= 1e-12);
  }
}

TEST_CASE("regularized 2F1 against closed forms") {
  // 2F1(a, b; b; z) = (1-z)^{-a}
  for (double z : {-0.9, -0.5, 0.0, 0.3, 0.8}) {
    const cplx a(0.7, 0.4);
    const cplx b(1.3, -0.2);
    const cplx v = regularized_2f1(a, b, b, z) * std::exp(complex_log_gamma(b));
    CHECK(std::abs(v - std::pow(cplx(1.0 - z), -a)) <= 1e-12);
  }
  // 2F1(1, 1; 2; z) = -log(1-z)/z
  for (double z : {-0.95, -0.4, 0.2, 0.7}) {
    const cplx v = regularized_2f1(1.0, 1.0, 2.0, z);
    CHECK(std::abs(v.real() + std::log1p(-z) / z) <= 1e-13);
  }
  // c a non-positive integer: the regularized function stays finite.
  const cplx v = regularized_2f1(-3.0, 2.0, -1.0, 0.4);
  CHECK(std::isfinite(v.real()));
  CHECK_THROWS_AS(regularized_2f1(0.5, 0.5, 1.5, 1.2), DomainError);
}

TEST_CASE("Pfaff branch agrees with the direct series") {
  testgen::Gen gen(5);
  for (int k = 0; k < testgen::kCases; ++k) {
    const cplx a(gen.uniform(-2, 3), gen.uniform(-2, 2));
    const cplx b(gen.uniform(-2, 3), gen.uniform(-2, 2));
    const cplx c(gen.uniform(0.5, 4), gen.uniform(-1, 1));
    const double z = gen.uniform(-0.9, -0.76);
    const cplx with = regularized_2f1(a, b, c, z, true);
    const cplx without = regularized_2f1(a, b, c, z, false);
    CHECK(std::abs(with - without) <= 1e-10 * std::max(1.0, std::abs(without)));
  }
}

TEST_CASE("Bessel J matches the standard library") {
  for (long n = 0; n <= 20; ++n)
    for (double z : {0.1, 1.0, 2.5, 7.0, 15.0, 30.0}) {
      CAPTURE(n);
      CAPTURE(z);
      const double ref = std::cyl_bessel_j(static_cast<double>(n), z);
      CHECK(std::abs(bessel_j(n, z) - ref) <= 1e-13 + 1e-11 * std::abs(ref));
      CHECK(bessel_j(-n, z) == doctest::Approx((n % 2 ? -1.0 : 1.0) * bessel_j(n, z)));
    }
  CHECK(bessel_j(0, 1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-15));
  CHECK(bessel_j(3, 0.0) == 0.0);
  CHECK(bessel_j(0, 0.0) == 1.0);
}

TEST_CASE("Bessel addition: sum_m J_m(z)^2 = 1") {
  for (double z : {0.5, 5.0, 20.0}) {
    double sum = 0.0;
    for (long m = -80; m <= 80; ++m) sum += bessel_j(m, z) * bessel_j(m, z);
    CHECK(std::abs(sum - 1.0) <= 1e-14);
  }
  CHECK(bessel_j_checked(400, 1.0).underflow);
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  const auto rule = gauss_legendre(8, -1.0, 3.0);
  for (int k = 0; k <= 15; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      sum += rule.weights[i] * std::pow(rule.nodes[i], k);
    const double exact = (std::pow(3.0, k + 1) - std::pow(-1.0, k + 1)) / (k + 1);
    CHECK(sum == doctest::Approx(exact).epsilon(1e-13));
  }
}

TEST_CASE("Meixner functions are orthonormal on a truncated lattice") {
  const double rho = 0.7, eps = 0.3, c = 0.2;
  for (long n = -2; n <= 2; ++n)
    for (long m = -2; m <= 2; ++m) {
      double sum = 0.0;
      for (long x = -40; x <= 40; ++x)
        sum += meixner_function_weight(x, rho, eps, c) * meixner_function(n, x, rho, eps, c) *
               meixner_function(m, x, rho, eps, c);
      CHECK(std::abs(sum - (n == m ? 1.0 : 0.0)) <= 1e-10);
    }
}

}  // TEST_SUITE
