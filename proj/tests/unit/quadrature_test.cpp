#include <doctest.h>

#include <cmath>

#include <bergman/errors.hpp>
#include <bergman/quadrature.hpp>

#include "oracles.hpp"

using namespace bergman;

namespace {

double beta_fn(double x, double y) { return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y)); }

}  // namespace

TEST_CASE("gauss-jacobi integrates polynomials exactly") {
  for (const auto& [a, b] : {std::pair{0.0, 0.0}, {-0.5, 0.0}, {1.0, 0.0}, {-0.9, 2.5}}) {
    const GaussRule g = gauss_jacobi(12, a, b);
    REQUIRE(g.nodes.size() == 12);
    // int_{-1}^{1} (1-x)^a (1+x)^b (1+x)^k dx = 2^{a+b+k+1} B(a+1, b+k+1)
    for (int k = 0; k < 24; ++k) {
      double sum = 0.0;
      for (std::size_t i = 0; i < g.nodes.size(); ++i) sum += g.weights[i] * std::pow(1 + g.nodes[i], k);
      const double exact = std::pow(2.0, a + b + k + 1) * beta_fn(a + 1, b + k + 1);
      CHECK(sum == doctest::Approx(exact).epsilon(1e-12));
    }
  }
}

TEST_CASE("area rule moments") {
  for (double alpha : {-0.9, -0.5, 0.0, 1.0, 3.0}) {
    const QuadratureRule rule = build_quadrature(alpha, 32, 64);
    double wsum = 0.0;
    for (double w : rule.radial_weights()) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rule.integrate_real([](Complex) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-13));
    for (int m = 0; m < 20; ++m) {
      const double got = rule.integrate_real([m](Complex z) { return std::pow(std::norm(z), m); });
      CHECK(got == doctest::Approx(oracle::monomial_norm_sq(m, alpha)).epsilon(1e-12));
    }
    CHECK(std::abs(rule.integrate([](Complex z) { return z; })) < 1e-15);
    CHECK(std::abs(rule.integrate([](Complex z) { return z * z * std::conj(z); })) < 1e-15);
  }
  const QuadratureRule r0 = build_quadrature(0.0, 16, 32);
  CHECK(r0.integrate_real([](Complex z) { return std::norm(z); }) == doctest::Approx(0.5));
}

TEST_CASE("refinement convergence on smooth integrands") {
  const auto g = [](Complex z) { return std::exp(z) * std::cos(std::norm(z)) + 1.0 / (1.0 - 0.5 * std::conj(z)); };
  for (double alpha : {-0.5, 0.0, 1.0}) {
    const QuadratureRule coarse(alpha, 256, 512);
    const QuadratureRule fine(alpha, 512, 1024);
    CHECK(std::abs(coarse.integrate(g) - fine.integrate(g)) < 1e-8);
  }
}

TEST_CASE("adaptive angular refinement follows the concentration") {
  const QuadratureRule rule(0.0, 64, 64);
  const std::size_t last = rule.n_radial() - 1;
  CHECK(rule.angular_count(last, 0.0) == 64);
  CHECK(rule.angular_count(last, 0.99) > rule.angular_count(last, 0.5));
  // A sharply peaked kernel is integrated accurately once the concentration is passed.
  const Complex a(0.0, 0.97);
  const auto peak = [a](Complex z) { return berezin_weight(a, z, 2.0); };
  CHECK(rule.integrate_real(peak, std::abs(a)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("node indexing matches the unrefined rule") {
  const QuadratureRule rule(0.5, 8, 16);
  REQUIRE(rule.size() == 128);
  double total = 0.0;
  Complex first = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    total += rule.weight(i);
    first += rule.weight(i) * rule.node(i);
  }
  CHECK(total == doctest::Approx(1.0));
  CHECK(std::abs(first) < 1e-15);
}

TEST_CASE("invalid rules") {
  CHECK_THROWS_AS(build_quadrature(-1.0, 16, 16), ConfigError);
  CHECK_THROWS_AS(build_quadrature(0.0, 2, 16), ConfigError);
  CHECK_THROWS_AS(build_quadrature(0.0, 16, 3), ConfigError);
}

TEST_CASE("integration over a Bergman disk") {
  for (const auto& [a, r] : {std::pair{DiskPoint(0.0), 0.5}, {DiskPoint(0.5), 1.0}, {DiskPoint(-0.3, 0.8), 0.8}}) {
    CHECK(integrate_over_disk_real([](Complex) { return 1.0; }, a, r) ==
          doctest::Approx(disk_area(a, r)).epsilon(1e-10));
  }
  // Mean value property of analytic functions over D(0, r).
  const Complex got = integrate_over_disk([](Complex z) { return 1.0 + z + z * z; }, 0.0, 0.6);
  CHECK(std::abs(got - disk_area(0.0, 0.6)) < 1e-12);
}
