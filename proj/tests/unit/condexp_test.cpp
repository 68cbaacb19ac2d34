#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <bergman/carleson.hpp>
#include <bergman/condexp.hpp>
#include <bergman/errors.hpp>

#include "oracles.hpp"

using namespace bergman;

namespace {

bool contains_point(const std::vector<DiskPoint>& pts, Complex z, double tol = 1e-12) {
  return std::any_of(pts.begin(), pts.end(), [&](const DiskPoint& p) { return std::abs(p.value() - z) < tol; });
}

}  // namespace

TEST_CASE("level sets of monomials") {
  const LevelSet sq = level_set(MonomialMap{2}, 0.5);
  REQUIRE(sq.points.size() == 2);
  CHECK(contains_point(sq.points, 0.5));
  CHECK(contains_point(sq.points, -0.5));
  CHECK(sq.weights[0] == doctest::Approx(0.5));
  CHECK(sq.weights[1] == doctest::Approx(0.5));

  const LevelSet cube = level_set(MonomialMap{3}, 0.4);
  REQUIRE(cube.points.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(contains_point(cube.points, std::polar(0.4, 2 * std::numbers::pi * k / 3)));
  for (double w : cube.weights) CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const LevelSet id = level_set(IdentityMap{}, DiskPoint(0.2, 0.1));
  REQUIRE(id.points.size() == 1);
  CHECK(id.points[0] == DiskPoint(0.2, 0.1));
  CHECK(id.weights[0] == 1.0);

  CHECK_THROWS_AS(level_set(MonomialMap{2}, 0.0), CriticalPointError);
}

TEST_CASE("conditional expectation values") {
  const AnalyticSelfMap sq = MonomialMap{2};
  CHECK(cond_expect(sq, Polynomial{1.0}, DiskPoint(0.3, 0.4)).real() == doctest::Approx(1.0));
  CHECK(std::abs(cond_expect(sq, Polynomial::monomial(1), 0.5)) < 1e-15);
  CHECK(cond_expect(sq, Polynomial::monomial(2), 0.3).real() == doctest::Approx(0.09));
  CHECK(cond_expect_extended(sq, [](Complex z) { return 2.0 + z; }, 0.0).real() == 2.0);

  CHECK(cond_expect_poly(2, Polynomial{1.0, 1.0, 1.0}) == (Polynomial{1.0, 0.0, 1.0}));
  const Polynomial f{Complex(0.3, 1.0), -2.0, 0.5};
  CHECK(cond_expect_poly(1, f) == f);
  CHECK(cond_expect_poly(3, Polynomial::monomial(5)).is_zero());
}

TEST_CASE("monomial maps match the root-of-unity average") {
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int n : {2, 3, 5}) {
    for (int m = 0; m <= 12; ++m) {
      const Polynomial f = Polynomial::monomial(m);
      for (int i = 0; i < 20; ++i) {
        const DiskPoint z = oracle::random_disk_point(rng, 0.95);
        worst = std::max(worst, std::abs(cond_expect(MonomialMap{n}, f, z) - oracle::monomial_cond_expect(n, m, z)));
        worst = std::max(worst, std::abs(cond_expect_poly(n, f)(z) - oracle::monomial_cond_expect(n, m, z)));
      }
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("averaging properties") {
  const std::vector<Polynomial> family = random_polynomials(6, 5, 99);
  std::mt19937_64 rng(8);
  const std::vector<AnalyticSelfMap> maps{MonomialMap{3}, BlaschkeProduct{{DiskPoint(0.3), DiskPoint(-0.2, 0.5)}}};
  for (const auto& phi : maps) {
    for (const auto& f : family) {
      const DiskPoint z = oracle::random_disk_point(rng, 0.9);
      const LevelSet ls = level_set(phi, z);
      double lo = 1e300, hi = -1e300, abs_avg = 0.0, wsum = 0.0;
      for (std::size_t j = 0; j < ls.points.size(); ++j) {
        const Complex v = f(ls.points[j]);
        lo = std::min(lo, v.real());
        hi = std::max(hi, v.real());
        abs_avg += ls.weights[j] * std::abs(v);
        wsum += ls.weights[j];
      }
      const Complex e = cond_expect(phi, f, z);
      CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(e.real() >= lo - 1e-14);
      CHECK(e.real() <= hi + 1e-14);
      CHECK(std::abs(e) <= abs_avg + 1e-14);
    }
  }
}

TEST_CASE("closed form is idempotent and non-expansive") {
  const Integrator integ;
  for (const auto& f : random_polynomials(8, 9, 3)) {
    for (int n : {2, 3, 5}) {
      const Polynomial e = cond_expect_poly(n, f);
      CHECK(cond_expect_poly(n, e) == e);
      CHECK(integ.bergman_norm(e, {2.0, 0.0}) <= integ.bergman_norm(f, {2.0, 0.0}) + 1e-14);
    }
  }
}

TEST_CASE("blaschke level sets") {
  const BlaschkeProduct b{{DiskPoint(0.0), DiskPoint(0.5, 0.1), DiskPoint(-0.4, -0.3)}};
  const AnalyticSelfMap phi = b;
  CHECK(phi.multiplicity() == 3);
  CHECK_FALSE(phi.is_rotation_equivariant());
  const DiskPoint z(0.2, 0.6);
  const LevelSet ls = level_set(phi, z);
  REQUIRE(ls.points.size() == 3);
  double wsum = 0.0;
  for (std::size_t j = 0; j < ls.points.size(); ++j) {
    CHECK(std::abs(phi(ls.points[j]) - phi(z)) < kPreimageResidual);
    wsum += ls.weights[j];
    // weights are proportional to 1 / |phi'|^2
    const double ratio = ls.weights[j] * std::norm(phi.derivative(ls.points[j]));
    CHECK(ratio == doctest::Approx(ls.weights[0] * std::norm(phi.derivative(ls.points[0]))).epsilon(1e-10));
  }
  CHECK(wsum == doctest::Approx(1.0));
  CHECK(contains_point(ls.points, z, 1e-10));
}

TEST_CASE("polynomial roots") {
  const Polynomial p = Polynomial{-0.5, 1.0} * Polynomial{Complex(0.0, 0.3), 1.0} * Polynomial{2.0, 1.0};
  const std::vector<Complex> roots = polynomial_roots(p);
  REQUIRE(roots.size() == 3);
  for (Complex r : {Complex(0.5), Complex(0.0, -0.3), Complex(-2.0)}) {
    CHECK(std::any_of(roots.begin(), roots.end(), [&](Complex x) { return std::abs(x - r) < 1e-12; }));
  }
}

TEST_CASE("evaluation bound") {
  const Integrator integ;
  const SpaceParams sp{2.0, 0.0};
  CHECK(evaluation_bound_probe(integ, IdentityMap{}, Polynomial{1.0}, 0.0, sp) == doctest::Approx(1.0));
  double worst = 0.0;
  for (const auto& f : random_polynomials(8, 3, 17)) {
    for (const DiskPoint z : {DiskPoint(0.3), DiskPoint(-0.5, 0.5), DiskPoint(0.0, 0.9)}) {
      worst = std::max(worst, evaluation_bound_probe(integ, MonomialMap{2}, f, z, sp));
    }
  }
  CHECK(worst <= 1.0 + 1e-9);
  // Test functions come close to equality at their own centre.
  const DiskPoint a(0.6, 0.2);
  const double r = evaluation_bound_ratio(
      IdentityMap{}, [&](Complex z) { return test_function(a, z, sp); }, 1.0, a, sp);
  CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("map descriptions") {
  CHECK(AnalyticSelfMap(IdentityMap{}).multiplicity() == 1);
  CHECK(AnalyticSelfMap(MonomialMap{4}).multiplicity() == 4);
  CHECK(AnalyticSelfMap(MonomialMap{4}).is_rotation_equivariant());
  CHECK_THROWS_AS(AnalyticSelfMap(MonomialMap{0}), ConfigError);
  CHECK_FALSE(AnalyticSelfMap(MonomialMap{2}).describe().empty());
}
