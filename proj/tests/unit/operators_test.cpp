#include <doctest.h>

#include <cmath>

#include <bergman/errors.hpp>
#include <bergman/operators.hpp>

using namespace bergman;

namespace {

const Integrator& integrator() {
  static const Integrator integ(QuadratureConfig{96, 128});
  return integ;
}

GridSpec small_grid() {
  GridSpec g;
  g.min_level = 3;
  g.max_level = 6;
  g.n_theta = 8;
  return g;
}

WeightedCondExpOperator make_op(Polynomial u, AnalyticSelfMap phi, double alpha, double beta) {
  WeightedCondExpOperator op{std::move(u), phi, {2.0, alpha}, {2.0, beta}};
  op.validate();
  return op;
}

}  // namespace

TEST_CASE("operator application") {
  const Polynomial f{1.0, Complex(0.0, 2.0), 0.5};
  const DiskPoint z(0.3, -0.1);
  CHECK(std::abs(apply(make_op(Polynomial{1.0}, IdentityMap{}, 0, 0), f, z) - f(z)) < 1e-15);
  CHECK(apply(make_op(Polynomial::monomial(1), MonomialMap{2}, 0, 0), Polynomial::monomial(2), 0.5).real() ==
        doctest::Approx(0.125));
  CHECK(apply(make_op(Polynomial{}, MonomialMap{3}, 0, 0), f, z) == Complex(0.0));
  CHECK(make_op(Polynomial{1.0}, MonomialMap{2}, 0, 0).analytic_image());
  CHECK_FALSE(make_op(Polynomial{1.0}, BlaschkeProduct{{DiskPoint(0.2)}}, 0, 0).analytic_image());
  WeightedCondExpOperator bad{Polynomial{1.0}, IdentityMap{}, {2.0, 0.0}, {3.0, 0.0}};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("norm estimates") {
  const Integrator& integ = integrator();
  const GridSpec grid = small_grid();
  FamilySpec family;
  family.random_count = 4;

  const OpNormEstimate id = opnorm_estimate(integ, make_op(Polynomial{1.0}, IdentityMap{}, 0, 0), family, grid);
  CHECK(id.norm == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(opnorm_estimate(integ, make_op(Polynomial{}, IdentityMap{}, 0, 0), family, grid).norm == 0.0);

  // u = z on monomials: sup_m sqrt((m+1)/(m+2)) approaches 1 from below.
  FamilySpec monomials;
  monomials.kernels = false;
  monomials.random_count = 0;
  for (int m = 0; m <= 30; ++m) monomials.explicit_polynomials.push_back(Polynomial::monomial(m));
  const OpNormEstimate shift =
      opnorm_estimate(integ, make_op(Polynomial::monomial(1), IdentityMap{}, 0, 0), monomials, grid);
  CHECK(shift.norm == doctest::Approx(std::sqrt(31.0 / 32.0)).epsilon(1e-9));

  const WeightedCondExpOperator op = make_op(Polynomial{1.0, 0.5}, MonomialMap{2}, 0, 0);
  const WeightedCondExpOperator op3 = make_op(Polynomial{3.0, 1.5}, MonomialMap{2}, 0, 0);
  CHECK(opnorm_estimate(integ, op3, family, grid).norm ==
        doctest::Approx(3.0 * opnorm_estimate(integ, op, family, grid).norm).epsilon(1e-10));
  CHECK(boundedness_criterion(integ, op3, grid).sup ==
        doctest::Approx(9.0 * boundedness_criterion(integ, op, grid).sup).epsilon(1e-10));
}

TEST_CASE("boundedness criterion") {
  const Integrator& integ = integrator();
  const GridSpec grid = small_grid();
  const CriterionResult same = boundedness_criterion(integ, make_op(Polynomial{1.0}, MonomialMap{3}, 1, 1), grid);
  CHECK(same.sup == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(same.bounded());
  CHECK(boundedness_criterion(integ, make_op(Polynomial{1.0}, IdentityMap{}, 0, 1), grid).bounded());
  const CriterionResult lower = boundedness_criterion(integ, make_op(Polynomial{1.0}, IdentityMap{}, 0, -0.5), grid);
  CHECK_FALSE(lower.bounded());
  CHECK(lower.growth.slope == doctest::Approx(-0.5).epsilon(0.1));
}

TEST_CASE("multiplication criterion") {
  const Integrator& integ = integrator();
  const GridSpec grid = small_grid();
  const CriterionResult eq = multiplication_criterion(integ, Polynomial{1.0}, 2, 2, 0, 0, grid);
  CHECK(eq.sup == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(eq.bounded());
  CHECK(multiplication_criterion(integ, Polynomial{}, 2, 2, 0, 0, grid).sup == 0.0);
  const CriterionResult up = multiplication_criterion(integ, Polynomial{1.0}, 2, 4, 0, 0, grid);
  CHECK_FALSE(up.bounded());
  CHECK(up.growth.slope == doctest::Approx(-2.0).epsilon(0.05));
  CHECK_THROWS_AS(multiplication_criterion(integ, Polynomial{1.0}, 4, 2, 0, 0, grid), ConfigError);
}

TEST_CASE("bergman projection") {
  const Integrator& integ = integrator();
  for (double alpha : {0.0, 1.0}) {
    CHECK(std::abs(bergman_projection(integ, [](Complex) { return Complex(1.0); }, alpha, DiskPoint(0.4, 0.3)) - 1.0) <
          1e-12);
  }
  CHECK(std::abs(bergman_projection(integ, [](Complex z) { return z * z; }, 0.0, 0.5) - 0.25) < 1e-12);
  CHECK(std::abs(bergman_projection(integ, [](Complex z) { return std::conj(z); }, 0.0, DiskPoint(0.2, -0.6))) < 1e-12);
  // Idempotence on non-analytic input; low degrees are exact on a small rule.
  const Integrator small(QuadratureConfig{16, 32});
  const auto f = [](Complex z) { return std::norm(z) + z * std::conj(z) * z; };
  const auto pf = [&](Complex w) { return bergman_projection(small, f, 0.0, DiskPoint(w)); };
  for (const DiskPoint w : {DiskPoint(0.1), DiskPoint(-0.3, 0.5)}) {
    CHECK(std::abs(bergman_projection(small, pf, 0.0, w) - pf(w)) < 1e-8);
  }
}

TEST_CASE("commutation probe") {
  const Integrator& integ = integrator();
  const std::vector<DiskPoint> pts{DiskPoint(0.3), DiskPoint(-0.2, 0.45)};
  const double d = commutation_defect(integ, MonomialMap{3}, 0.0, random_polynomials(3, 4, 1), pts);
  CHECK(std::isfinite(d));
  CHECK(d < 1e-10);
}
