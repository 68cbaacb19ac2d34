#include "bergman/operators.hpp"

#include <algorithm>
#include <cmath>

#include "bergman/errors.hpp"
#include "bergman/parallel.hpp"

namespace bergman {

void WeightedCondExpOperator::validate() const {
  source.validate();
  target.validate();
  if (source.p != target.p) throw ConfigError("source and target exponents p must agree");
}

Measure WeightedCondExpOperator::symbol_measure() const { return PolyWeighted{u, target.p, target.alpha, 1.0}; }

bool WeightedCondExpOperator::analytic_image() const {
  return !std::holds_alternative<BlaschkeProduct>(phi.variant());
}

Complex apply(const WeightedCondExpOperator& op, const Polynomial& f, const DiskPoint& z) {
  if (op.u.is_zero()) return 0.0;
  return op.u(z.value()) * cond_expect(op.phi, f, z);
}

OpNormEstimate opnorm_estimate(const Integrator& integ, const WeightedCondExpOperator& op,
                               const FamilySpec& family, const GridSpec& grid) {
  op.validate();
  OpNormEstimate out;
  if (op.u.is_zero()) {
    out.family_size = 0;
    return out;
  }
  // ||u E f||_{p,beta}^p is the integral of |E f|^p against mu_u^beta, so the
  // estimate is the embedding constant of that measure.
  const TestConstant t = test_constant(integ, op.symbol_measure(), op.source, op.phi, family, grid);
  out.norm_p = t.c1;
  out.norm = std::pow(t.c1, 1.0 / op.source.p);
  out.worst = t.worst;
  out.growth = t.growth;
  out.family_size = t.family_size;
  return out;
}

namespace {

CriterionResult from_sup(const PsiSup& s) {
  CriterionResult r;
  r.sup = s.sup;
  r.argmax = s.argmax;
  r.growth = s.growth;
  return r;
}

}  // namespace

CriterionResult boundedness_criterion(const Integrator& integ, const WeightedCondExpOperator& op,
                                      const GridSpec& grid) {
  op.validate();
  if (op.u.is_zero()) return {};
  return from_sup(psi_sup(integ, op.symbol_measure(), op.source.alpha, 2.0 + op.source.alpha, grid));
}

CriterionResult multiplication_criterion(const Integrator& integ, const Polynomial& u, double p, double q,
                                         double alpha, double beta, const GridSpec& grid) {
  if (!(p > 0.0) || !(q >= p)) throw ConfigError("multiplication criterion needs 0 < p <= q");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw ConfigError("alpha and beta must exceed -1");
  if (u.is_zero()) return {};
  return from_sup(psi_sup(integ, PolyWeighted{u, q, beta, 1.0}, alpha, (2.0 + alpha) * q / p, grid));
}

Complex bergman_projection(const Integrator& integ, const ComplexIntegrand& f, double alpha, const DiskPoint& w) {
  if (!(alpha > -1.0)) throw ConfigError("alpha must exceed -1");
  const Complex wv = w.value();
  const double e = 2.0 + alpha;
  return integ.rule(alpha)->integrate(
      [&](Complex z) {
        const Complex d = 1.0 - wv * std::conj(z);
        return f(z) * std::polar(std::pow(std::norm(d), -0.5 * e), -e * std::atan2(d.imag(), d.real()));
      },
      w.modulus());
}

double commutation_defect(const Integrator& integ, const AnalyticSelfMap& phi, double alpha,
                          const std::vector<Polynomial>& family, const std::vector<DiskPoint>& points) {
  if (family.size() < 2) throw ConfigError("commutation probe needs at least two polynomials");
  std::vector<double> defect(points.size() * (family.size() - 1));
  parallel_for(defect.size(), [&](std::size_t idx) {
    const DiskPoint& w = points[idx % points.size()];
    const std::size_t k = idx / points.size();
    const Polynomial& g = family[k];
    const Polynomial& h = family[k + 1];
    const ComplexIntegrand f = [&](Complex z) { return g(z) + std::norm(z) * h(z); };
    const Complex ep = average(level_set(phi, w), [&](Complex z) { return bergman_projection(integ, f, alpha, z); });
    const Complex pe =
        bergman_projection(integ, [&](Complex z) { return cond_expect_extended(phi, f, z); }, alpha, w);
    defect[idx] = std::abs(ep - pe);
  });
  return defect.empty() ? 0.0 : *std::max_element(defect.begin(), defect.end());
}

}  // namespace bergman
