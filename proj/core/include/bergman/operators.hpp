#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bergman/carleson.hpp"
#include "bergman/condexp.hpp"
#include "bergman/measure.hpp"

namespace bergman {

/// T f = u * E(f), from L_a^{p,alpha} (source) to L_a^{p,beta} (target).
struct WeightedCondExpOperator {
  Polynomial u;
  AnalyticSelfMap phi;
  SpaceParams source;
  SpaceParams target;

  void validate() const;
  /// mu_u^beta = |u|^p dA_beta
  Measure symbol_measure() const;
  /// E(f) is a polynomial for identity and monomial maps; for Blaschke maps it
  /// is evaluated pointwise and need not be analytic.
  bool analytic_image() const;
};

Complex apply(const WeightedCondExpOperator& op, const Polynomial& f, const DiskPoint& z);

struct OpNormEstimate {
  double norm = 0.0;          // sup ||T f|| / ||f||, a lower bound for ||T||
  double norm_p = 0.0;        // norm^p
  std::string worst;
  GrowthDiagnostics growth;   // norm^p over the test-function family per grid level
  std::size_t family_size = 0;
};

OpNormEstimate opnorm_estimate(const Integrator& integ, const WeightedCondExpOperator& op,
                               const FamilySpec& family, const GridSpec& grid);

struct CriterionResult {
  double sup = 0.0;
  DiskPoint argmax;
  GrowthDiagnostics growth;
  bool bounded() const { return !growth.divergent && std::isfinite(sup); }
};

/// sup_a Psi_a(mu_u^beta) with exponent 2 + alpha.
CriterionResult boundedness_criterion(const Integrator& integ, const WeightedCondExpOperator& op,
                                      const GridSpec& grid);

/// sup_a of the integral of ((1-|a|^2)/|1-conj(a)z|^2)^{(2+alpha)q/p} |u|^q dA_beta,
/// which decides boundedness of M_u from L_a^{p,alpha} to L_a^{q,beta}.
CriterionResult multiplication_criterion(const Integrator& integ, const Polynomial& u, double p, double q,
                                         double alpha, double beta, const GridSpec& grid);

/// P_alpha f(w) = integral of f(z) (1 - w conj(z))^{-(2+alpha)} dA_alpha(z).
Complex bergman_projection(const Integrator& integ, const ComplexIntegrand& f, double alpha, const DiskPoint& w);

/// max |E(P f)(w) - P(E f)(w)| over sample points w, for non-analytic inputs
/// f(z) = g(z) + |z|^2 h(z) with g, h from the random family. Reported, never assumed.
double commutation_defect(const Integrator& integ, const AnalyticSelfMap& phi, double alpha,
                          const std::vector<Polynomial>& family, const std::vector<DiskPoint>& points);

}  // namespace bergman
