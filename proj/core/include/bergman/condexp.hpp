#pragma once

#include <string>
#include <variant>
#include <vector>

#include "bergman/geometry.hpp"
#include "bergman/measure.hpp"
#include "bergman/polynomial.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

struct IdentityMap {};

/// phi(z) = z^n
struct MonomialMap {
  int n = 1;
};

/// phi = product of phi_{a_i}
struct BlaschkeProduct {
  std::vector<DiskPoint> zeros;
};

/// Finite-multiplicity analytic self-map of the disk.
class AnalyticSelfMap {
 public:
  using Variant = std::variant<IdentityMap, MonomialMap, BlaschkeProduct>;

  AnalyticSelfMap() = default;
  AnalyticSelfMap(IdentityMap m) : v_(m) {}  // NOLINT(google-explicit-constructor)
  AnalyticSelfMap(MonomialMap m);            // NOLINT
  AnalyticSelfMap(BlaschkeProduct m);        // NOLINT

  const Variant& variant() const noexcept { return v_; }
  int multiplicity() const;
  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;
  /// Identity or a monomial: E commutes with rotations and maps polynomials to polynomials.
  bool is_rotation_equivariant() const;
  std::string describe() const;

 private:
  Variant v_{IdentityMap{}};
};

struct RejectedPreimage {
  Complex point;
  std::string reason;
};

/// Level set c_z of phi through z with the conditional-expectation weights.
struct LevelSet {
  DiskPoint base;
  std::vector<DiskPoint> points;
  std::vector<double> weights;             // positive, sum to 1
  std::vector<RejectedPreimage> rejected;  // preimages dropped (critical or outside the disk)
};

/// Residual bound for preimages of Blaschke products.
inline constexpr double kPreimageResidual = 1e-10;

/// Throws CriticalPointError when phi'(z) = 0, NumericError when a preimage
/// cannot be resolved to the residual bound.
LevelSet level_set(const AnalyticSelfMap& phi, const DiskPoint& z);

/// Weighted average sum_j w_j g(zeta_j) over a level set.
Complex average(const LevelSet& ls, const ComplexIntegrand& g);

/// E_{A(phi)}(f)(z) evaluated from the level-set formula.
Complex cond_expect(const AnalyticSelfMap& phi, const Polynomial& f, const DiskPoint& z);
Complex cond_expect(const AnalyticSelfMap& phi, const ComplexIntegrand& f, const DiskPoint& z);

/// Same, with the continuous extension E(f)(0) = f(0) at the critical point 0 of z^n.
Complex cond_expect_extended(const AnalyticSelfMap& phi, const ComplexIntegrand& f, Complex z);

/// Closed form for phi = z^n: keeps the coefficients of z^m with n | m.
Polynomial cond_expect_poly(int n, const Polynomial& f);

/// |E(f)(z)| (1 - |z|^2)^{(2+alpha)/p} / ||f||_{p,alpha}, given the norm.
double evaluation_bound_ratio(const AnalyticSelfMap& phi, const ComplexIntegrand& f, double norm,
                              const DiskPoint& z, const SpaceParams& params);

/// Same ratio with ||f||_{p,alpha} computed by quadrature.
double evaluation_bound_probe(const Integrator& integ, const AnalyticSelfMap& phi, const Polynomial& f,
                              const DiskPoint& z, const SpaceParams& params);

/// Roots of a complex polynomial (Aberth-Ehrlich iteration with Newton polishing).
std::vector<Complex> polynomial_roots(const Polynomial& p);

}  // namespace bergman
