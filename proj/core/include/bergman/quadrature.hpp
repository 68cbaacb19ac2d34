#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "bergman/geometry.hpp"

namespace bergman {

using ComplexIntegrand = std::function<Complex(Complex)>;
using RealIntegrand = std::function<double(Complex)>;

/// Gauss-Jacobi nodes and weights on [-1, 1] for the weight (1-x)^a (1+x)^b.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_jacobi(int n, double a, double b);

/// Product rule for the probability measure dA_alpha on the unit disk.
///
/// The radial part is Gauss-Jacobi in t = |z|^2 with the factor (1-t)^alpha
/// absorbed into the weights; the angular part is the uniform trapezoid rule.
/// With N angular nodes the rule integrates z^j conj(z)^k exactly whenever
/// |j - k| < N and min(j, k) <= 2 n_radial - 1.
///
/// Integrals can pass a concentration c in [0, 1): the angular node count at
/// radius rho is then raised (by doubling) until it resolves integrands whose
/// nearest singularity sits at modulus 1 / (c rho), e.g. kernels centred at a
/// point of modulus c.
class QuadratureRule {
 public:
  QuadratureRule(double alpha, int n_radial, int n_angular, double angular_margin = 40.0,
                 int max_angular_doublings = 12);

  double alpha() const noexcept { return alpha_; }
  int n_radial() const noexcept { return static_cast<int>(radii_.size()); }
  int n_angular() const noexcept { return n_angular_; }
  /// Number of nodes of the unrefined rule.
  std::size_t size() const noexcept { return radii_.size() * static_cast<std::size_t>(n_angular_); }

  std::span<const double> radii() const noexcept { return radii_; }
  /// Radial weights; they sum to 1.
  std::span<const double> radial_weights() const noexcept { return radial_weights_; }

  /// Node i * n_angular + k of the unrefined rule and its weight.
  Complex node(std::size_t index) const;
  double weight(std::size_t index) const;

  /// Angular node count used at radial index i for the given concentration.
  int angular_count(std::size_t radial_index, double concentration) const;

  Complex integrate(const ComplexIntegrand& g, double concentration = 0.0) const;
  double integrate_real(const RealIntegrand& g, double concentration = 0.0) const;

 private:
  template <typename Value, typename Fn>
  Value integrate_impl(const Fn& g, double concentration) const;

  /// Unit roots exp(2 pi i k / (n_angular 2^d)), built on first use.
  const std::vector<Complex>& unit_roots(int doublings) const;

  struct RootCache {
    std::mutex mutex;
    std::vector<std::shared_ptr<const std::vector<Complex>>> tables;
  };

  double alpha_;
  int n_angular_;
  double angular_margin_;
  int max_doublings_;
  std::vector<double> radii_;
  std::vector<double> radial_weights_;
  std::unique_ptr<RootCache> roots_ = std::make_unique<RootCache>();
};

/// Validating factory: alpha > -1, node counts >= 4, else ConfigError.
QuadratureRule build_quadrature(double alpha, int n_radial, int n_angular);

/// Integrates g over the Bergman disk D(a, r) against normalized area dA, by pulling
/// back to D(0, tanh r) through phi_a. Gauss-Legendre in |w|^2, trapezoid in angle.
Complex integrate_over_disk(const ComplexIntegrand& g, const DiskPoint& a, double r, int n_radial = 48,
                            int n_angular = 128);
double integrate_over_disk_real(const RealIntegrand& g, const DiskPoint& a, double r, int n_radial = 48,
                                int n_angular = 128);

}  // namespace bergman
