#pragma once

#include <complex>
#include <optional>
#include <utility>

namespace bergman {

using Complex = std::complex<double>;

/// Points closer than this to the unit circle are rejected.
inline constexpr double kBoundaryGuard = 1e-14;

/// Tolerance of closed-form geometric identities.
inline constexpr double kGeometryTol = 1e-12;

/// A point of the open unit disk. Construction enforces |z| < 1 - kBoundaryGuard.
class DiskPoint {
 public:
  constexpr DiskPoint() = default;
  DiskPoint(Complex z);  // NOLINT(google-explicit-constructor)
  DiskPoint(double re, double im = 0.0) : DiskPoint(Complex(re, im)) {}

  const Complex& value() const noexcept { return z_; }
  double re() const noexcept { return z_.real(); }
  double im() const noexcept { return z_.imag(); }
  double modulus() const noexcept { return std::abs(z_); }
  double norm() const noexcept { return std::norm(z_); }  // |z|^2

  operator const Complex&() const noexcept { return z_; }  // NOLINT

  friend bool operator==(const DiskPoint&, const DiskPoint&) = default;

 private:
  Complex z_{0.0, 0.0};
};

/// Exponent pair (p, alpha) of L_a^{p,alpha}, optionally with a second pair (q, beta).
struct SpaceParams {
  double p = 2.0;
  double alpha = 0.0;
  std::optional<double> q;
  std::optional<double> beta;

  /// Throws ConfigError unless p > 0, alpha > -1 (and q > 0, beta > -1 when set).
  void validate() const;

  /// (2 + alpha) / p, the exponent of the test functions and the pointwise bound.
  double kernel_exponent() const { return (2.0 + alpha) / p; }
};

struct EuclideanDisk {
  Complex center;
  double radius = 0.0;

  bool contains(Complex z) const { return std::abs(z - center) < radius; }
};

/// Bergman-metric ball D(a, r); s = tanh r is the pseudo-hyperbolic radius.
struct BergmanDisk {
  DiskPoint center;
  double radius = 0.0;

  double s() const;
  EuclideanDisk euclidean() const;
};

// Moebius maps and metrics

/// phi_a(z) = (a - z) / (1 - conj(a) z)
DiskPoint mobius(const DiskPoint& a, const DiskPoint& z);
Complex mobius_derivative(const DiskPoint& a, const DiskPoint& z);
double pseudo_distance(const DiskPoint& a, const DiskPoint& z);
/// beta(a, z) = artanh rho(a, z)
double bergman_distance(const DiskPoint& a, const DiskPoint& z);

// Bergman disks

EuclideanDisk bergman_disk(const DiskPoint& a, double r);
/// Normalized area |D(a, r)|.
double disk_area(const DiskPoint& a, double r);

struct KernelExtrema {
  double inf = 0.0;
  double sup = 0.0;
};
/// inf and sup of |k_a|^2 over D(a, r).
KernelExtrema kernel_extrema_on_disk(const DiskPoint& a, double r);

// Kernels

/// K_alpha(w, z) = (1 - w conj(z))^{-(2+alpha)}, principal branch.
Complex weighted_kernel(const DiskPoint& w, const DiskPoint& z, double alpha);
/// k_a(z) = (1 - |a|^2) / (1 - conj(a) z)^2
Complex normalized_kernel(const DiskPoint& a, const DiskPoint& z);
/// f_a^{p,alpha}(z) = k_a(z)^{(2+alpha)/p} with the principal branch of log(1 - conj(a) z).
Complex test_function(const DiskPoint& a, const DiskPoint& z, const SpaceParams& params);

/// ((1 - |a|^2) / |1 - conj(a) z|^2)^t. Equals |f_a^{p,alpha}(z)|^p when t = 2 + alpha.
double berezin_weight(Complex a, Complex z, double t);

/// Unchecked kernel evaluations on raw complex numbers for quadrature loops.
/// Arguments must already lie in the disk.
namespace raw {

inline Complex principal_log(Complex w) { return {0.5 * std::log(std::norm(w)), std::arg(w)}; }

/// (1 - |a|^2)^e (1 - conj(a) z)^{-2e}; the test function when e = (2+alpha)/p.
inline Complex kernel_power(Complex a, Complex z, double e) {
  const Complex d = 1.0 - std::conj(a) * z;
  const double modulus = std::pow((1.0 - std::norm(a)) / std::norm(d), e);
  return std::polar(modulus, -2.0 * e * std::arg(d));
}

}  // namespace raw

/// |w|^p with the common exponents done without pow.
inline double abs_pow(Complex w, double p) {
  if (p == 2.0) return std::norm(w);
  if (p == 1.0) return std::abs(w);
  if (p == 4.0) {
    const double n = std::norm(w);
    return n * n;
  }
  return std::pow(std::norm(w), 0.5 * p);
}

/// Upper bound ||f|| / (1 - |z|^2)^{(2+alpha)/p} on point evaluation in L_a^{p,alpha}.
double pointwise_bound(double norm, const DiskPoint& z, const SpaceParams& params);

/// Empirical constant C with C^{-1} <= (1-|a|^2)/(1-|z|^2), (1-|a|^2)/|1-conj(a)z| <= C
/// over `samples` seeded random pairs with beta(a, z) < r.
double comparability_constant(double r, int samples, unsigned long long seed);

/// Validates r > 0 for Bergman disks; warns once when r > 1.
void check_disk_radius(double r);

}  // namespace bergman
