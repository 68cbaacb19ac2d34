#include "bergman/geometry.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <sstream>

#include "bergman/errors.hpp"
#include "bergman/log.hpp"

namespace bergman {
DiskPoint::DiskPoint(Complex z) : z_(z) {
  constexpr double kLimit = (1.0 - kBoundaryGuard) * (1.0 - kBoundaryGuard);
  if (!(std::norm(z) < kLimit)) {
    std::ostringstream os;
    os << "point (" << z.real() << ", " << z.imag() << ") is not inside the unit disk";
    throw DomainError(os.str());
  }
}

void SpaceParams::validate() const {
  if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("p must be positive");
  if (!(alpha > -1.0) || !std::isfinite(alpha)) throw ConfigError("alpha must exceed -1");
  if (q && !(*q > 0.0)) throw ConfigError("q must be positive");
  if (beta && !(*beta > -1.0)) throw ConfigError("beta must exceed -1");
}

void check_disk_radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("Bergman disk radius must be positive");
  if (r > 1.0) {
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true)) {
      log_warning("Bergman radius r > 1 lies outside the validated range (0, 1]");
    }
  }
}

double BergmanDisk::s() const { return std::tanh(radius); }

EuclideanDisk BergmanDisk::euclidean() const { return bergman_disk(center, radius); }

DiskPoint mobius(const DiskPoint& a, const DiskPoint& z) {
  const Complex& av = a.value();
  const Complex& zv = z.value();
  return {(av - zv) / (1.0 - std::conj(av) * zv)};
}

Complex mobius_derivative(const DiskPoint& a, const DiskPoint& z) {
  const Complex d = 1.0 - std::conj(a.value()) * z.value();
  return -(1.0 - a.norm()) / (d * d);
}

double pseudo_distance(const DiskPoint& a, const DiskPoint& z) {
  const Complex& av = a.value();
  const Complex& zv = z.value();
  return std::abs(av - zv) / std::abs(1.0 - std::conj(av) * zv);
}

double bergman_distance(const DiskPoint& a, const DiskPoint& z) {
  return std::atanh(pseudo_distance(a, z));
}

EuclideanDisk bergman_disk(const DiskPoint& a, double r) {
  check_disk_radius(r);
  const double s = std::tanh(r);
  const double s2 = s * s;
  const double a2 = a.norm();
  const double denom = 1.0 - s2 * a2;
  return {(1.0 - s2) / denom * a.value(), (1.0 - a2) * s / denom};
}

double disk_area(const DiskPoint& a, double r) {
  check_disk_radius(r);
  const double s = std::tanh(r);
  const double a2 = a.norm();
  const double denom = 1.0 - a2 * s * s;
  return (1.0 - a2) * (1.0 - a2) * s * s / (denom * denom);
}

KernelExtrema kernel_extrema_on_disk(const DiskPoint& a, double r) {
  check_disk_radius(r);
  const double s = std::tanh(r);
  const double am = a.modulus();
  const double scale = (1.0 - a.norm()) * (1.0 - a.norm());
  return {std::pow(1.0 - s * am, 4) / scale, std::pow(1.0 + s * am, 4) / scale};
}

Complex weighted_kernel(const DiskPoint& w, const DiskPoint& z, double alpha) {
  if (!(alpha > -1.0)) throw ConfigError("alpha must exceed -1");
  const Complex base = 1.0 - w.value() * std::conj(z.value());
  // Re(base) > 0 on the bidisk, so the principal logarithm is continuous there.
  return std::exp(-(2.0 + alpha) * raw::principal_log(base));
}

Complex normalized_kernel(const DiskPoint& a, const DiskPoint& z) {
  const Complex d = 1.0 - std::conj(a.value()) * z.value();
  return (1.0 - a.norm()) / (d * d);
}

Complex test_function(const DiskPoint& a, const DiskPoint& z, const SpaceParams& params) {
  return raw::kernel_power(a.value(), z.value(), params.kernel_exponent());
}

double berezin_weight(Complex a, Complex z, double t) {
  return std::pow((1.0 - std::norm(a)) / std::norm(1.0 - std::conj(a) * z), t);
}

double pointwise_bound(double norm, const DiskPoint& z, const SpaceParams& params) {
  return norm / std::pow(1.0 - z.norm(), params.kernel_exponent());
}

double comparability_constant(double r, int samples, unsigned long long seed) {
  check_disk_radius(r);
  if (samples < 1) throw ConfigError("samples must be positive");
  const double s = std::tanh(r);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  double c = 1.0;
  for (int i = 0; i < samples; ++i) {
    const double ra = 0.999 * std::sqrt(unit(rng));
    const DiskPoint a(std::polar(ra, kTwoPi * unit(rng)));
    const DiskPoint w(std::polar(s * std::sqrt(unit(rng)), kTwoPi * unit(rng)));
    const DiskPoint z = mobius(a, w);
    const double one_minus_a = 1.0 - a.norm();
    const double q1 = one_minus_a / (1.0 - z.norm());
    const double q2 = one_minus_a / std::abs(1.0 - std::conj(a.value()) * z.value());
    c = std::max({c, q1, 1.0 / q1, q2, 1.0 / q2});
  }
  return c;
}

}  // namespace bergman
