#pragma once

// Reference values computed without the library's quadrature or closed forms.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <bergman/geometry.hpp>

namespace oracle {

using Complex = std::complex<double>;

inline Complex random_disk_point(std::mt19937_64& rng, double max_modulus) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double rho = max_modulus * std::sqrt(u(rng));
  return std::polar(rho, 2.0 * std::numbers::pi * u(rng));
}

/// Psi_a of (1 - |z|^2)^gamma dA with exponent t, by the power series of |1 - conj(a) z|^{-2t}.
inline double psi_radial_series(double a_mod, double gamma, double t) {
  const double x = a_mod * a_mod;
  double sum = 0.0;
  for (int n = 0; n < 200000; ++n) {
    const double log_c = std::lgamma(n + t) - std::lgamma(n + 1.0) - std::lgamma(t);
    const double log_b = std::lgamma(n + 1.0) + std::lgamma(gamma + 1.0) - std::lgamma(n + gamma + 2.0);
    const double term = std::exp(2.0 * log_c + log_b + (n > 0 ? n * std::log(x) : 0.0));
    sum += term;
    if (n > 10 && term < 1e-18 * sum) break;
  }
  return std::pow(1.0 - x, t) * sum;
}

/// Integral of (1 - |z|^2)^gamma dA over the Euclidean disk |z - c| < R, midpoint rule in polar
/// coordinates about c.
inline double radial_mass_of_disk(Complex c, double R, double gamma, int n = 1500) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = R * (i + 0.5) / n;
    for (int k = 0; k < n; ++k) {
      const double th = 2.0 * std::numbers::pi * (k + 0.5) / n;
      const Complex z = c + std::polar(s, th);
      sum += std::pow(1.0 - std::norm(z), gamma) * s;
    }
  }
  return sum * (R / n) * (2.0 * std::numbers::pi / n) / std::numbers::pi;
}

/// ||z^m||^2 in L_a^{2,alpha}: Gamma(m+1) Gamma(alpha+2) / Gamma(m+alpha+2).
inline double monomial_norm_sq(int m, double alpha) {
  return std::exp(std::lgamma(m + 1.0) + std::lgamma(alpha + 2.0) - std::lgamma(m + alpha + 2.0));
}

/// E(z^m)(z) under z^n: z^m times the mean of the n-th roots of unity raised to m.
inline Complex monomial_cond_expect(int n, int m, Complex z) {
  Complex mean = 0.0;
  for (int k = 0; k < n; ++k) mean += std::polar(1.0, 2.0 * std::numbers::pi * k * m / n);
  return mean / static_cast<double>(n) * std::pow(z, m);
}

}  // namespace oracle
