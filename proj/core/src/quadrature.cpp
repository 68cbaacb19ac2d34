#include "bergman/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bergman/errors.hpp"
#include "bergman/parallel.hpp"

namespace bergman {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct JacobiValue {
  double p;   // P_n(x)
  double pm;  // P_{n-1}(x)
};

JacobiValue jacobi_p(int n, double a, double b, double x) {
  double p0 = 1.0;
  double p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
  if (n == 0) return {p0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double c = 2.0 * k + a + b;
    const double a1 = 2.0 * k * (k + a + b) * (c - 2.0);
    const double a2 = (c - 1.0) * (c * (c - 2.0) * x + a * a - b * b);
    const double a3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c;
    const double p2 = (a2 * p1 - a3 * p0) / a1;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

// (1 - x^2) P_n'(x) from P_n and P_{n-1}.
double jacobi_derivative(int n, double a, double b, double x, const JacobiValue& v) {
  const double c = 2.0 * n + a + b;
  const double num = n * ((a - b) - c * x) * v.p + 2.0 * (n + a) * (n + b) * v.pm;
  return num / (c * (1.0 - x * x));
}

}  // namespace

GaussRule gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw ConfigError("Gauss-Jacobi rule needs at least one node");
  if (!(a > -1.0) || !(b > -1.0)) throw ConfigError("Gauss-Jacobi exponents must exceed -1");

  // Golub-Welsch eigenvalues seed Newton on P_n.
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 1));
  for (int k = 0; k < n; ++k) {
    const double c = 2.0 * k + a + b;
    diag(k) = (k == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (c * (c + 2.0));
  }
  for (int k = 1; k < n; ++k) {
    const double c = 2.0 * k + a + b;
    const double beta = 4.0 * k * (k + a) * (k + b) * (k + a + b) / (c * c * (c + 1.0) * (c - 1.0));
    sub(k - 1) = std::sqrt(beta);
  }
  std::vector<double> x(n);
  if (n == 1) {
    x[0] = diag(0);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericError("Gauss-Jacobi eigenvalue solve failed");
    for (int i = 0; i < n; ++i) x[i] = solver.eigenvalues()(i);
  }

  const double log_const = std::lgamma(n + a + 1.0) + std::lgamma(n + b + 1.0) - std::lgamma(n + a + b + 1.0) -
                           std::lgamma(n + 1.0) + (a + b + 1.0) * std::log(2.0);
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double xi = x[i];
    for (int it = 0; it < 6; ++it) {
      const JacobiValue v = jacobi_p(n, a, b, xi);
      const double dp = jacobi_derivative(n, a, b, xi, v);
      const double step = v.p / dp;
      if (!std::isfinite(step) || std::abs(step) > 1e-6) break;
      xi -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const JacobiValue v = jacobi_p(n, a, b, xi);
    const double dp = jacobi_derivative(n, a, b, xi, v);
    rule.nodes[i] = xi;
    rule.weights[i] = std::exp(log_const) / ((1.0 - xi * xi) * dp * dp);
  }
  return rule;
}

QuadratureRule::QuadratureRule(double alpha, int n_radial, int n_angular, double angular_margin,
                               int max_angular_doublings)
    : alpha_(alpha), n_angular_(n_angular), angular_margin_(angular_margin), max_doublings_(max_angular_doublings) {
  if (!(alpha > -1.0) || !std::isfinite(alpha)) throw ConfigError("quadrature alpha must exceed -1");
  if (n_radial < 4 || n_angular < 4) throw ConfigError("quadrature needs at least 4 radial and 4 angular nodes");
  if (!(angular_margin > 0.0) || max_angular_doublings < 0) throw ConfigError("invalid angular refinement settings");

  // t = |z|^2 = (1 + x) / 2 turns (1-t)^alpha dt into a Jacobi weight in x.
  const GaussRule g = gauss_jacobi(n_radial, alpha, 0.0);
  radii_.resize(n_radial);
  radial_weights_.resize(n_radial);
  double total = 0.0;
  for (int i = 0; i < n_radial; ++i) {
    radii_[i] = std::sqrt(0.5 * (1.0 + g.nodes[i]));
    radial_weights_[i] = g.weights[i];
    total += g.weights[i];
  }
  const double expected = std::exp((alpha + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) - std::lgamma(alpha + 2.0));
  if (std::abs(total / expected - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "Gauss-Jacobi weights for alpha=" << alpha << " sum to " << total << ", expected " << expected;
    throw NumericError(os.str());
  }
  for (double& w : radial_weights_) w /= total;
}

Complex QuadratureRule::node(std::size_t index) const {
  const std::size_t i = index / n_angular_;
  const std::size_t k = index % n_angular_;
  return std::polar(radii_.at(i), kTwoPi * static_cast<double>(k) / n_angular_);
}

double QuadratureRule::weight(std::size_t index) const {
  return radial_weights_.at(index / n_angular_) / n_angular_;
}

int QuadratureRule::angular_count(std::size_t radial_index, double concentration) const {
  int n = n_angular_;
  if (concentration <= 0.0) return n;
  const double x = std::min(concentration, 1.0) * radii_[radial_index];
  const double decay = -std::log(x);
  if (!(decay > 0.0)) return n << max_doublings_;
  const double needed = angular_margin_ / decay;
  for (int d = 0; d < max_doublings_ && n < needed; ++d) n <<= 1;
  return n;
}

const std::vector<Complex>& QuadratureRule::unit_roots(int doublings) const {
  std::lock_guard lock(roots_->mutex);
  auto& tables = roots_->tables;
  if (tables.size() <= static_cast<std::size_t>(doublings)) tables.resize(doublings + 1);
  if (!tables[doublings]) {
    const int n = n_angular_ << doublings;
    auto table = std::make_shared<std::vector<Complex>>(n);
    for (int k = 0; k < n; ++k) (*table)[k] = std::polar(1.0, kTwoPi * static_cast<double>(k) / n);
    tables[doublings] = std::move(table);
  }
  return *tables[doublings];
}

template <typename Value, typename Fn>
Value QuadratureRule::integrate_impl(const Fn& g, double concentration) const {
  const std::size_t nr = radii_.size();
  std::vector<Value> ring(nr);
  parallel_for(nr, [&](std::size_t i) {
    const int n = angular_count(i, concentration);
    int doublings = 0;
    while ((n_angular_ << doublings) < n) ++doublings;
    const std::vector<Complex>& roots = unit_roots(doublings);
    const double rho = radii_[i];
    Value acc{};
    for (int k = 0; k < n; ++k) {
      const Complex z = rho * roots[k];
      const Value v = g(z);
      if (!std::isfinite(std::abs(v))) {
        std::ostringstream os;
        os << "integrand is not finite at node (" << z.real() << ", " << z.imag() << ")";
        throw NumericError(os.str());
      }
      acc += v;
    }
    ring[i] = acc / static_cast<double>(n);
  });
  Value total{};
  for (std::size_t i = 0; i < nr; ++i) total += radial_weights_[i] * ring[i];
  return total;
}

Complex QuadratureRule::integrate(const ComplexIntegrand& g, double concentration) const {
  return integrate_impl<Complex>(g, concentration);
}

double QuadratureRule::integrate_real(const RealIntegrand& g, double concentration) const {
  return integrate_impl<double>(g, concentration);
}

QuadratureRule build_quadrature(double alpha, int n_radial, int n_angular) {
  return QuadratureRule(alpha, n_radial, n_angular);
}

namespace {

template <typename Value, typename Fn>
Value disk_impl(const Fn& g, const DiskPoint& a, double r, int n_radial, int n_angular) {
  check_disk_radius(r);
  if (n_radial < 1 || n_angular < 1) throw ConfigError("disk quadrature needs positive node counts");
  const double s = std::tanh(r);
  const GaussRule leg = gauss_jacobi(n_radial, 0.0, 0.0);
  const Complex av = a.value();
  const double one_minus_a2 = 1.0 - a.norm();
  Value total{};
  for (int i = 0; i < n_radial; ++i) {
    // t = |w|^2 in [0, s^2]; dA(w) = dt dtheta / (2 pi).
    const double t = 0.5 * s * s * (1.0 + leg.nodes[i]);
    const double rho = std::sqrt(t);
    Value ring{};
    for (int k = 0; k < n_angular; ++k) {
      const Complex w = std::polar(rho, kTwoPi * (k + 0.5) / n_angular);
      const Complex d = 1.0 - std::conj(av) * w;
      const Complex z = (av - w) / d;
      const double jac = one_minus_a2 * one_minus_a2 / std::norm(d * d);
      ring += g(z) * jac;
    }
    total += (0.5 * s * s * leg.weights[i] / n_angular) * ring;
  }
  return total;
}

}  // namespace

Complex integrate_over_disk(const ComplexIntegrand& g, const DiskPoint& a, double r, int n_radial, int n_angular) {
  return disk_impl<Complex>(g, a, r, n_radial, n_angular);
}

double integrate_over_disk_real(const RealIntegrand& g, const DiskPoint& a, double r, int n_radial, int n_angular) {
  return disk_impl<double>(g, a, r, n_radial, n_angular);
}

}  // namespace bergman
