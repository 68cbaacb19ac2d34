#include "bergman/condexp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bergman/errors.hpp"

namespace bergman {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kCriticalTol = 1e-12;

Complex blaschke_value(const BlaschkeProduct& b, Complex z) {
  Complex v = 1.0;
  for (const auto& a : b.zeros) v *= (a.value() - z) / (1.0 - std::conj(a.value()) * z);
  return v;
}

Complex blaschke_derivative(const BlaschkeProduct& b, Complex z) {
  Complex total{};
  for (std::size_t i = 0; i < b.zeros.size(); ++i) {
    const Complex a = b.zeros[i].value();
    const Complex d = 1.0 - std::conj(a) * z;
    Complex term = -(1.0 - std::norm(a)) / (d * d);
    for (std::size_t j = 0; j < b.zeros.size(); ++j) {
      if (j == i) continue;
      const Complex aj = b.zeros[j].value();
      term *= (aj - z) / (1.0 - std::conj(aj) * z);
    }
    total += term;
  }
  return total;
}

}  // namespace

AnalyticSelfMap::AnalyticSelfMap(MonomialMap m) : v_(m) {
  if (m.n < 1) throw ConfigError("monomial map degree must be at least 1");
}

AnalyticSelfMap::AnalyticSelfMap(BlaschkeProduct m) : v_(std::move(m)) {
  if (std::get<BlaschkeProduct>(v_).zeros.empty()) throw ConfigError("Blaschke product needs at least one zero");
}

int AnalyticSelfMap::multiplicity() const {
  return std::visit(Overloaded{
                        [](const IdentityMap&) { return 1; },
                        [](const MonomialMap& m) { return m.n; },
                        [](const BlaschkeProduct& b) { return static_cast<int>(b.zeros.size()); },
                    },
                    v_);
}

Complex AnalyticSelfMap::operator()(Complex z) const {
  return std::visit(Overloaded{
                        [&](const IdentityMap&) { return z; },
                        [&](const MonomialMap& m) { return std::pow(z, m.n); },
                        [&](const BlaschkeProduct& b) { return blaschke_value(b, z); },
                    },
                    v_);
}

Complex AnalyticSelfMap::derivative(Complex z) const {
  return std::visit(Overloaded{
                        [&](const IdentityMap&) { return Complex(1.0); },
                        [&](const MonomialMap& m) {
                          return m.n == 1 ? Complex(1.0) : static_cast<double>(m.n) * std::pow(z, m.n - 1);
                        },
                        [&](const BlaschkeProduct& b) { return blaschke_derivative(b, z); },
                    },
                    v_);
}

bool AnalyticSelfMap::is_rotation_equivariant() const {
  return !std::holds_alternative<BlaschkeProduct>(v_);
}

std::string AnalyticSelfMap::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const IdentityMap&) { os << "identity"; },
                 [&](const MonomialMap& m) { os << "z^" << m.n; },
                 [&](const BlaschkeProduct& b) { os << "blaschke(" << b.zeros.size() << " zeros)"; },
             },
             v_);
  return os.str();
}

std::vector<Complex> polynomial_roots(const Polynomial& p) {
  const int n = p.degree();
  if (n < 1) throw NumericError("polynomial of degree < 1 has no isolated roots");
  const auto& c = p.coefficients();
  const Complex lead = c.back();

  // Cauchy bound for the initial circle.
  double bound = 0.0;
  for (int k = 0; k < n; ++k) bound = std::max(bound, std::abs(c[k] / lead));
  const double radius = 0.5 * (1.0 + bound);
  std::vector<Complex> z(n);
  for (int k = 0; k < n; ++k) z[k] = std::polar(radius, 2.0 * std::numbers::pi * (k + 0.25) / n + 0.4);

  for (int iter = 0; iter < 500; ++iter) {
    double max_step = 0.0;
    for (int k = 0; k < n; ++k) {
      const Complex v = p(z[k]);
      const Complex dv = p.derivative_at(z[k]);
      if (v == Complex{}) continue;
      const Complex ratio = v / dv;
      Complex repulse{};
      for (int j = 0; j < n; ++j)
        if (j != k) repulse += 1.0 / (z[k] - z[j]);
      const Complex step = ratio / (1.0 - ratio * repulse);
      if (!std::isfinite(std::abs(step))) continue;
      z[k] -= step;
      max_step = std::max(max_step, std::abs(step) / std::max(1.0, std::abs(z[k])));
    }
    if (max_step < 1e-15) break;
  }
  for (auto& root : z) {
    for (int it = 0; it < 3; ++it) {
      const Complex dv = p.derivative_at(root);
      if (std::abs(dv) == 0.0) break;
      const Complex step = p(root) / dv;
      if (!std::isfinite(std::abs(step))) break;
      root -= step;
    }
  }
  return z;
}

LevelSet level_set(const AnalyticSelfMap& phi, const DiskPoint& z) {
  const Complex dz = phi.derivative(z.value());
  if (std::abs(dz) < kCriticalTol) {
    std::ostringstream os;
    os << "point (" << z.re() << ", " << z.im() << ") is a critical point of " << phi.describe();
    throw CriticalPointError(os.str());
  }

  LevelSet ls{z, {}, {}, {}};
  std::vector<Complex> candidates;
  std::visit(Overloaded{
                 [&](const IdentityMap&) { candidates.push_back(z.value()); },
                 [&](const MonomialMap& m) {
                   for (int k = 0; k < m.n; ++k)
                     candidates.push_back(z.value() * std::polar(1.0, 2.0 * std::numbers::pi * k / m.n));
                 },
                 [&](const BlaschkeProduct& b) {
                   const Complex w = blaschke_value(b, z.value());
                   Polynomial num{1.0};
                   Polynomial den{1.0};
                   for (const auto& a : b.zeros) {
                     num = num * Polynomial{a.value(), -1.0};
                     den = den * Polynomial{1.0, -std::conj(a.value())};
                   }
                   std::vector<Complex> roots = polynomial_roots(num + den * (-w));
                   // Pin the root nearest to z onto z itself.
                   auto nearest = std::min_element(roots.begin(), roots.end(), [&](Complex x, Complex y) {
                     return std::abs(x - z.value()) < std::abs(y - z.value());
                   });
                   if (std::abs(*nearest - z.value()) < 1e-8) *nearest = z.value();
                   for (const Complex& root : roots) {
                     const double residual = std::abs(blaschke_value(b, root) - w);
                     if (!(residual < kPreimageResidual) && std::abs(root) < 1.0) {
                       std::ostringstream os;
                       os << "Blaschke preimage did not converge: residual " << residual;
                       throw NumericError(os.str());
                     }
                     candidates.push_back(root);
                   }
                 },
             },
             phi.variant());

  std::vector<double> inv;
  for (const Complex& zeta : candidates) {
    if (!(std::abs(zeta) < 1.0 - kBoundaryGuard)) {
      ls.rejected.push_back({zeta, "outside the unit disk"});
      continue;
    }
    const double d = std::abs(phi.derivative(zeta));
    if (d < kCriticalTol) {
      ls.rejected.push_back({zeta, "critical point of the map"});
      continue;
    }
    ls.points.emplace_back(zeta);
    inv.push_back(1.0 / (d * d));
  }
  if (const auto* m = std::get_if<MonomialMap>(&phi.variant())) {
    // |phi'| is constant on |zeta| = |z|
    ls.weights.assign(ls.points.size(), 1.0 / m->n);
    return ls;
  }
  double total = 0.0;
  for (double v : inv) total += v;
  for (double v : inv) ls.weights.push_back(v / total);
  return ls;
}

Complex average(const LevelSet& ls, const ComplexIntegrand& g) {
  Complex acc{};
  for (std::size_t j = 0; j < ls.points.size(); ++j) acc += ls.weights[j] * g(ls.points[j].value());
  return acc;
}

Complex cond_expect(const AnalyticSelfMap& phi, const Polynomial& f, const DiskPoint& z) {
  return average(level_set(phi, z), [&](Complex x) { return f(x); });
}

Complex cond_expect(const AnalyticSelfMap& phi, const ComplexIntegrand& f, const DiskPoint& z) {
  return average(level_set(phi, z), f);
}

Complex cond_expect_extended(const AnalyticSelfMap& phi, const ComplexIntegrand& f, Complex z) {
  // Fast paths avoid building a LevelSet per quadrature node.
  if (std::holds_alternative<IdentityMap>(phi.variant())) return f(z);
  if (const auto* m = std::get_if<MonomialMap>(&phi.variant())) {
    if (m->n == 1 || z == Complex{}) return f(z);
    Complex acc{};
    for (int k = 0; k < m->n; ++k) acc += f(z * std::polar(1.0, 2.0 * std::numbers::pi * k / m->n));
    return acc / static_cast<double>(m->n);
  }
  return average(level_set(phi, DiskPoint(z)), f);
}

Polynomial cond_expect_poly(int n, const Polynomial& f) {
  if (n < 1) throw ConfigError("monomial map degree must be at least 1");
  std::vector<Complex> c(f.coefficients().size());
  for (std::size_t m = 0; m < c.size(); m += static_cast<std::size_t>(n)) c[m] = f[m];
  return Polynomial(std::move(c));
}

double evaluation_bound_ratio(const AnalyticSelfMap& phi, const ComplexIntegrand& f, double norm,
                              const DiskPoint& z, const SpaceParams& params) {
  params.validate();
  if (!(norm > 0.0)) throw ConfigError("evaluation bound needs a nonzero norm");
  return std::abs(cond_expect(phi, f, z)) * std::pow(1.0 - z.norm(), params.kernel_exponent()) / norm;
}

double evaluation_bound_probe(const Integrator& integ, const AnalyticSelfMap& phi, const Polynomial& f,
                              const DiskPoint& z, const SpaceParams& params) {
  const double norm = integ.bergman_norm(f, params);
  return evaluation_bound_ratio(phi, [&](Complex x) { return f(x); }, norm, z, params);
}

}  // namespace bergman
