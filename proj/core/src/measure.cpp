#include "bergman/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bergman/errors.hpp"
#include "bergman/log.hpp"

namespace bergman {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_scale(double scale) {
  if (!(scale >= 0.0) || !std::isfinite(scale)) throw ConfigError("measure scale must be finite and nonnegative");
}

void collect(const Measure& mu, MeasurePieces& out) {
  std::visit(Overloaded{
                 [&](const WeightedArea& m) {
                   out.densities.push_back({m.alpha, m.scale, {}});
                 },
                 [&](const RadialDensity& m) {
                   out.densities.push_back({m.gamma, m.scale / (m.gamma + 1.0), {}});
                 },
                 [&](const PolyWeighted& m) {
                   const Polynomial u = m.u;
                   const double p = m.p;
                   out.densities.push_back({m.beta, m.scale, [u, p](Complex z) { return std::pow(std::abs(u(z)), p); }});
                 },
                 [&](const Atomic& m) { out.atoms.insert(out.atoms.end(), m.atoms.begin(), m.atoms.end()); },
                 [&](const GridDensity& m) { out.grids.push_back(&m); },
                 [&](const SumMeasure& m) {
                   for (const auto& part : m.parts) collect(part, out);
                 },
             },
             mu.variant());
}

}  // namespace

Measure::Measure(WeightedArea m) : v_(m) {
  if (!(m.alpha > -1.0)) throw ConfigError("WeightedArea alpha must exceed -1");
  require_scale(m.scale);
}

Measure::Measure(RadialDensity m) : v_(m) {
  if (!(m.gamma > -1.0)) throw ConfigError("RadialDensity gamma must exceed -1");
  require_scale(m.scale);
}

Measure::Measure(PolyWeighted m) : v_(std::move(m)) {
  const auto& pw = std::get<PolyWeighted>(v_);
  if (!(pw.p > 0.0)) throw ConfigError("PolyWeighted p must be positive");
  if (!(pw.beta > -1.0)) throw ConfigError("PolyWeighted beta must exceed -1");
  require_scale(pw.scale);
}

Measure::Measure(Atomic m) : v_(std::move(m)) {
  for (const auto& atom : std::get<Atomic>(v_).atoms) {
    if (!(atom.mass > 0.0) || !std::isfinite(atom.mass)) throw ConfigError("atom masses must be positive");
  }
}

Measure::Measure(GridDensity m) : v_(std::move(m)) {
  const auto& g = std::get<GridDensity>(v_);
  if (!g.rule) throw ConfigError("GridDensity needs a quadrature rule");
  if (g.values.size() != g.rule->size()) throw ConfigError("GridDensity value count does not match its rule");
  for (double v : g.values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("GridDensity values must be finite and nonnegative");
  }
}

Measure::Measure(SumMeasure m) : v_(std::move(m)) {}

bool Measure::is_radial() const {
  return std::visit(Overloaded{
                        [](const WeightedArea&) { return true; },
                        [](const RadialDensity&) { return true; },
                        [](const PolyWeighted& m) {
                          int terms = 0;
                          for (int k = 0; k <= m.u.degree(); ++k) terms += m.u[k] != Complex(0.0);
                          return terms <= 1;
                        },
                        [](const Atomic& m) { return m.atoms.empty(); },
                        [](const GridDensity&) { return false; },
                        [](const SumMeasure& m) {
                          return std::all_of(m.parts.begin(), m.parts.end(),
                                             [](const Measure& part) { return part.is_radial(); });
                        },
                    },
                    v_);
}

std::string Measure::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const WeightedArea& m) { os << "area(alpha=" << m.alpha << ", scale=" << m.scale << ")"; },
                 [&](const RadialDensity& m) { os << "radial(gamma=" << m.gamma << ", scale=" << m.scale << ")"; },
                 [&](const PolyWeighted& m) {
                   os << "polyweighted(deg=" << m.u.degree() << ", p=" << m.p << ", beta=" << m.beta
                      << ", scale=" << m.scale << ")";
                 },
                 [&](const Atomic& m) { os << "atomic(" << m.atoms.size() << " atoms)"; },
                 [&](const GridDensity& m) { os << "grid(" << m.values.size() << " nodes)"; },
                 [&](const SumMeasure& m) {
                   os << "sum(";
                   for (std::size_t i = 0; i < m.parts.size(); ++i) os << (i ? ", " : "") << m.parts[i].describe();
                   os << ")";
                 },
             },
             v_);
  return os.str();
}

Measure scaled(const Measure& mu, double c) {
  require_scale(c);
  return std::visit(Overloaded{
                        [&](WeightedArea m) -> Measure {
                          m.scale *= c;
                          return m;
                        },
                        [&](RadialDensity m) -> Measure {
                          m.scale *= c;
                          return m;
                        },
                        [&](PolyWeighted m) -> Measure {
                          m.scale *= c;
                          return m;
                        },
                        [&](Atomic m) -> Measure {
                          if (c == 0.0) return Atomic{};
                          for (auto& atom : m.atoms) atom.mass *= c;
                          return m;
                        },
                        [&](GridDensity m) -> Measure {
                          for (auto& v : m.values) v *= c;
                          return m;
                        },
                        [&](SumMeasure m) -> Measure {
                          for (auto& part : m.parts) part = scaled(part, c);
                          return m;
                        },
                    },
                    mu.variant());
}

MeasurePieces decompose(const Measure& mu) {
  MeasurePieces out;
  collect(mu, out);
  return out;
}

QuadratureConfig QuadratureConfig::doubled() const {
  QuadratureConfig c = *this;
  c.n_radial *= 2;
  c.n_angular *= 2;
  c.n_disk_radial *= 2;
  c.n_disk_angular *= 2;
  return c;
}

void QuadratureConfig::validate() const {
  if (n_radial < 4 || n_angular < 4) throw ConfigError("quadrature needs at least 4 radial and 4 angular nodes");
  if (n_disk_radial < 1 || n_disk_angular < 1) throw ConfigError("disk quadrature needs positive node counts");
  if (!(angular_margin > 0.0) || max_angular_doublings < 0) throw ConfigError("invalid angular refinement settings");
}

Integrator::Integrator(QuadratureConfig config) : config_(config) { config_.validate(); }

std::shared_ptr<const QuadratureRule> Integrator::rule(double alpha) const {
  std::lock_guard lock(mutex_);
  auto it = rules_.find(alpha);
  if (it != rules_.end()) return it->second;
  auto built = std::make_shared<const QuadratureRule>(alpha, config_.n_radial, config_.n_angular,
                                                      config_.angular_margin, config_.max_angular_doublings);
  rules_.emplace(alpha, built);
  return built;
}

Complex Integrator::integrate(const Measure& mu, const ComplexIntegrand& g, double concentration) const {
  if (const auto* sum = std::get_if<SumMeasure>(&mu.variant())) {
    Complex total{};
    for (const auto& part : sum->parts) total += integrate(part, g, concentration);
    return total;
  }
  const MeasurePieces pieces = decompose(mu);
  Complex total{};
  for (const auto& d : pieces.densities) {
    if (d.factor == 0.0) continue;
    const auto r = rule(d.gamma);
    if (d.h) {
      total += d.factor * r->integrate([&](Complex z) { return d.h(z) * g(z); }, concentration);
    } else {
      total += d.factor * r->integrate(g, concentration);
    }
  }
  for (const auto* grid : pieces.grids) {
    Complex acc{};
    for (std::size_t i = 0; i < grid->values.size(); ++i) {
      if (grid->values[i] == 0.0) continue;
      acc += grid->rule->weight(i) * grid->values[i] * g(grid->rule->node(i));
    }
    total += acc;
  }
  for (const auto& atom : pieces.atoms) {
    const Complex v = g(atom.point);
    if (!std::isfinite(std::abs(v))) {
      std::ostringstream os;
      os << "integrand is not finite at atom (" << atom.point.re() << ", " << atom.point.im() << ")";
      throw NumericError(os.str());
    }
    total += atom.mass * v;
  }
  return total;
}

double Integrator::integrate_real(const Measure& mu, const RealIntegrand& g, double concentration) const {
  if (const auto* sum = std::get_if<SumMeasure>(&mu.variant())) {
    double total = 0.0;
    for (const auto& part : sum->parts) total += integrate_real(part, g, concentration);
    return total;
  }
  const MeasurePieces pieces = decompose(mu);
  double total = 0.0;
  for (const auto& d : pieces.densities) {
    if (d.factor == 0.0) continue;
    const auto r = rule(d.gamma);
    if (d.h) {
      total += d.factor * r->integrate_real([&](Complex z) { return d.h(z) * g(z); }, concentration);
    } else {
      total += d.factor * r->integrate_real(g, concentration);
    }
  }
  for (const auto* grid : pieces.grids) {
    double acc = 0.0;
    for (std::size_t i = 0; i < grid->values.size(); ++i) {
      if (grid->values[i] == 0.0) continue;
      acc += grid->rule->weight(i) * grid->values[i] * g(grid->rule->node(i));
    }
    total += acc;
  }
  for (const auto& atom : pieces.atoms) {
    const double v = g(atom.point);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "integrand is not finite at atom (" << atom.point.re() << ", " << atom.point.im() << ")";
      throw NumericError(os.str());
    }
    total += atom.mass * v;
  }
  return total;
}

double Integrator::total_mass(const Measure& mu) const {
  if (const auto* sum = std::get_if<SumMeasure>(&mu.variant())) {
    double total = 0.0;
    for (const auto& part : sum->parts) total += total_mass(part);
    return total;
  }
  const MeasurePieces pieces = decompose(mu);
  double total = 0.0;
  for (const auto& d : pieces.densities) {
    if (d.factor == 0.0) continue;
    total += d.h ? d.factor * rule(d.gamma)->integrate_real(d.h) : d.factor;
  }
  for (const auto* grid : pieces.grids) {
    for (std::size_t i = 0; i < grid->values.size(); ++i) total += grid->rule->weight(i) * grid->values[i];
  }
  for (const auto& atom : pieces.atoms) total += atom.mass;
  return total;
}

double Integrator::measure_of_disk(const Measure& mu, const DiskPoint& a, double r) const {
  return measure_of_union(mu, {BergmanDisk{a, r}});
}

double Integrator::measure_of_union(const Measure& mu, const std::vector<BergmanDisk>& disks) const {
  for (const auto& d : disks) check_disk_radius(d.radius);
  auto in_any_before = [&](Complex z, std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (bergman_distance(disks[j].center, DiskPoint(z)) < disks[j].radius) return true;
    }
    return false;
  };

  const MeasurePieces pieces = decompose(mu);
  double total = 0.0;
  for (const auto& d : pieces.densities) {
    if (d.factor == 0.0) continue;
    const double norm_const = d.factor * (d.gamma + 1.0);  // density = norm_const * h * (1-|z|^2)^gamma
    for (std::size_t k = 0; k < disks.size(); ++k) {
      total += norm_const * integrate_over_disk_real(
                                [&](Complex z) {
                                  if (k > 0 && in_any_before(z, k)) return 0.0;
                                  const double base = std::pow(1.0 - std::norm(z), d.gamma);
                                  return d.h ? base * d.h(z) : base;
                                },
                                disks[k].center, disks[k].radius, config_.n_disk_radial, config_.n_disk_angular);
    }
  }
  for (const auto* grid : pieces.grids) {
    for (std::size_t i = 0; i < grid->values.size(); ++i) {
      const DiskPoint z(grid->rule->node(i));
      const bool inside = std::any_of(disks.begin(), disks.end(), [&](const BergmanDisk& disk) {
        return bergman_distance(disk.center, z) < disk.radius;
      });
      if (inside) total += grid->rule->weight(i) * grid->values[i];
    }
  }
  for (const auto& atom : pieces.atoms) {
    const bool inside = std::any_of(disks.begin(), disks.end(), [&](const BergmanDisk& disk) {
      return bergman_distance(disk.center, atom.point) < disk.radius;
    });
    if (inside) total += atom.mass;
  }
  return total;
}

double Integrator::bergman_norm(const Polynomial& f, const SpaceParams& params) const {
  params.validate();
  if (f.is_zero()) return 0.0;
  const double integral =
      rule(params.alpha)->integrate_real([&](Complex z) { return abs_pow(f(z), params.p); });
  return std::pow(integral, 1.0 / params.p);
}

double Integrator::bergman_norm(const ComplexIntegrand& f, const SpaceParams& params, double concentration) const {
  params.validate();
  const double integral =
      rule(params.alpha)->integrate_real([&](Complex z) { return abs_pow(f(z), params.p); }, concentration);
  return std::pow(integral, 1.0 / params.p);
}

GridDensity resample(const GridDensity& grid, std::shared_ptr<const QuadratureRule> target) {
  if (!grid.rule || !target) throw ConfigError("resample needs source and target rules");
  const QuadratureRule& src = *grid.rule;
  {
    std::ostringstream os;
    os << "resampling grid density from " << src.n_radial() << "x" << src.n_angular() << " (alpha=" << src.alpha()
       << ") to " << target->n_radial() << "x" << target->n_angular() << " (alpha=" << target->alpha() << ")";
    log_info(os.str());
  }
  const auto radii = src.radii();
  const int na = src.n_angular();
  auto sample = [&](std::size_t i, double theta) {
    const double pos = theta / (2.0 * 3.14159265358979323846) * na;
    const double fl = std::floor(pos);
    const double frac = pos - fl;
    const std::size_t k0 = static_cast<std::size_t>(static_cast<long long>(fl) % na);
    const std::size_t k1 = (k0 + 1) % na;
    return (1.0 - frac) * grid.values[i * na + k0] + frac * grid.values[i * na + k1];
  };

  GridDensity out{target, std::vector<double>(target->size())};
  for (std::size_t idx = 0; idx < target->size(); ++idx) {
    const Complex z = target->node(idx);
    double theta = std::arg(z);
    if (theta < 0.0) theta += 2.0 * 3.14159265358979323846;
    const double t = std::norm(z);
    // radii are increasing; clamp outside the sampled range
    std::size_t hi = std::lower_bound(radii.begin(), radii.end(), std::sqrt(t)) - radii.begin();
    double value;
    if (hi == 0) {
      value = sample(0, theta);
    } else if (hi >= radii.size()) {
      value = sample(radii.size() - 1, theta);
    } else {
      const double t0 = radii[hi - 1] * radii[hi - 1];
      const double t1 = radii[hi] * radii[hi];
      const double w = (t - t0) / (t1 - t0);
      value = (1.0 - w) * sample(hi - 1, theta) + w * sample(hi, theta);
    }
    // density relative to dA_{alpha_src} -> relative to dA_{alpha_target}
    const double one_minus_t = 1.0 - t;
    const double convert = (src.alpha() + 1.0) / (target->alpha() + 1.0) *
                           std::pow(one_minus_t, src.alpha() - target->alpha());
    out.values[idx] = std::max(0.0, value * convert);
  }
  return out;
}

double holder_ratio(const Integrator& integ, const Polynomial& f, const Measure& mu, double p, double q,
                    double alpha) {
  SpaceParams params;
  params.p = p;
  params.alpha = alpha;
  params.validate();
  if (!(q > 0.0)) throw ConfigError("q must be positive");
  const double lhs = integ.integrate_real(mu, [&](Complex z) { return std::pow(std::abs(f(z)), q); });
  const double rhs = std::pow(integ.bergman_norm(f, params), q) * std::pow(integ.total_mass(mu), (p - q) / p);
  return lhs / rhs;
}

double sub_mean_value_ratio(const Polynomial& f, const DiskPoint& z, double r, const SpaceParams& params,
                            int n_radial, int n_angular) {
  params.validate();
  const double p = params.p;
  const double alpha = params.alpha;
  const double local = integrate_over_disk_real(
      [&](Complex w) { return std::pow(std::abs(f(w)), p) * (alpha + 1.0) * std::pow(1.0 - std::norm(w), alpha); },
      z, r, n_radial, n_angular);
  return std::pow(std::abs(f(z.value())), p) * std::pow(1.0 - z.norm(), 2.0 + alpha) / local;
}

}  // namespace bergman
