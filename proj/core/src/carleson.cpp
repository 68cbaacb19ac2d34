#include "bergman/carleson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "bergman/errors.hpp"
#include "bergman/parallel.hpp"

namespace bergman {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double safe_ratio(double num, double den) {
  if (num == 0.0 && den == 0.0) return 1.0;
  if (den == 0.0) return kNaN;
  return num / den;
}

std::string point_id(const char* prefix, const DiskPoint& a) {
  std::ostringstream os;
  os.precision(17);
  os << prefix << "(" << a.re() << "," << a.im() << ")";
  return os.str();
}

// |phi_a'(w)| = (1 - |a|^2) / |1 - conj(a) w|^2
double mobius_jacobian_root(Complex a, Complex w) { return (1.0 - std::norm(a)) / std::norm(1.0 - std::conj(a) * w); }

}  // namespace

void GridSpec::validate() const {
  if (min_level < 1 || max_level < min_level) throw ConfigError("grid levels must satisfy 1 <= min_level <= max_level");
  if (max_level > 40) throw ConfigError("grid max_level must not exceed 40");
  if (n_theta < 1) throw ConfigError("grid n_theta must be positive");
}

GridSpec GridSpec::doubled() const {
  GridSpec g = *this;
  g.n_theta *= 2;
  return g;
}

double GridSpec::finest_gap() const { return std::ldexp(1.0, -max_level); }

double grid_ring_radius(int ring) { return ring == 0 ? 0.0 : 1.0 - std::ldexp(1.0, -ring); }

std::vector<DiskPoint> grid_points(const GridSpec& grid, int level) {
  grid.validate();
  std::vector<DiskPoint> pts;
  pts.reserve(1 + static_cast<std::size_t>(level) * grid.n_theta);
  pts.emplace_back(0.0, 0.0);
  for (int i = 1; i <= level; ++i) {
    const double radius = grid_ring_radius(i);
    for (int k = 0; k < grid.n_theta; ++k) pts.emplace_back(std::polar(radius, kTwoPi * k / grid.n_theta));
  }
  return pts;
}

GrowthDiagnostics assess_growth(std::vector<double> gaps, std::vector<double> values) {
  GrowthDiagnostics g;
  g.gaps = std::move(gaps);
  g.values = std::move(values);
  const std::size_t n = std::min(g.gaps.size(), g.values.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(g.values[i])) {
      g.slope = -std::numeric_limits<double>::infinity();
      g.divergent = true;
      return g;
    }
  }
  if (n < 3) return g;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = n - 3; i < n; ++i) {
    if (!(g.values[i] > 0.0)) continue;
    const double x = std::log(g.gaps[i]);
    const double y = std::log(g.values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return g;
  const double denom = m * sxx - sx * sx;
  g.slope = denom == 0.0 ? 0.0 : (m * sxy - sx * sy) / denom;
  g.divergent = g.slope <= kDivergenceSlope;
  return g;
}

std::string to_string(SymmetryMode mode) {
  return mode == SymmetryMode::Unconditional ? "unconditional" : "symmetrized";
}

SymmetryMode parse_symmetry_mode(const std::string& text) {
  if (text == "unconditional") return SymmetryMode::Unconditional;
  if (text == "symmetrized") return SymmetryMode::Symmetrized;
  throw ConfigError("mode must be \"unconditional\" or \"symmetrized\", got \"" + text + "\"");
}

double psi_transform(const Integrator& integ, const Measure& mu, const DiskPoint& a, double alpha,
                     std::optional<double> t) {
  if (!(alpha > -1.0)) throw ConfigError("alpha must exceed -1");
  const double exponent = t.value_or(2.0 + alpha);
  if (!(exponent > 0.0)) throw ConfigError("Psi exponent t must be positive");

  const Complex av = a.value();
  const MeasurePieces pieces = decompose(mu);
  double total = 0.0;
  for (const auto& d : pieces.densities) {
    if (d.factor == 0.0) continue;
    // z = phi_a(w):  |k_a(z)|^t (1-|z|^2)^gamma dA(z) = |phi_a'(w)|^{2+gamma-t} (1-|w|^2)^gamma dA(w)
    const double e = 2.0 + d.gamma - exponent;
    const bool flat = (e == 0.0) && !d.h;
    const auto rule = integ.rule(d.gamma);
    const double value = rule->integrate_real(
        [&](Complex w) {
          double v = e == 0.0 ? 1.0 : std::pow(mobius_jacobian_root(av, w), e);
          if (d.h) v *= d.h((av - w) / (1.0 - std::conj(av) * w));
          return v;
        },
        flat ? 0.0 : a.modulus());
    total += d.factor * value;
  }
  for (const auto* grid : pieces.grids) {
    for (std::size_t i = 0; i < grid->values.size(); ++i) {
      if (grid->values[i] == 0.0) continue;
      total += grid->rule->weight(i) * grid->values[i] * berezin_weight(av, grid->rule->node(i), exponent);
    }
  }
  for (const auto& atom : pieces.atoms) total += atom.mass * berezin_weight(av, atom.point, exponent);
  return total;
}

double psi_transform_direct(const Integrator& integ, const Measure& mu, const DiskPoint& a, double t) {
  if (!(t > 0.0)) throw ConfigError("Psi exponent t must be positive");
  const Complex av = a.value();
  return integ.integrate_real(mu, [&](Complex z) { return berezin_weight(av, z, t); }, a.modulus());
}

namespace {

double psi_or_inf(const Integrator& integ, const Measure& mu, const DiskPoint& a, double alpha, double t) {
  try {
    const double v = psi_transform(integ, mu, a, alpha, t);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  } catch (const NumericError&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

PsiSup psi_sup(const Integrator& integ, const Measure& mu, double alpha, double t, const GridSpec& grid) {
  grid.validate();
  const std::vector<DiskPoint> pts = grid_points(grid, grid.max_level);
  std::vector<double> values(pts.size());
  const bool radial = mu.is_radial();
  if (radial) {
    std::vector<double> ring(grid.max_level + 1);
    parallel_for(ring.size(), [&](std::size_t i) {
      ring[i] = psi_or_inf(integ, mu, DiskPoint(grid_ring_radius(static_cast<int>(i))), alpha, t);
    });
    values[0] = ring[0];
    for (std::size_t k = 1; k < pts.size(); ++k) values[k] = ring[1 + (k - 1) / grid.n_theta];
  } else {
    parallel_for(pts.size(), [&](std::size_t k) { values[k] = psi_or_inf(integ, mu, pts[k], alpha, t); });
  }

  PsiSup out;
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k)
    if (values[k] > values[best]) best = k;
  out.grid_sup = values[best];
  out.sup = values[best];
  out.argmax = pts[best];

  std::vector<double> gaps, maxima;
  for (int j = grid.min_level; j <= grid.max_level; ++j) {
    const std::size_t prefix = 1 + static_cast<std::size_t>(j) * grid.n_theta;
    gaps.push_back(std::ldexp(1.0, -j));
    maxima.push_back(*std::max_element(values.begin(), values.begin() + prefix));
  }
  out.growth = assess_growth(std::move(gaps), std::move(maxima));

  if (grid.refine && std::isfinite(out.sup) && out.sup > 0.0) {
    const double rho_max = grid_ring_radius(grid.max_level);
    double rho = out.argmax.modulus();
    double theta = std::arg(out.argmax.value());
    double d_rho = 0.5 * (1.0 - rho);
    double d_theta = radial ? 0.0 : std::numbers::pi / grid.n_theta;
    double best_value = out.sup;
    for (int round = 0; round < 16; ++round) {
      bool improved = false;
      const double moves[4][2] = {{d_rho, 0.0}, {-d_rho, 0.0}, {0.0, d_theta}, {0.0, -d_theta}};
      for (const auto& mv : moves) {
        if (mv[0] == 0.0 && mv[1] == 0.0) continue;
        const double r2 = std::clamp(rho + mv[0], 0.0, rho_max);
        const double t2 = theta + mv[1];
        const DiskPoint cand(std::polar(r2, t2));
        const double v = psi_or_inf(integ, mu, cand, alpha, t);
        if (v > best_value) {
          best_value = v;
          rho = r2;
          theta = t2;
          improved = true;
          break;
        }
      }
      if (!improved) {
        d_rho *= 0.5;
        d_theta *= 0.5;
      }
    }
    if (best_value > out.sup) {
      out.sup = best_value;
      out.argmax = DiskPoint(std::polar(rho, theta));
    }
  }
  return out;
}

double disk_bound(const DiskPoint& a, double alpha, double r) {
  const double s = std::tanh(r);
  const double d = 1.0 - s * a.modulus();
  return std::pow((1.0 - a.norm()) / (d * d), alpha + 2.0);
}

double disk_normalizer(double alpha, double r) {
  const double s = std::tanh(r);
  return 1.0 - std::pow(1.0 - s * s, alpha + 1.0);
}

DiskConstant disk_constant(const Integrator& integ, const Measure& mu, double alpha, double r,
                           const HyperbolicLattice& lat, SymmetryMode mode, const AnalyticSelfMap& phi) {
  if (!(alpha > -1.0)) throw ConfigError("alpha must exceed -1");
  if (std::abs(lat.r - r) > 1e-15) throw ConfigError("lattice radius does not match r");
  int copies = 1;
  if (mode == SymmetryMode::Symmetrized) {
    const auto* m = std::get_if<MonomialMap>(&phi.variant());
    if (!m) throw ConfigError("symmetrized mode requires a monomial map");
    copies = m->n;
  }

  auto mass_at = [&](const DiskPoint& a) {
    if (copies == 1) return integ.measure_of_disk(mu, a, r);
    std::vector<BergmanDisk> orbit;
    for (int k = 0; k < copies; ++k) orbit.push_back({DiskPoint(a.value() * std::polar(1.0, kTwoPi * k / copies)), r});
    return integ.measure_of_union(mu, orbit);
  };

  std::vector<double> ratio(lat.size());
  if (mu.is_radial()) {
    // mu(D(a, r)) and the bound depend on |a| only; lattice points come in
    // orbits of equal modulus under the rotations of the lattice.
    std::vector<std::size_t> order(lat.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      return lat.points[i].modulus() < lat.points[j].modulus();
    });
    std::vector<std::size_t> reps;
    std::vector<std::size_t> group(lat.size());
    for (std::size_t n = 0; n < order.size(); ++n) {
      const double m = lat.points[order[n]].modulus();
      if (reps.empty() || m - lat.points[reps.back()].modulus() > 1e-12 * (1.0 - m)) reps.push_back(order[n]);
      group[order[n]] = reps.size() - 1;
    }
    std::vector<double> per_rep(reps.size());
    parallel_for(reps.size(), [&](std::size_t g) {
      const DiskPoint& a = lat.points[reps[g]];
      per_rep[g] = mass_at(a) / disk_bound(a, alpha, r);
    });
    for (std::size_t k = 0; k < lat.size(); ++k) ratio[k] = per_rep[group[k]];
  } else {
    parallel_for(lat.size(), [&](std::size_t k) { ratio[k] = mass_at(lat.points[k]) / disk_bound(lat.points[k], alpha, r); });
  }

  DiskConstant out;
  for (std::size_t k = 0; k < ratio.size(); ++k)
    if (ratio[k] > ratio[out.argmax]) out.argmax = k;
  out.c2 = ratio.empty() ? 0.0 : ratio[out.argmax];
  out.c2_normalized = out.c2 / disk_normalizer(alpha, r);

  // Per-shell maxima: the bound itself peaks at moderate |a|, so a running
  // maximum would hide slow growth near the boundary.
  std::vector<double> gaps, maxima;
  for (int m = 1; m < lat.shell_count(); ++m) {
    if (lat.shell_offsets[m] == lat.shell_offsets[m + 1]) continue;
    double shell_max = 0.0;
    for (std::size_t k = lat.shell_offsets[m]; k < lat.shell_offsets[m + 1]; ++k) shell_max = std::max(shell_max, ratio[k]);
    gaps.push_back(1.0 - lat.shell_max_modulus[m]);
    maxima.push_back(shell_max);
  }
  out.growth = assess_growth(std::move(gaps), std::move(maxima));
  return out;
}

std::vector<Polynomial> random_polynomials(int count, int degree, std::uint64_t seed) {
  if (count < 0 || degree < 0) throw ConfigError("random family needs nonnegative count and degree");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Polynomial> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    std::vector<Complex> c(degree + 1);
    for (auto& x : c) {
      const double re = normal(rng);
      const double im = normal(rng);
      x = {re, im};
    }
    out.emplace_back(std::move(c));
  }
  return out;
}

TestConstant test_constant(const Integrator& integ, const Measure& mu, const SpaceParams& params,
                           const AnalyticSelfMap& phi, const FamilySpec& family, const GridSpec& grid,
                           SymmetryMode mode) {
  params.validate();
  grid.validate();
  if (mode == SymmetryMode::Symmetrized && !std::holds_alternative<MonomialMap>(phi.variant()))
    throw ConfigError("symmetrized mode requires a monomial map");

  const double p = params.p;
  const double e = params.kernel_exponent();
  const std::vector<Polynomial> randoms =
      family.random_count > 0 ? random_polynomials(family.random_count, family.random_degree, family.seed)
                              : std::vector<Polynomial>{};

  std::vector<DiskPoint> kernel_points;
  if (family.kernels) {
    kernel_points = mode == SymmetryMode::Symmetrized ? std::vector<DiskPoint>{DiskPoint(0.0)}
                                                      : grid_points(grid, grid.max_level);
  }
  const std::size_t total = kernel_points.size() + randoms.size() + family.explicit_polynomials.size();
  if (total == 0) throw ConfigError("test family is empty");

  auto ratio_for = [&](const ComplexIntegrand& f, double conc, double norm_p) {
    if (!(norm_p > 0.0)) throw ConfigError("test family member has zero norm");
    const double num = integ.integrate_real(
        mu, [&](Complex z) { return abs_pow(cond_expect_extended(phi, f, z), p); }, conc);
    return num / norm_p;
  };

  // Kernel family. The norm of f_a depends only on |a|; so does the numerator
  // when mu is radial and E commutes with rotations.
  const bool ring_symmetric = mu.is_radial() && phi.is_rotation_equivariant();
  std::vector<double> kernel_ratio(kernel_points.size());
  if (!kernel_points.empty()) {
    const int rings = mode == SymmetryMode::Symmetrized ? 1 : grid.max_level + 1;
    std::vector<double> ring_norm(rings);
    parallel_for(rings, [&](std::size_t i) {
      const Complex a(grid_ring_radius(static_cast<int>(i)), 0.0);
      ring_norm[i] = std::pow(integ.bergman_norm([&](Complex z) { return raw::kernel_power(a, z, e); }, params,
                                                 a.real()),
                              p);
    });
    auto ring_of = [&](std::size_t k) { return k == 0 ? 0 : 1 + (k - 1) / grid.n_theta; };
    auto eval = [&](std::size_t k) {
      const Complex a = kernel_points[k].value();
      return ratio_for([a, e](Complex z) { return raw::kernel_power(a, z, e); }, std::abs(a), ring_norm[ring_of(k)]);
    };
    if (ring_symmetric) {
      std::vector<double> per_ring(rings);
      parallel_for(rings, [&](std::size_t i) { per_ring[i] = eval(i == 0 ? 0 : 1 + (i - 1) * grid.n_theta); });
      for (std::size_t k = 0; k < kernel_points.size(); ++k) kernel_ratio[k] = per_ring[ring_of(k)];
    } else {
      parallel_for(kernel_points.size(), [&](std::size_t k) { kernel_ratio[k] = eval(k); });
    }
  }

  std::vector<double> poly_ratio(randoms.size() + family.explicit_polynomials.size());
  parallel_for(poly_ratio.size(), [&](std::size_t k) {
    const Polynomial& f = k < randoms.size() ? randoms[k] : family.explicit_polynomials[k - randoms.size()];
    const double norm = integ.bergman_norm(f, params);
    poly_ratio[k] = ratio_for([&f](Complex z) { return f(z); }, 0.0, std::pow(norm, p));
  });

  TestConstant out;
  out.family_size = total;
  double best = -1.0;
  for (std::size_t k = 0; k < kernel_ratio.size(); ++k) {
    if (kernel_ratio[k] > best) {
      best = kernel_ratio[k];
      out.worst = point_id("kernel", kernel_points[k]);
    }
  }
  out.kernel_sup = kernel_ratio.empty() ? 0.0 : best;
  for (std::size_t k = 0; k < poly_ratio.size(); ++k) {
    if (poly_ratio[k] > best) {
      best = poly_ratio[k];
      out.worst = k < randoms.size() ? "random[" + std::to_string(k) + "]"
                                     : "explicit[" + std::to_string(k - randoms.size()) + "]";
    }
  }
  out.c1 = std::max(best, 0.0);

  if (!kernel_ratio.empty() && mode == SymmetryMode::Unconditional) {
    std::vector<double> gaps, maxima;
    for (int j = grid.min_level; j <= grid.max_level; ++j) {
      const std::size_t prefix = 1 + static_cast<std::size_t>(j) * grid.n_theta;
      gaps.push_back(std::ldexp(1.0, -j));
      maxima.push_back(*std::max_element(kernel_ratio.begin(), kernel_ratio.begin() + prefix));
    }
    out.growth = assess_growth(std::move(gaps), std::move(maxima));
  }
  return out;
}

double CarlesonReport::max_pairwise_ratio() const {
  double worst = 1.0;
  for (double q : {ratio_c1_c2, ratio_c1_c3, ratio_c2_c3}) {
    if (!std::isfinite(q) || q <= 0.0) return std::numeric_limits<double>::infinity();
    worst = std::max({worst, q, 1.0 / q});
  }
  return worst;
}

CarlesonReport certify(const Integrator& integ, const Measure& mu, const SpaceParams& params, double r,
                       const AnalyticSelfMap& phi, const CertifyConfig& config) {
  params.validate();
  config.grid.validate();
  CarlesonReport rep;
  rep.params = params;
  rep.r = r;
  rep.epsilon = config.epsilon.value_or(config.grid.finest_gap());
  rep.mode = config.mode;
  rep.measure = mu.describe();
  rep.map = phi.describe();

  auto attempt = [&](const char* what, auto&& fn) {
    try {
      fn();
    } catch (const Error& err) {
      rep.complete = false;
      rep.failures.push_back(std::string(what) + ": " + err.what());
    }
  };

  attempt("C3", [&] {
    if (config.mode == SymmetryMode::Symmetrized) {
      if (!std::holds_alternative<MonomialMap>(phi.variant()))
        throw ConfigError("symmetrized mode requires a monomial map");
      rep.c3 = psi_transform(integ, mu, DiskPoint(0.0), params.alpha);
      rep.c3_argmax = DiskPoint(0.0);
    } else {
      const PsiSup s = psi_sup(integ, mu, params.alpha, 2.0 + params.alpha, config.grid);
      rep.c3 = s.sup;
      rep.c3_argmax = s.argmax;
      rep.c3_growth = s.growth;
    }
  });

  attempt("C2", [&] {
    const HyperbolicLattice lat = build_lattice(r, rep.epsilon, config.overlap_samples);
    rep.lattice_size = lat.size();
    rep.lattice_overlap = lat.overlap_bound;
    rep.lattice_kernel_sum = lattice_kernel_sum(lat);
    const DiskConstant d = disk_constant(integ, mu, params.alpha, r, lat, config.mode, phi);
    rep.c2 = d.c2;
    rep.c2_normalized = d.c2_normalized;
    rep.c2_argmax = lat.points[d.argmax];
    rep.c2_growth = d.growth;
  });

  attempt("C1", [&] {
    const TestConstant t = test_constant(integ, mu, params, phi, config.family, config.grid, config.mode);
    rep.c1 = t.c1;
    rep.c1_worst = t.worst;
    rep.c1_growth = t.growth;
  });

  rep.ratio_c1_c2 = safe_ratio(rep.c1, rep.c2_normalized);
  rep.ratio_c1_c3 = safe_ratio(rep.c1, rep.c3);
  rep.ratio_c2_c3 = safe_ratio(rep.c2_normalized, rep.c3);

  const bool divergent = rep.c1_growth.divergent || rep.c2_growth.divergent || rep.c3_growth.divergent;
  const bool finite = std::isfinite(rep.c1) && std::isfinite(rep.c2) && std::isfinite(rep.c3);
  if (!rep.complete) {
    rep.verdict = "incomplete";
  } else if (divergent || !finite) {
    rep.verdict = "not-Carleson";
  } else {
    rep.verdict = "Carleson";
  }
  return rep;
}

}  // namespace bergman
