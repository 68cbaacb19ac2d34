#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include "bergman/geometry.hpp"
#include "bergman/polynomial.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

class Measure;

/// scale * dA_alpha
struct WeightedArea {
  double alpha = 0.0;
  double scale = 1.0;
};

/// scale * (1 - |z|^2)^gamma dA; total mass scale / (gamma + 1).
struct RadialDensity {
  double gamma = 0.0;
  double scale = 1.0;
};

/// scale * |u|^p dA_beta, the measure mu_u^beta attached to a weighted operator.
struct PolyWeighted {
  Polynomial u;
  double p = 2.0;
  double beta = 0.0;
  double scale = 1.0;
};

struct Atom {
  DiskPoint point;
  double mass = 0.0;
};

/// Finite sum of point masses. An empty list is the zero measure.
struct Atomic {
  std::vector<Atom> atoms;
};

/// Nonnegative density, relative to the rule's own dA_alpha, sampled at the
/// rule's unrefined nodes (index i * n_angular + k).
struct GridDensity {
  std::shared_ptr<const QuadratureRule> rule;
  std::vector<double> values;
};

struct SumMeasure {
  std::vector<Measure> parts;
};

/// A finite positive Borel measure on the disk.
class Measure {
 public:
  using Variant = std::variant<WeightedArea, RadialDensity, PolyWeighted, Atomic, GridDensity, SumMeasure>;

  Measure() : v_(Atomic{}) {}
  Measure(WeightedArea m);   // NOLINT(google-explicit-constructor)
  Measure(RadialDensity m);  // NOLINT
  Measure(PolyWeighted m);   // NOLINT
  Measure(Atomic m);         // NOLINT
  Measure(GridDensity m);    // NOLINT
  Measure(SumMeasure m);     // NOLINT

  static Measure zero() { return Measure(); }

  const Variant& variant() const noexcept { return v_; }

  /// Rotation invariant (area, radial, and sums of them).
  bool is_radial() const;
  /// Human-readable one-line description.
  std::string describe() const;

 private:
  Variant v_;
};

/// c * mu for c >= 0.
Measure scaled(const Measure& mu, double c);

/// Weight multiplying the dA_gamma-rule average: for absolutely continuous pieces
/// d mu = scale * h(z) (1 - |z|^2)^gamma dA = scale / (gamma + 1) * h(z) dA_gamma.
struct DensityForm {
  double gamma = 0.0;
  double factor = 1.0;          // scale / (gamma + 1)
  RealIntegrand h;              // empty means h == 1
};

struct QuadratureConfig {
  int n_radial = 256;
  int n_angular = 512;
  int n_disk_radial = 48;
  int n_disk_angular = 128;
  double angular_margin = 40.0;
  int max_angular_doublings = 12;

  /// Every node count doubled.
  QuadratureConfig doubled() const;
  void validate() const;
};

/// Integration against measures. Holds a cache of disk rules keyed by weight
/// exponent; rules are immutable once built and the cache is thread safe.
class Integrator {
 public:
  explicit Integrator(QuadratureConfig config = {});

  const QuadratureConfig& config() const noexcept { return config_; }
  std::shared_ptr<const QuadratureRule> rule(double alpha) const;

  /// Integral of g against mu. Atomic parts are finite sums; grid densities use
  /// their own nodes; the other parts use the dA_gamma rule of their boundary exponent.
  Complex integrate(const Measure& mu, const ComplexIntegrand& g, double concentration = 0.0) const;
  double integrate_real(const Measure& mu, const RealIntegrand& g, double concentration = 0.0) const;

  double total_mass(const Measure& mu) const;

  /// mu(D(a, r)).
  double measure_of_disk(const Measure& mu, const DiskPoint& a, double r) const;
  /// mu of a finite union of Bergman disks.
  double measure_of_union(const Measure& mu, const std::vector<BergmanDisk>& disks) const;

  /// ||f||_{p,alpha}
  double bergman_norm(const Polynomial& f, const SpaceParams& params) const;
  double bergman_norm(const ComplexIntegrand& f, const SpaceParams& params, double concentration = 0.0) const;

 private:
  QuadratureConfig config_;
  mutable std::mutex mutex_;
  mutable std::map<double, std::shared_ptr<const QuadratureRule>> rules_;
};

/// Visits the absolutely continuous, atomic and grid pieces of mu (flattening sums).
struct MeasurePieces {
  std::vector<DensityForm> densities;
  std::vector<Atom> atoms;
  std::vector<const GridDensity*> grids;
};
MeasurePieces decompose(const Measure& mu);

/// Re-expresses a grid density on another rule by linear interpolation in
/// (|z|^2, angle). Logged, since it changes the discretization of mu.
GridDensity resample(const GridDensity& grid, std::shared_ptr<const QuadratureRule> target);

/// Ratio  int |f|^q dmu / (||f||_{p,alpha}^q mu(D)^{(p-q)/p}); a value <= 1 means the
/// Hoelder-type inequality holds for this sample.
double holder_ratio(const Integrator& integ, const Polynomial& f, const Measure& mu, double p, double q,
                    double alpha);

/// |f(z)|^p (1 - |z|^2)^{2+alpha} / int_{D(z,r)} |f|^p dA_alpha, the constant of the
/// sub-mean-value estimate for this sample.
double sub_mean_value_ratio(const Polynomial& f, const DiskPoint& z, double r, const SpaceParams& params,
                            int n_radial = 48, int n_angular = 128);

}  // namespace bergman
