#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bergman/condexp.hpp"
#include "bergman/geometry.hpp"
#include "bergman/lattice.hpp"
#include "bergman/measure.hpp"

namespace bergman {

/// Nested grids for sups over a in the disk. Level j holds the origin and the
/// rings |a| = 1 - 2^{-i}, i = 1..j, with n_theta equally spaced angles each.
struct GridSpec {
  int min_level = 4;
  int max_level = 8;
  int n_theta = 16;
  /// Local search around the finest-level argmax.
  bool refine = true;

  void validate() const;
  GridSpec doubled() const;  // twice the angles per ring
  /// Truncation matching the finest ring: 2^{-max_level}.
  double finest_gap() const;
};

/// Points of level j in index order (origin first, then ring by ring).
std::vector<DiskPoint> grid_points(const GridSpec& grid, int level);
/// Radius of ring i (i = 0 is the origin).
double grid_ring_radius(int ring);

/// Slope threshold: growth is divergent when the fitted slope is <= this.
inline constexpr double kDivergenceSlope = -0.1;

/// Least-squares slope of log(value) against log(gap) over the last three levels.
struct GrowthDiagnostics {
  std::vector<double> gaps;    // 1 - |a| (or 2^{-j}) per level
  std::vector<double> values;  // running maximum per level
  double slope = 0.0;
  bool divergent = false;
};

GrowthDiagnostics assess_growth(std::vector<double> gaps, std::vector<double> values);

enum class SymmetryMode { Unconditional, Symmetrized };
std::string to_string(SymmetryMode mode);
SymmetryMode parse_symmetry_mode(const std::string& text);

/// Psi_a(mu) = int ((1 - |a|^2) / |1 - conj(a) z|^2)^t dmu(z); t defaults to 2 + alpha.
/// Absolutely continuous parts are integrated after the substitution z = phi_a(w).
double psi_transform(const Integrator& integ, const Measure& mu, const DiskPoint& a, double alpha,
                     std::optional<double> t = std::nullopt);

/// Same quantity by direct quadrature of the Berezin weight against mu.
double psi_transform_direct(const Integrator& integ, const Measure& mu, const DiskPoint& a, double t);

struct PsiSup {
  double sup = 0.0;
  DiskPoint argmax;
  double grid_sup = 0.0;  // before local refinement
  GrowthDiagnostics growth;
};

PsiSup psi_sup(const Integrator& integ, const Measure& mu, double alpha, double t, const GridSpec& grid);

struct DiskConstant {
  double c2 = 0.0;
  double c2_normalized = 0.0;  // c2 over the dA_alpha value at the origin
  std::size_t argmax = 0;      // lattice index
  GrowthDiagnostics growth;    // per lattice shell
};

/// ((1 - |a|^2) / (1 - tanh(r)|a|)^2)^{alpha+2}
double disk_bound(const DiskPoint& a, double alpha, double r);
/// dA_alpha(D(0, r)) / disk_bound(0) = 1 - (1 - tanh^2 r)^{alpha+1}.
double disk_normalizer(double alpha, double r);

DiskConstant disk_constant(const Integrator& integ, const Measure& mu, double alpha, double r,
                           const HyperbolicLattice& lat, SymmetryMode mode = SymmetryMode::Unconditional,
                           const AnalyticSelfMap& phi = {});

/// Test family for the embedding constant: test functions on the a-grid, seeded
/// random polynomials, and explicit polynomials.
struct FamilySpec {
  bool kernels = true;
  int random_count = 16;
  int random_degree = 6;
  std::uint64_t seed = 20240601;
  std::vector<Polynomial> explicit_polynomials;
};

struct TestConstant {
  double c1 = 0.0;
  std::string worst;              // id of the maximizing family member
  double kernel_sup = 0.0;        // max over the test functions alone
  GrowthDiagnostics growth;       // kernel family per grid level
  std::size_t family_size = 0;
};

/// Coefficients of the published random family (standard normal real and imaginary parts).
std::vector<Polynomial> random_polynomials(int count, int degree, std::uint64_t seed);

TestConstant test_constant(const Integrator& integ, const Measure& mu, const SpaceParams& params,
                           const AnalyticSelfMap& phi, const FamilySpec& family, const GridSpec& grid,
                           SymmetryMode mode = SymmetryMode::Unconditional);

struct CertifyConfig {
  GridSpec grid;
  FamilySpec family;
  std::optional<double> epsilon;  // lattice truncation; default grid.finest_gap()
  SymmetryMode mode = SymmetryMode::Unconditional;
  int overlap_samples = 20000;
};

struct CarlesonReport {
  SpaceParams params;
  double r = 1.0;
  double epsilon = 0.0;
  SymmetryMode mode = SymmetryMode::Unconditional;
  std::string measure;
  std::string map;

  double c1 = 0.0;
  double c2 = 0.0;
  double c2_normalized = 0.0;
  double c3 = 0.0;
  /// c1 / c2n, c1 / c3, c2n / c3 (nan when a denominator vanishes).
  double ratio_c1_c2 = 0.0;
  double ratio_c1_c3 = 0.0;
  double ratio_c2_c3 = 0.0;

  std::string c1_worst;
  DiskPoint c2_argmax;
  DiskPoint c3_argmax;

  GrowthDiagnostics c1_growth;
  GrowthDiagnostics c2_growth;
  GrowthDiagnostics c3_growth;

  std::size_t lattice_size = 0;
  int lattice_overlap = 0;
  double lattice_kernel_sum = 0.0;

  bool complete = true;
  std::vector<std::string> failures;
  /// "Carleson", "not-Carleson" or "incomplete".
  std::string verdict;

  /// Largest of each ratio and its inverse.
  double max_pairwise_ratio() const;
};

CarlesonReport certify(const Integrator& integ, const Measure& mu, const SpaceParams& params, double r,
                       const AnalyticSelfMap& phi, const CertifyConfig& config);

}  // namespace bergman
