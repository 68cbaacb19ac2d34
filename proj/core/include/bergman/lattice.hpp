#pragma once

#include <cstddef>
#include <vector>

#include "bergman/geometry.hpp"

namespace bergman {

/// A truncated r-lattice: the r-disks cover {1 - |z| >= epsilon}, centres are
/// pairwise at Bergman distance >= r/2, and overlap of the 2r-disks is bounded.
///
/// The points are the orbit of a finite motif under the reflection group of the
/// (2, 3, 7) triangle whose pi/7 corner sits at the origin. The motif is a greedy
/// r/2-separated net of that triangle, built so that the whole orbit stays
/// separated. Being group invariant, the overlap count is measured once on the
/// fundamental triangle against the untruncated orbit.
struct HyperbolicLattice {
  double r = 1.0;
  double epsilon = 0.01;
  /// Sorted by shell, then by angle in [0, 2 pi).
  std::vector<DiskPoint> points;
  /// floor(beta(0, a) / (r/2)) for each point.
  std::vector<int> shell;
  /// Points of shell m are [shell_offsets[m], shell_offsets[m+1]).
  std::vector<std::size_t> shell_offsets;
  std::size_t motif_size = 0;
  int overlap_bound = 0;  // N for the 2r-disks

  // search index
  std::vector<double> angle;
  std::vector<double> shell_min_modulus;
  std::vector<double> shell_max_modulus;

  std::size_t size() const noexcept { return points.size(); }
  int shell_count() const noexcept { return static_cast<int>(shell_offsets.size()) - 1; }
};

struct CoverReport {
  std::size_t samples = 0;
  std::vector<DiskPoint> uncovered;
  bool ok() const noexcept { return uncovered.empty(); }
};

/// Default sample count used to measure the overlap bound.
inline constexpr int kOverlapSamples = 100000;

/// Throws ConfigError unless 0 < r <= 1 and 0 < epsilon < 1.
HyperbolicLattice build_lattice(double r, double epsilon, int overlap_samples = kOverlapSamples);

/// Same point set with some points removed (by index), search index rebuilt.
HyperbolicLattice remove_points(const HyperbolicLattice& lat, const std::vector<std::size_t>& indices);

/// Checks the cover on `samples` Halton points of {|z| <= 1 - epsilon}.
CoverReport verify_cover(const HyperbolicLattice& lat, int samples);

/// Number of lattice points with beta(a_k, z) < factor * r.
int overlap_count(const HyperbolicLattice& lat, const DiskPoint& z, double factor);

/// Max of overlap_count(., 2) over `samples` Halton points of {|z| <= 1 - epsilon}
/// for this (truncated) lattice. Never exceeds overlap_bound.
int measure_overlap(const HyperbolicLattice& lat, int samples);

/// Smallest pairwise Bergman distance between lattice points (infinity for fewer than two).
double min_separation(const HyperbolicLattice& lat);

/// True when the Euclidean images of D(a_j, r/4) and D(a_k, r/4) are disjoint for all j != k.
bool quarter_disks_disjoint(const HyperbolicLattice& lat);

/// sum_k (1 - tanh(r) |a_k|)^{-2}, the lattice summability diagnostic.
double lattice_kernel_sum(const HyperbolicLattice& lat);

/// i-th point (0-based) of the base-2/3 Halton sequence mapped area-uniformly into {|z| <= radius}.
DiskPoint halton_disk_point(std::size_t i, double radius);

}  // namespace bergman
