#include "bergman/lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "bergman/errors.hpp"
#include "bergman/parallel.hpp"

namespace bergman {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

double radical_inverse(std::size_t i, unsigned base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (i > 0) {
    result += f * static_cast<double>(i % base);
    i /= base;
    f /= base;
  }
  return result;
}

// z -> (m00 w + m01) / (m10 w + m11) with w = z or conj(z).
struct AntiMobius {
  std::array<Complex, 4> m{Complex(1.0), Complex(0.0), Complex(0.0), Complex(1.0)};
  bool conj = false;

  Complex operator()(Complex z) const {
    const Complex w = conj ? std::conj(z) : z;
    return (m[0] * w + m[1]) / (m[2] * w + m[3]);
  }
};

AntiMobius compose(const AntiMobius& g, const AntiMobius& h) {
  std::array<Complex, 4> hm = h.m;
  if (g.conj)
    for (auto& x : hm) x = std::conj(x);
  AntiMobius out;
  out.m = {g.m[0] * hm[0] + g.m[1] * hm[2], g.m[0] * hm[1] + g.m[1] * hm[3], g.m[2] * hm[0] + g.m[3] * hm[2],
           g.m[2] * hm[1] + g.m[3] * hm[3]};
  double scale = 0.0;
  for (const auto& x : out.m) scale = std::max(scale, std::abs(x));
  for (auto& x : out.m) x /= scale;
  out.conj = g.conj != h.conj;
  return out;
}

// The (2, 3, 7) triangle: corner O = 0 (angle pi/7), P on the positive real axis
// (angle pi/2), Q on the ray of angle pi/7 (angle pi/3). Side PQ lies on the
// circle |z - c| = sqrt(c^2 - 1) orthogonal to the unit circle.
struct Triangle {
  double p;          // P
  Complex q;         // Q
  double c;          // centre of the circle through P and Q
  Complex reference; // interior point used to identify tiles
  double reach;      // beta(0, Q), the largest distance from O within the triangle
  std::array<AntiMobius, 3> mirrors;

  Triangle() {
    const double d_in = std::acosh(std::cos(kPi / 3) / std::sin(kPi / 7));
    const double d_out = std::acosh(1.0 / (std::tan(kPi / 7) * std::tan(kPi / 3)));
    p = std::tanh(0.5 * d_in);
    q = std::polar(std::tanh(0.5 * d_out), kPi / 7);
    c = (1.0 + p * p) / (2.0 * p);
    reference = 0.25 * (Complex(p) + q);
    reach = 0.5 * d_out;
    mirrors[0].conj = true;
    mirrors[1].m = {std::polar(1.0, 2.0 * kPi / 7), Complex(0.0), Complex(0.0), Complex(1.0)};
    mirrors[1].conj = true;
    mirrors[2].m = {Complex(c), Complex(-1.0), Complex(1.0), Complex(-c)};
    mirrors[2].conj = true;
  }

  // Largest modulus of the triangle along the ray of angle theta in [0, pi/7].
  double ray_limit(double theta) const {
    const double b = c * std::cos(theta);
    return b - std::sqrt(b * b - 1.0);
  }
};

const Triangle& fundamental() {
  static const Triangle t;
  return t;
}

// Hash of disk points with a tolerance that scales like the hyperbolic metric.
class PointSet {
 public:
  explicit PointSet(double rel_tol) : tol_(rel_tol) {}

  // Inserts z unless a stored point lies within tolerance; returns true if inserted.
  bool insert(Complex z) {
    const double h = cell(z);
    const auto kx = static_cast<std::int64_t>(std::floor(z.real() / h));
    const auto ky = static_cast<std::int64_t>(std::floor(z.imag() / h));
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const auto it = map_.find(key(kx + dx, ky + dy));
        if (it == map_.end()) continue;
        for (const Complex& w : it->second)
          if (std::abs(w - z) < h) return false;
      }
    map_[key(kx, ky)].push_back(z);
    return true;
  }

 private:
  double cell(Complex z) const { return tol_ * (1.0 - std::norm(z)); }
  static std::uint64_t key(std::int64_t x, std::int64_t y) {
    return static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint64_t>(y);
  }

  double tol_;
  std::unordered_map<std::uint64_t, std::vector<Complex>> map_;
};

// Group elements whose image of the fundamental triangle meets {beta(0, .) <= limit}.
std::vector<AntiMobius> tiles_within(double limit) {
  const Triangle& t = fundamental();
  const double bound = std::tanh(limit + 2.0 * t.reach);
  std::vector<AntiMobius> out;
  PointSet seen(1e-7);
  std::deque<AntiMobius> queue{AntiMobius{}};
  seen.insert(t.reference);
  while (!queue.empty()) {
    const AntiMobius g = queue.front();
    queue.pop_front();
    out.push_back(g);
    for (const auto& s : t.mirrors) {
      const AntiMobius h = compose(g, s);
      const Complex ref = h(t.reference);
      if (std::abs(ref) > bound) continue;
      if (seen.insert(ref)) queue.push_back(h);
    }
  }
  return out;
}

// Greedy r/2-separated motif of the fundamental triangle, checked against the
// images of the motif under every tile near the triangle.
std::vector<Complex> build_motif(double r) {
  const Triangle& t = fundamental();
  const double sep = std::tanh(0.5 * r);
  const std::vector<AntiMobius> star = tiles_within(t.reach + 0.5 * r);

  std::vector<Complex> candidates{Complex(0.0), Complex(t.p), t.q};
  const double h = r / 40.0;
  const int n_rad = static_cast<int>(std::ceil(std::abs(t.q) / h)) + 1;
  for (int i = 1; i <= n_rad; ++i) {
    const double radius = i * h;
    const int n_ang = std::max(1, static_cast<int>(std::ceil(radius * kPi / 7 / h)));
    for (int j = 0; j <= n_ang; ++j) {
      const double theta = kPi / 7 * j / n_ang;
      if (radius <= t.ray_limit(theta)) candidates.push_back(std::polar(radius, theta));
    }
  }
  // points on the curved side, which the polar grid misses
  const int n_arc = static_cast<int>(std::ceil(std::abs(t.q - t.p) / h)) + 1;
  for (int j = 1; j < n_arc; ++j) {
    const double theta = kPi / 7 * j / n_arc;
    candidates.push_back(std::polar(t.ray_limit(theta), theta));
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });

  constexpr double kSame = 1e-12;
  std::vector<Complex> motif;
  std::vector<Complex> images;  // star images of accepted motif points
  for (const Complex x : candidates) {
    bool ok = true;
    for (const Complex y : images) {
      const double rho = std::abs(x - y) / std::abs(1.0 - std::conj(y) * x);
      if (rho < sep) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    // Distinct images of x itself must stay separated too; images equal to x
    // (x on a mirror) are the same lattice point.
    std::vector<Complex> own;
    for (const auto& g : star) {
      const Complex y = g(x);
      const double rho = std::abs(x - y) / std::abs(1.0 - std::conj(y) * x);
      if (rho < kSame) continue;
      if (rho < sep) {
        ok = false;
        break;
      }
      own.push_back(y);
    }
    if (!ok) continue;
    motif.push_back(x);
    images.push_back(x);
    images.insert(images.end(), own.begin(), own.end());
  }
  return motif;
}

// Orbit points with beta(0, a) <= limit.
std::vector<Complex> orbit_within(const std::vector<Complex>& motif, double limit) {
  const double max_modulus = std::tanh(limit);
  std::vector<Complex> pts;
  PointSet seen(1e-9);
  for (const auto& g : tiles_within(limit)) {
    for (const Complex m : motif) {
      const Complex a = g(m);
      if (std::abs(a) <= max_modulus && seen.insert(a)) pts.push_back(a);
    }
  }
  return pts;
}

void index_points(HyperbolicLattice& lat, std::vector<Complex> pts) {
  const double width = 0.5 * lat.r;
  auto shell_of = [&](Complex a) { return static_cast<int>(std::floor(std::atanh(std::abs(a)) / width)); };
  auto angle_of = [](Complex a) {
    const double t = std::arg(a);
    return t < 0.0 ? t + kTwoPi : t;
  };
  std::sort(pts.begin(), pts.end(), [&](Complex a, Complex b) {
    const int sa = shell_of(a);
    const int sb = shell_of(b);
    if (sa != sb) return sa < sb;
    return angle_of(a) < angle_of(b);
  });
  lat.points.clear();
  lat.shell.clear();
  lat.angle.clear();
  lat.shell_offsets.assign(1, 0);
  lat.shell_min_modulus.clear();
  lat.shell_max_modulus.clear();
  for (const Complex a : pts) {
    const int s = shell_of(a);
    while (lat.shell_count() <= s) {
      lat.shell_offsets.push_back(lat.points.size());
      lat.shell_min_modulus.push_back(std::numeric_limits<double>::infinity());
      lat.shell_max_modulus.push_back(-1.0);
    }
    lat.points.emplace_back(a);
    lat.shell.push_back(s);
    lat.angle.push_back(angle_of(a));
    lat.shell_offsets.back() = lat.points.size();
    lat.shell_min_modulus[s] = std::min(lat.shell_min_modulus[s], std::abs(a));
    lat.shell_max_modulus[s] = std::max(lat.shell_max_modulus[s], std::abs(a));
  }
}

// Visits lattice points with beta(a, z) < limit. Shells are searched over the
// angular window where the circle |w| = t meets the Euclidean image of D(z, limit).
template <typename Fn>
void for_each_near(const HyperbolicLattice& lat, const DiskPoint& z, double limit, Fn&& fn) {
  // Euclidean image of D(z, limit); written out since limit may exceed 1 here.
  const double s = std::tanh(limit);
  const double zz = z.norm();
  const Complex center = (1.0 - s * s) * z.value() / (1.0 - s * s * zz);
  const double cm = std::abs(center);
  const double rad = (1.0 - zz) * s / (1.0 - s * s * zz) * (1.0 + 1e-12) + 1e-15;
  const double theta = cm > 0.0 ? std::arg(center) : 0.0;
  const double rho_limit = std::tanh(limit);
  for (int s = 0; s < lat.shell_count(); ++s) {
    const std::size_t begin = lat.shell_offsets[s];
    const std::size_t end = lat.shell_offsets[s + 1];
    if (begin == end) continue;
    const double t1 = lat.shell_min_modulus[s];
    const double t2 = lat.shell_max_modulus[s];
    if (t1 > cm + rad || t2 < cm - rad) continue;

    auto visit = [&](std::size_t i) {
      const double rho = pseudo_distance(lat.points[i], z);
      if (rho < rho_limit) fn(i, std::atanh(rho));
    };
    double half = kPi;
    if (cm > 1e-15) {
      // cos of the half-angle of the arc {|w| = t} inside the disk, minimized over [t1, t2]
      auto cos_half = [&](double t) { return t <= 0.0 ? -1.0 : (t * t + cm * cm - rad * rad) / (2.0 * t * cm); };
      double lo = std::min(cos_half(t1), cos_half(t2));
      const double t_star2 = cm * cm - rad * rad;
      if (t_star2 > 0.0) {
        const double t_star = std::sqrt(t_star2);
        if (t_star > t1 && t_star < t2) lo = std::min(lo, cos_half(t_star));
      }
      if (lo > -1.0) half = std::acos(std::min(1.0, lo)) + 1e-12;
    }
    if (half >= kPi) {
      for (std::size_t i = begin; i < end; ++i) visit(i);
      continue;
    }
    const auto first = lat.angle.begin() + static_cast<std::ptrdiff_t>(begin);
    const auto last = lat.angle.begin() + static_cast<std::ptrdiff_t>(end);
    auto scan = [&](double a, double b) {
      auto it = std::lower_bound(first, last, a);
      for (; it != last && *it <= b; ++it) visit(static_cast<std::size_t>(it - lat.angle.begin()));
    };
    double a = theta - half;
    double b = theta + half;
    if (a < 0.0) a += kTwoPi, b += kTwoPi;
    if (b <= kTwoPi) {
      scan(a, b);
    } else {
      scan(a, kTwoPi);
      scan(0.0, b - kTwoPi);
    }
  }
}

// Samples of the fundamental triangle.
Complex triangle_point(std::size_t i) {
  const Triangle& t = fundamental();
  const double u = radical_inverse(i + 1, 2);
  const double v = radical_inverse(i + 1, 3);
  const double theta = kPi / 7 * v;
  return std::polar(std::sqrt(u) * t.ray_limit(theta), theta);
}

}  // namespace

DiskPoint halton_disk_point(std::size_t i, double radius) {
  const double u = radical_inverse(i + 1, 2);
  const double v = radical_inverse(i + 1, 3);
  return {std::polar(radius * std::sqrt(u), kTwoPi * v)};
}

HyperbolicLattice build_lattice(double r, double epsilon, int overlap_samples) {
  if (!(r > 0.0) || r > 1.0) throw ConfigError("lattice radius must satisfy 0 < r <= 1");
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) throw ConfigError("lattice truncation must satisfy 0 < epsilon < 1");
  if (overlap_samples < 1) throw ConfigError("overlap sample count must be positive");

  const std::vector<Complex> motif = build_motif(r);

  // Overlap of the untruncated orbit, sampled on the fundamental triangle.
  HyperbolicLattice full;
  full.r = r;
  index_points(full, orbit_within(motif, fundamental().reach + 2.0 * r + 0.05));
  std::vector<int> counts(static_cast<std::size_t>(overlap_samples));
  parallel_for(counts.size(), [&](std::size_t i) { counts[i] = overlap_count(full, triangle_point(i), 2.0); });

  HyperbolicLattice lat;
  lat.r = r;
  lat.epsilon = epsilon;
  lat.motif_size = motif.size();
  lat.overlap_bound = *std::max_element(counts.begin(), counts.end());
  index_points(lat, orbit_within(motif, std::atanh(1.0 - epsilon)));
  return lat;
}

HyperbolicLattice remove_points(const HyperbolicLattice& lat, const std::vector<std::size_t>& indices) {
  std::vector<char> drop(lat.size(), 0);
  for (std::size_t i : indices) {
    if (i >= lat.size()) throw ConfigError("lattice index out of range");
    drop[i] = 1;
  }
  std::vector<Complex> kept;
  for (std::size_t i = 0; i < lat.size(); ++i)
    if (!drop[i]) kept.push_back(lat.points[i]);
  HyperbolicLattice out;
  out.r = lat.r;
  out.epsilon = lat.epsilon;
  out.motif_size = lat.motif_size;
  out.overlap_bound = lat.overlap_bound;
  index_points(out, std::move(kept));
  return out;
}

int overlap_count(const HyperbolicLattice& lat, const DiskPoint& z, double factor) {
  if (!(factor > 0.0)) throw ConfigError("overlap factor must be positive");
  int count = 0;
  for_each_near(lat, z, factor * lat.r, [&](std::size_t, double) { ++count; });
  return count;
}

CoverReport verify_cover(const HyperbolicLattice& lat, int samples) {
  if (samples < 1) throw ConfigError("cover check needs at least one sample");
  const std::size_t n = static_cast<std::size_t>(samples);
  std::vector<char> covered(n, 0);
  const double radius = 1.0 - lat.epsilon;
  parallel_for(n, [&](std::size_t i) {
    bool hit = false;
    for_each_near(lat, halton_disk_point(i, radius), lat.r, [&](std::size_t, double) { hit = true; });
    covered[i] = hit;
  });
  CoverReport report;
  report.samples = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!covered[i]) report.uncovered.push_back(halton_disk_point(i, radius));
  }
  return report;
}

int measure_overlap(const HyperbolicLattice& lat, int samples) {
  const std::size_t n = static_cast<std::size_t>(samples);
  std::vector<int> counts(n);
  const double radius = 1.0 - lat.epsilon;
  parallel_for(n, [&](std::size_t i) { counts[i] = overlap_count(lat, halton_disk_point(i, radius), 2.0); });
  return n == 0 ? 0 : *std::max_element(counts.begin(), counts.end());
}

double min_separation(const HyperbolicLattice& lat) {
  std::vector<double> best(lat.size(), std::numeric_limits<double>::infinity());
  parallel_for(lat.size(), [&](std::size_t j) {
    for_each_near(lat, lat.points[j], 2.0 * lat.r, [&](std::size_t k, double d) {
      if (k != j) best[j] = std::min(best[j], d);
    });
  });
  return best.empty() ? std::numeric_limits<double>::infinity() : *std::min_element(best.begin(), best.end());
}

bool quarter_disks_disjoint(const HyperbolicLattice& lat) {
  std::vector<EuclideanDisk> disks;
  disks.reserve(lat.points.size());
  for (const auto& a : lat.points) disks.push_back(bergman_disk(a, 0.25 * lat.r));
  std::vector<char> ok(lat.size(), 1);
  // Disks whose centres are r or more apart cannot meet, so only near pairs are tested.
  parallel_for(lat.size(), [&](std::size_t j) {
    for_each_near(lat, lat.points[j], lat.r, [&](std::size_t k, double) {
      // Centres exactly r/2 apart give tangent open disks, hence the tolerance.
      if (k > j && std::abs(disks[j].center - disks[k].center) < disks[j].radius + disks[k].radius - kGeometryTol)
        ok[j] = 0;
    });
  });
  return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
}

double lattice_kernel_sum(const HyperbolicLattice& lat) {
  const double s = std::tanh(lat.r);
  double total = 0.0;
  for (const auto& a : lat.points) {
    const double d = 1.0 - s * a.modulus();
    total += 1.0 / (d * d);
  }
  return total;
}

}  // namespace bergman
