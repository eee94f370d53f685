#pragma once

// Packing sets: validation, sausages, planar hexagonal clusters, FCC clusters
// and lattices.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "parapack/errors.hpp"
#include "parapack/geometry.hpp"
#include "parapack/hull.hpp"
#include "parapack/hullvol.hpp"
#include "parapack/packing_set.hpp"
#include "parapack/tolerance.hpp"

namespace parapack {

struct Violation {
  std::size_t first = 0;
  std::size_t second = 0;
  double gauge_distance = 0.0;
};

struct Validation {
  bool valid = true;
  std::optional<Violation> violation;
};

/// C + K is a packing iff every pair satisfies ||x_i - x_j||_K >= 2.
/// Reports the first offending pair in lexicographic order.
template <int D>
Validation validate(const ConvexBody& K, const PackingSet<D>& C) {
  const double limit = 2.0 - tolerance();
  for (std::size_t i = 0; i < C.size(); ++i) {
    for (std::size_t j = i + 1; j < C.size(); ++j) {
      const double g = gauge_norm<D>(K, (C.points[i] - C.points[j]).eval());
      if (g < limit) return {false, Violation{i, j, g}};
    }
  }
  return {};
}

template <int D>
void require_packing(const ConvexBody& K, const PackingSet<D>& C) {
  const auto v = validate(K, C);
  if (!v.valid) throw InvalidPacking(v.violation->first, v.violation->second, v.violation->gauge_distance);
}

/// S_n(K, u): n points on the line through 0 along u, consecutive translates
/// touching.
template <int D>
PackingSet<D> sausage(const ConvexBody& K, const Direction<D>& u, int n) {
  if (n < 1) throw std::invalid_argument("sausage: n must be >= 1");
  const Vec<D> step = (2.0 / gauge_norm<D>(K, u.vec())) * u.vec();
  PackingSet<D> C;
  C.label = "sausage:" + std::to_string(n);
  C.points.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) C.points.push_back(static_cast<double>(i) * step);
  return C;
}

/// Sausage along the direction minimizing vol(conv S_n + rho K).
template <int D>
PackingSet<D> optimal_sausage(const ConvexBody& K, int n) {
  return sausage<D>(K, optimal_sausage_direction<D>(K).u, n);
}

/// First n points of the hexagonal lattice with spacing 2 in spiral order:
/// by distance from the origin, then by angle in [0, 2 pi). The order does
/// not depend on n, so hex_cluster(n) is a prefix of hex_cluster(n + 1).
inline PackingSet<2> hex_cluster(int n) {
  if (n < 1) throw std::invalid_argument("hex_cluster: n must be >= 1");
  struct Site {
    long key;  // squared Euclidean length
    double angle;
    Vec2 p;
  };
  // Lattice points i (2,0) + j (1, sqrt 3); |p|^2 = (2i + j)^2 + 3 j^2.
  // Every point with |p| <= 2R has |i|, |j| <= 2R, and there are more than n of them.
  const int R = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))) + 2;
  const long limit = 4L * R * R;
  std::vector<Site> sites;
  for (int i = -2 * R; i <= 2 * R; ++i) {
    for (int j = -2 * R; j <= 2 * R; ++j) {
      const long a = 2L * i + j;
      const long key = a * a + 3L * j * j;
      if (key > limit) continue;
      const Vec2 p(static_cast<double>(i) * 2.0 + static_cast<double>(j), static_cast<double>(j) * std::sqrt(3.0));
      double angle = std::atan2(p.y(), p.x());
      if (angle < 0.0) angle += 2.0 * std::numbers::pi;
      sites.push_back({key, key == 0 ? 0.0 : angle, p});
    }
  }
  std::sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) {
    return a.key != b.key ? a.key < b.key : a.angle < b.angle;
  });
  PackingSet<2> C;
  C.label = "hex:" + std::to_string(n);
  for (int k = 0; k < n; ++k) C.points.push_back(sites[static_cast<std::size_t>(k)].p);
  return C;
}

// ---------------------------------------------------------------------------
// FCC clusters
// ---------------------------------------------------------------------------

/// Gauge shapes used to cut clusters out of the FCC lattice. Auto tries all
/// of them.
enum class FccShape {
  Auto,
  Ball,
  Cube,
  Octahedron,
  Truncated45,
  Truncated60,
  Truncated75,
  Tetrahedron,
  InvertedTetrahedron,
  RhombicDodecahedron,
};

inline constexpr std::array<FccShape, 9> kFccShapes = {
    FccShape::Ball,        FccShape::Cube,           FccShape::Octahedron,
    FccShape::Truncated45, FccShape::Truncated60,    FccShape::Truncated75,
    FccShape::Tetrahedron, FccShape::InvertedTetrahedron, FccShape::RhombicDodecahedron};

inline std::string to_string(FccShape s) {
  switch (s) {
    case FccShape::Auto: return "auto";
    case FccShape::Ball: return "ball";
    case FccShape::Cube: return "cube";
    case FccShape::Octahedron: return "octahedron";
    case FccShape::Truncated45: return "truncated0.45";
    case FccShape::Truncated60: return "truncated0.60";
    case FccShape::Truncated75: return "truncated0.75";
    case FccShape::Tetrahedron: return "tetrahedron";
    case FccShape::InvertedTetrahedron: return "tetrahedron-inverted";
    case FccShape::RhombicDodecahedron: return "rhombic-dodecahedron";
  }
  return "?";
}

/// Cluster centers in units of the cubic cell (scaled by sqrt 2 below).
enum class FccCenter { LatticePoint, OctahedralHole, TetrahedralHole, EdgeMidpoint };

inline constexpr std::array<FccCenter, 4> kFccCenters = {FccCenter::LatticePoint, FccCenter::OctahedralHole,
                                                          FccCenter::TetrahedralHole, FccCenter::EdgeMidpoint};

inline std::string to_string(FccCenter c) {
  switch (c) {
    case FccCenter::LatticePoint: return "site";
    case FccCenter::OctahedralHole: return "octahedral-hole";
    case FccCenter::TetrahedralHole: return "tetrahedral-hole";
    case FccCenter::EdgeMidpoint: return "edge-midpoint";
  }
  return "?";
}

namespace detail {

inline double shape_gauge(FccShape s, const Vec3& d) {
  const double l1 = d.cwiseAbs().sum();
  const double linf = d.cwiseAbs().maxCoeff();
  auto truncated = [&](double t) { return std::max(t * l1, linf); };
  auto tetra = [&](double sign) {
    const double a = d.x() + d.y() + d.z();
    const double b = d.x() - d.y() - d.z();
    const double c = -d.x() + d.y() - d.z();
    const double e = -d.x() - d.y() + d.z();
    return std::max({sign * a, sign * b, sign * c, sign * e});
  };
  switch (s) {
    case FccShape::Ball: return d.norm();
    case FccShape::Cube: return linf;
    case FccShape::Octahedron: return l1;
    case FccShape::Truncated45: return truncated(0.45);
    case FccShape::Truncated60: return truncated(0.60);
    case FccShape::Truncated75: return truncated(0.75);
    case FccShape::Tetrahedron: return tetra(1.0);
    case FccShape::InvertedTetrahedron: return tetra(-1.0);
    case FccShape::RhombicDodecahedron:
      return std::max({std::abs(d.x()) + std::abs(d.y()), std::abs(d.y()) + std::abs(d.z()),
                       std::abs(d.x()) + std::abs(d.z())});
    case FccShape::Auto: break;
  }
  return d.norm();
}

inline Vec3 center_point(FccCenter c) {
  const double s = std::sqrt(2.0);
  switch (c) {
    case FccCenter::LatticePoint: return Vec3::Zero();
    case FccCenter::OctahedralHole: return Vec3(s, 0.0, 0.0);
    case FccCenter::TetrahedralHole: return Vec3(0.5 * s, 0.5 * s, 0.5 * s);
    case FccCenter::EdgeMidpoint: return Vec3(0.5 * s, 0.5 * s, 0.0);
  }
  return Vec3::Zero();
}

struct RankedSite {
  double gauge;
  Vec3 p;
};

// FCC points sqrt2 (a, b, c), a + b + c even, ranked by gauge about the
// center. Returns the smallest gauge-ball prefix holding at least m points
// (ties included). Every shape gauge dominates the max-norm, so the prefix is
// complete once its level is below the max-norm distance from the center to
// the first lattice layer outside the box.
inline std::vector<RankedSite> fcc_pool(FccShape s, FccCenter c, std::size_t m) {
  const Vec3 ctr = center_point(c);
  const double root2 = std::sqrt(2.0);
  const double eps = 1e-9;
  for (int A = static_cast<int>(std::ceil(std::cbrt(static_cast<double>(m)))) + 2;; A *= 2) {
    std::vector<RankedSite> sites;
    for (int a = -A; a <= A; ++a) {
      for (int b = -A; b <= A; ++b) {
        for (int k = -A; k <= A; ++k) {
          if (((a + b + k) % 2 + 2) % 2 != 0) continue;
          const Vec3 p = root2 * Vec3(a, b, k);
          const double g = shape_gauge(s, p - ctr);
          sites.push_back({g, p});
        }
      }
    }
    std::sort(sites.begin(), sites.end(), [](const RankedSite& x, const RankedSite& y) {
      if (x.gauge != y.gauge) return x.gauge < y.gauge;
      return std::lexicographical_compare(x.p.data(), x.p.data() + 3, y.p.data(), y.p.data() + 3);
    });
    if (sites.size() < m) continue;
    const double level = sites[m - 1].gauge + eps;
    if (level >= root2 * (A + 1) - ctr.cwiseAbs().maxCoeff()) continue;
    std::size_t end = m;
    while (end < sites.size() && sites[end].gauge <= level) ++end;
    sites.resize(end);
    return sites;
  }
}

// Clusters are kept full-dimensional: m points must span min(m - 1, 3)
// dimensions, so a collinear run of lattice points never passes as a cluster.
inline int target_rank(std::size_t m) { return static_cast<int>(std::min<std::size_t>(m == 0 ? 0 : m - 1, 3)); }

inline int rank_deficit(const std::vector<Vec3>& pts) {
  if (pts.size() < 2) return 0;
  return target_rank(pts.size()) - affine_frame<3>(pts).rank;
}

inline double ball3_polynomial(const IncrementalHull3::Measures& m, double rho) {
  return ((4.0 * std::numbers::pi / 3.0 * rho + m.curvature) * rho + m.area) * rho + m.volume;
}

// Picks `need` points from `candidates` one at a time, each time taking the
// one whose addition increases vol(conv S + rho B^3) least among those that
// keep S full-dimensional.
inline void greedy_fill(std::vector<Vec3>& S, std::vector<Vec3> candidates, std::size_t need, double rho) {
  while (need > 0 && !candidates.empty()) {
    std::size_t best = 0;
    std::pair<int, double> best_key{std::numeric_limits<int>::max(), 0.0};
    std::array<int, 4> simplex{};
    std::optional<IncrementalHull3> base;
    if (S.size() >= 4 && find_simplex(S, simplex)) base = build_incremental_hull(S);
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      std::pair<int, double> key;
      if (base) {
        IncrementalHull3 h = *base;
        h.add_point(candidates[k]);
        key = {0, ball3_polynomial(h.measures(), rho)};
      } else {
        S.push_back(candidates[k]);
        key = {rank_deficit(S), ball3_volume(S, rho)};
        S.pop_back();
      }
      if (key.first < best_key.first ||
          (key.first == best_key.first && key.second < best_key.second - 1e-12 * std::abs(best_key.second))) {
        best_key = key;
        best = k;
      }
    }
    S.push_back(candidates[best]);
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(best));
    --need;
  }
}

}  // namespace detail

/// Raw (unrefined) cluster: the n FCC points closest to `center` in the
/// gauge of `shape`; the partially filled outer shell is completed greedily.
inline PackingSet<3> fcc_raw_cluster(int n, FccShape shape, FccCenter center, double rho) {
  if (n < 1) throw std::invalid_argument("fcc_cluster: n must be >= 1");
  if (shape == FccShape::Auto) throw std::invalid_argument("fcc_raw_cluster: concrete shape required");
  const auto pool = detail::fcc_pool(shape, center, static_cast<std::size_t>(n));
  const double level = pool[static_cast<std::size_t>(n) - 1].gauge;
  std::vector<Vec3> inner;
  std::vector<Vec3> shell;
  for (const auto& s : pool) {
    if (s.gauge < level - 1e-9) {
      inner.push_back(s.p);
    } else if (s.gauge <= level + 1e-9) {
      shell.push_back(s.p);
    }
  }
  detail::greedy_fill(inner, std::move(shell), static_cast<std::size_t>(n) - inner.size(), rho);
  PackingSet<3> C;
  C.points = std::move(inner);
  C.label = "fcc:" + std::to_string(n) + ":" + to_string(shape) + "@" + to_string(center);
  return C;
}

/// Swap refinement within a pool: remove the hull vertex whose removal helps
/// most and add the pool point that hurts least, while strictly improving.
/// Removals are tried in order of benefit until one yields an improving swap.
inline PackingSet<3> swap_refine(PackingSet<3> C, const std::vector<Vec3>& pool, double rho, int max_iter = 500) {
  const std::size_t n = C.size();
  if (n < 2) return C;
  auto in_set = [&C](const Vec3& p) {
    return std::any_of(C.points.begin(), C.points.end(), [&p](const Vec3& q) { return (p - q).squaredNorm() < 1e-12; });
  };
  double current = ball3_volume(C.points, rho);
  for (int iter = 0; iter < max_iter; ++iter) {
    const Hull3 h = hull3d(C.points);
    std::vector<std::pair<double, std::size_t>> removals;
    for (int v : h.vertices) {
      std::vector<Vec3> rest;
      rest.reserve(n - 1);
      for (std::size_t i = 0; i < n; ++i) {
        if (static_cast<int>(i) != v) rest.push_back(C.points[i]);
      }
      removals.emplace_back(ball3_volume(rest, rho), static_cast<std::size_t>(v));
    }
    std::sort(removals.begin(), removals.end());
    bool improved = false;
    for (const auto& [removed_vol, v] : removals) {
      std::vector<Vec3> rest;
      for (std::size_t i = 0; i < n; ++i) {
        if (i != v) rest.push_back(C.points[i]);
      }
      std::array<int, 4> simplex{};
      std::optional<IncrementalHull3> base;
      if (rest.size() >= 4 && detail::find_simplex(rest, simplex)) base = build_incremental_hull(rest);
      double best = current;
      std::optional<Vec3> pick;
      for (const auto& p : pool) {
        if ((p - C.points[v]).squaredNorm() < 1e-12 || in_set(p)) continue;
        double vol;
        if (base) {
          IncrementalHull3 hh = *base;
          hh.add_point(p);
          vol = detail::ball3_polynomial(hh.measures(), rho);
        } else {
          rest.push_back(p);
          const bool flat = detail::rank_deficit(rest) > 0;
          vol = ball3_volume(rest, rho);
          rest.pop_back();
          if (flat) continue;
        }
        if (vol < best - 1e-12 * best) {
          best = vol;
          pick = p;
        }
      }
      if (pick) {
        C.points[v] = *pick;
        current = best;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return C;
}

/// n FCC points (minimal distance 2) chosen to keep vol(conv C + rho B^3)
/// small. A concrete shape tries every center; Auto tries every shape and
/// center. The best raw candidates are then swap-refined within their pools.
inline PackingSet<3> fcc_cluster(int n, FccShape shape = FccShape::Auto, double rho = 1.0, int refine_top = 4) {
  if (n < 1) throw std::invalid_argument("fcc_cluster: n must be >= 1");
  if (!(rho > 0.0)) throw std::invalid_argument("fcc_cluster: rho must be positive");
  struct Candidate {
    double volume;
    FccShape shape;
    FccCenter center;
    PackingSet<3> set;
  };
  std::vector<Candidate> cands;
  const auto shapes = shape == FccShape::Auto ? std::vector<FccShape>(kFccShapes.begin(), kFccShapes.end())
                                              : std::vector<FccShape>{shape};
  for (FccShape s : shapes) {
    for (FccCenter c : kFccCenters) {
      auto C = fcc_raw_cluster(n, s, c, rho);
      if (detail::rank_deficit(C.points) > 0) continue;
      const double v = ball3_volume(C.points, rho);
      cands.push_back({v, s, c, std::move(C)});
    }
  }
  if (cands.empty()) throw std::logic_error("fcc_cluster: no full-dimensional candidate");
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.volume < b.volume; });
  Candidate best = cands.front();
  const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(std::max(refine_top, 0)), cands.size());
  for (std::size_t k = 0; k < top; ++k) {
    const auto ranked = detail::fcc_pool(cands[k].shape, cands[k].center, 4 * static_cast<std::size_t>(n));
    std::vector<Vec3> pool;
    pool.reserve(ranked.size());
    for (const auto& r : ranked) pool.push_back(r.p);
    auto refined = swap_refine(cands[k].set, pool, rho);
    const double v = ball3_volume(refined.points, rho);
    if (v < best.volume - 1e-12 * best.volume) {
      best = {v, cands[k].shape, cands[k].center, std::move(refined)};
      best.set.label += "+swaps";
    }
  }
  return best.set;
}

// ---------------------------------------------------------------------------
// Lattices
// ---------------------------------------------------------------------------

template <int D>
struct Lattice {
  Eigen::Matrix<double, D, D> basis;  ///< columns are basis vectors
  double det = 0.0;

  static Lattice from_basis(const Eigen::Matrix<double, D, D>& b) {
    const double d = std::abs(b.determinant());
    if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("lattice basis is singular");
    return {b, d};
  }
};

/// Hexagonal lattice of touching unit discs.
inline Lattice<2> hexagonal_lattice() {
  Eigen::Matrix2d b;
  b << 2.0, 1.0, 0.0, std::sqrt(3.0);
  return Lattice<2>::from_basis(b);
}

/// Face-centred cubic lattice with minimal distance 2.
inline Lattice<3> fcc_lattice() {
  Eigen::Matrix3d b;
  b << 1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0;
  return Lattice<3>::from_basis(std::sqrt(2.0) * b);
}

/// vol(K) / det(Lambda) after checking that no lattice vector with
/// coefficients in [-6, 6]^d has gauge norm below 2.
template <int D>
double lattice_density(const ConvexBody& K, const Lattice<D>& L) {
  detail::require_dim<D>(K, "lattice_density");
  constexpr int kRange = 6;
  std::array<int, D> k;
  k.fill(-kRange);
  const double limit = 2.0 - tolerance();
  while (true) {
    if (std::any_of(k.begin(), k.end(), [](int c) { return c != 0; })) {
      Vec<D> coeff;
      for (int i = 0; i < D; ++i) coeff[i] = static_cast<double>(k[static_cast<std::size_t>(i)]);
      const Vec<D> v = L.basis * coeff;
      const double g = gauge_norm<D>(K, v);
      if (g < limit) {
        throw NotAPackingLattice("not a packing lattice: a lattice vector has gauge norm " + std::to_string(g) +
                                 " < 2");
      }
    }
    int i = 0;
    while (i < D && k[static_cast<std::size_t>(i)] == kRange) k[static_cast<std::size_t>(i++)] = -kRange;
    if (i == D) break;
    ++k[static_cast<std::size_t>(i)];
  }
  return K.volume() / L.det;
}

}  // namespace parapack
