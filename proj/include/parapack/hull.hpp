#pragma once

// Convex hulls in the plane and in space.
//
// The affine dimension of the input is decided first from the singular
// values of the centred point matrix (threshold tolerance() relative to
// max(1, largest singular value)). Full-dimensional inputs are then hulled
// with exact-sign orientation predicates, so the combinatorial structure is
// always consistent even for the many coplanar points of lattice clusters.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/SVD>

#include "parapack/polygon.hpp"
#include "parapack/predicates.hpp"
#include "parapack/tolerance.hpp"
#include "parapack/vec.hpp"

namespace parapack {

/// Affine frame of a point set: centroid, principal axes (columns, by
/// decreasing singular value) and numerical rank.
template <int D>
struct AffineFrame {
  Vec<D> origin;
  Eigen::Matrix<double, D, D> axes;
  int rank = 0;
};

template <int D>
AffineFrame<D> affine_frame(std::span<const Vec<D>> points) {
  AffineFrame<D> f;
  f.origin = Vec<D>::Zero();
  for (const auto& p : points) f.origin += p;
  f.origin /= static_cast<double>(points.size());
  Eigen::Matrix<double, Eigen::Dynamic, D> m(static_cast<Eigen::Index>(points.size()), D);
  for (std::size_t i = 0; i < points.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = (points[i] - f.origin).transpose();
  Eigen::JacobiSVD<Eigen::Matrix<double, Eigen::Dynamic, D>> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double threshold = tolerance() * std::max(1.0, s(0));
  f.rank = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) > threshold) ++f.rank;
  }
  f.axes = svd.matrixV();
  return f;
}

// ---------------------------------------------------------------------------
// Planar hull
// ---------------------------------------------------------------------------

struct Hull2 {
  int hull_dim = 0;
  /// dim 0: one point; dim 1: the two segment endpoints; dim 2: ccw vertices.
  std::vector<Vec2> vertices;

  [[nodiscard]] double area() const { return hull_dim == 2 ? polygon::area(vertices) : 0.0; }
  /// Boundary length; a segment counts both sides.
  [[nodiscard]] double perimeter() const { return polygon::perimeter(vertices); }
  [[nodiscard]] double length() const {
    return hull_dim == 1 ? (vertices[1] - vertices[0]).norm() : 0.0;
  }
};

namespace detail {

inline Hull2 segment_hull(std::span<const Vec2> points, const Vec2& dir) {
  auto lo = points.begin();
  auto hi = points.begin();
  for (auto it = points.begin(); it != points.end(); ++it) {
    if (it->dot(dir) < lo->dot(dir)) lo = it;
    if (it->dot(dir) > hi->dot(dir)) hi = it;
  }
  return Hull2{1, {*lo, *hi}};
}

// Andrew's monotone chain; strictly convex output (collinear points dropped).
inline std::vector<Vec2> monotone_chain(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && predicates::orient2d(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (k >= lower && predicates::orient2d(h[k - 2], h[k - 1], *it) <= 0) --k;
    h[k++] = *it;
  }
  h.resize(k - 1);
  return h;
}

}  // namespace detail

inline Hull2 hull2d(std::span<const Vec2> points) {
  if (points.empty()) throw std::invalid_argument("hull2d: empty point set");
  const auto frame = affine_frame<2>(points);
  if (frame.rank == 0) return Hull2{0, {points.front()}};
  if (frame.rank == 1) return detail::segment_hull(points, frame.axes.col(0));
  auto v = detail::monotone_chain({points.begin(), points.end()});
  if (v.size() < 3) return detail::segment_hull(points, frame.axes.col(0));
  return Hull2{2, std::move(v)};
}

// ---------------------------------------------------------------------------
// Spatial hull
// ---------------------------------------------------------------------------

struct Facet {
  std::array<int, 3> v{};  ///< indices into Hull3::points, ccw seen from outside
  Vec3 normal;             ///< outward unit normal
  double offset = 0.0;     ///< <normal, x> <= offset on the hull
  double area = 0.0;
};

struct HullEdge {
  int a = 0;
  int b = 0;
  int f0 = 0;  ///< adjacent facets (indices into Hull3::facets)
  int f1 = 0;
  double length = 0.0;
  double exterior_angle = 0.0;  ///< angle between the outward normals, in [0, pi]
};

struct Hull3 {
  int hull_dim = 0;
  std::vector<Vec3> points;  ///< copy of the input
  /// dim 3: indices of hull vertices; dim 2: ccw boundary cycle in the
  /// supporting plane; dim 1: the two endpoints; dim 0: one point.
  std::vector<int> vertices;
  std::vector<Facet> facets;   ///< dim 3 only, triangulated
  std::vector<HullEdge> edges; ///< dim 3 only; edges between coplanar triangles are merged away
  double volume = 0.0;
  double area = 0.0;       ///< surface area (dim 3) or planar area (dim 2)
  double perimeter = 0.0;  ///< dim 2 only
  double length = 0.0;     ///< dim 1 only
  /// Sum over edges of length * exterior angle / 2 (dim 3 only).
  double mean_curvature_integral = 0.0;
  Vec3 plane_normal = Vec3::Zero();  ///< dim 2 only
};

/// Incremental (beneath-beyond) 3D hull over a fixed point array. Points may
/// be inserted one by one; copies are cheap enough to probe candidate
/// insertions.
class IncrementalHull3 {
 public:
  struct Face {
    std::array<int, 3> v{};
    std::array<int, 3> nb{};  // nb[i] is across edge (v[i], v[i+1])
    bool alive = true;
  };

  /// Starts from the tetrahedron i0..i3, which must not be coplanar.
  IncrementalHull3(std::span<const Vec3> points, std::array<int, 4> simplex)
      : points_(points.begin(), points.end()) {
    init_simplex(simplex);
  }

  /// Appends a new point to the point array and inserts it. Returns false if
  /// the point is inside or on the current hull.
  bool add_point(const Vec3& p) {
    points_.push_back(p);
    return insert(static_cast<int>(points_.size()) - 1);
  }

  bool insert(int pi) {
    const Vec3& p = points_[static_cast<std::size_t>(pi)];
    // Faces whose plane contains p are removed along with the strictly
    // visible ones; otherwise p collinear with a horizon edge would leave a
    // zero-area face without a normal.
    visible_.assign(faces_.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      if (!faces_[f].alive) continue;
      const int o = side(faces_[f], p);
      if (o <= 0) visible_[f] = 1;
      if (o < 0) any = true;
    }
    if (!any) return false;

    horizon_.clear();
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      if (!visible_[f]) continue;
      for (int i = 0; i < 3; ++i) {
        const int g = faces_[f].nb[static_cast<std::size_t>(i)];
        if (!visible_[static_cast<std::size_t>(g)]) {
          const auto& gf = faces_[static_cast<std::size_t>(g)];
          int slot = 0;
          while (gf.nb[static_cast<std::size_t>(slot)] != static_cast<int>(f)) ++slot;
          horizon_.push_back({faces_[f].v[static_cast<std::size_t>(i)],
                              faces_[f].v[static_cast<std::size_t>((i + 1) % 3)], g, slot});
        }
      }
    }
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      if (visible_[f]) faces_[f].alive = false;
    }

    // New face (a, b, p) per horizon edge; link around the cone through the
    // start/end vertex of each horizon edge.
    if (by_start_.size() < points_.size()) {
      by_start_.resize(points_.size(), -1);
      by_end_.resize(points_.size(), -1);
    }
    const int first_new = static_cast<int>(faces_.size());
    for (const auto& h : horizon_) {
      Face nf;
      nf.v = {h.a, h.b, pi};
      nf.nb = {h.outer, -1, -1};
      const int id = static_cast<int>(faces_.size());
      faces_.push_back(nf);
      faces_[static_cast<std::size_t>(h.outer)].nb[static_cast<std::size_t>(h.slot)] = id;
      by_start_[static_cast<std::size_t>(h.a)] = id;
      by_end_[static_cast<std::size_t>(h.b)] = id;
    }
    for (int id = first_new; id < static_cast<int>(faces_.size()); ++id) {
      auto& nf = faces_[static_cast<std::size_t>(id)];
      nf.nb[1] = by_start_[static_cast<std::size_t>(nf.v[1])];  // edge (b, p) <-> face starting at b
      nf.nb[2] = by_end_[static_cast<std::size_t>(nf.v[0])];    // edge (p, a) <-> face ending at a
    }
    for (const auto& h : horizon_) {
      by_start_[static_cast<std::size_t>(h.a)] = -1;
      by_end_[static_cast<std::size_t>(h.b)] = -1;
    }
    if (faces_.size() > 4 * alive_count_estimate()) compact();
    return true;
  }

  [[nodiscard]] bool contains(const Vec3& p) const {
    for (const auto& f : faces_) {
      if (f.alive && outside(f, p)) return false;
    }
    return true;
  }

  [[nodiscard]] const std::vector<Vec3>& points() const { return points_; }
  [[nodiscard]] const std::vector<Face>& faces() const { return faces_; }

  /// Volume, surface area and the edge curvature sum M; enough for the
  /// Steiner polynomial of the hull with the unit ball.
  struct Measures {
    double volume = 0.0;
    double area = 0.0;
    double curvature = 0.0;
  };

  [[nodiscard]] Measures measures() const {
    Measures m;
    const Vec3 ref = reference_point();
    normals_.assign(faces_.size(), Vec3::Zero());
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      if (!faces_[f].alive) continue;
      const auto& v = faces_[f].v;
      const Vec3& a = pt(v[0]);
      const Vec3 n = (pt(v[1]) - a).cross(pt(v[2]) - a);
      const double twice_area = n.norm();
      m.area += 0.5 * twice_area;
      m.volume += n.dot(a - ref) / 6.0;
      const double longest = std::max({(pt(v[1]) - a).squaredNorm(), (pt(v[2]) - a).squaredNorm(),
                                       (pt(v[2]) - pt(v[1])).squaredNorm()});
      normals_[f] = twice_area > 1e-12 * longest ? Vec3(n / twice_area) : Vec3::Zero();
    }
    // A sliver (three nearly collinear vertices) lies along an edge of the
    // polytope. Giving it a normal between those of its neighbours splits the
    // edge's dihedral angle between its sides without changing the sum.
    for (int pass = 0; pass < 4; ++pass) {
      bool pending = false;
      for (std::size_t f = 0; f < faces_.size(); ++f) {
        if (!faces_[f].alive || normals_[f] != Vec3::Zero()) continue;
        Vec3 sum = Vec3::Zero();
        for (int g : faces_[f].nb) sum += normals_[static_cast<std::size_t>(g)];
        if (sum.norm() > 1e-12) {
          normals_[f] = sum.normalized();
        } else {
          pending = true;
        }
      }
      if (!pending) break;
    }
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      if (!faces_[f].alive) continue;
      for (int i = 0; i < 3; ++i) {
        const int g = faces_[f].nb[static_cast<std::size_t>(i)];
        if (g < static_cast<int>(f)) continue;
        const double angle = dihedral(normals_[f], normals_[static_cast<std::size_t>(g)]);
        const double len = (pt(faces_[f].v[static_cast<std::size_t>((i + 1) % 3)]) -
                            pt(faces_[f].v[static_cast<std::size_t>(i)]))
                               .norm();
        m.curvature += 0.5 * len * angle;
      }
    }
    return m;
  }

  /// Full structural description (facets, merged edges, vertex list).
  [[nodiscard]] Hull3 to_hull() const;

  static double dihedral(const Vec3& n0, const Vec3& n1) {
    return std::atan2(n0.cross(n1).norm(), n0.dot(n1));
  }

 private:
  [[nodiscard]] const Vec3& pt(int i) const { return points_[static_cast<std::size_t>(i)]; }

  // Negative: p strictly beyond the face's plane.
  [[nodiscard]] int side(const Face& f, const Vec3& p) const {
    return predicates::orient3d(pt(f.v[0]), pt(f.v[1]), pt(f.v[2]), p);
  }

  [[nodiscard]] bool outside(const Face& f, const Vec3& p) const {
    return side(f, p) < 0;
  }

  [[nodiscard]] Vec3 reference_point() const {
    return (pt(simplex_[0]) + pt(simplex_[1]) + pt(simplex_[2]) + pt(simplex_[3])) / 4.0;
  }

  [[nodiscard]] std::size_t alive_count_estimate() const {
    // A hull with V vertices has 2V - 4 faces; bound by points seen so far.
    return std::max<std::size_t>(8, 2 * points_.size());
  }

  void init_simplex(std::array<int, 4> s) {
    simplex_ = s;
    if (predicates::orient3d(pt(s[0]), pt(s[1]), pt(s[2]), pt(s[3])) == 0) {
      throw std::logic_error("IncrementalHull3: initial simplex is flat");
    }
    const std::array<std::array<int, 3>, 4> tri = {{{s[0], s[1], s[2]},
                                                   {s[0], s[1], s[3]},
                                                   {s[0], s[2], s[3]},
                                                   {s[1], s[2], s[3]}}};
    const std::array<int, 4> opposite = {s[3], s[2], s[1], s[0]};
    for (int k = 0; k < 4; ++k) {
      Face f;
      f.v = tri[static_cast<std::size_t>(k)];
      // Orient so the opposite vertex is inside (not outside).
      if (outside(f, pt(opposite[static_cast<std::size_t>(k)]))) std::swap(f.v[1], f.v[2]);
      faces_.push_back(f);
    }
    for (std::size_t f = 0; f < 4; ++f) {
      for (int i = 0; i < 3; ++i) {
        const int a = faces_[f].v[static_cast<std::size_t>(i)];
        const int b = faces_[f].v[static_cast<std::size_t>((i + 1) % 3)];
        for (std::size_t g = 0; g < 4; ++g) {
          if (g == f) continue;
          for (int j = 0; j < 3; ++j) {
            if (faces_[g].v[static_cast<std::size_t>(j)] == b &&
                faces_[g].v[static_cast<std::size_t>((j + 1) % 3)] == a) {
              faces_[f].nb[static_cast<std::size_t>(i)] = static_cast<int>(g);
            }
          }
        }
      }
    }
  }

  void compact() {
    std::vector<int> remap(faces_.size(), -1);
    std::vector<Face> kept;
    kept.reserve(faces_.size());
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      if (faces_[f].alive) {
        remap[f] = static_cast<int>(kept.size());
        kept.push_back(faces_[f]);
      }
    }
    for (auto& f : kept) {
      for (auto& n : f.nb) n = remap[static_cast<std::size_t>(n)];
    }
    faces_ = std::move(kept);
  }

  std::vector<Vec3> points_;
  std::vector<Face> faces_;
  std::array<int, 4> simplex_{};
  // Scratch buffers.
  std::vector<char> visible_;
  struct HorizonScratch {
    int a, b, outer, slot;
  };
  std::vector<HorizonScratch> horizon_;
  std::vector<int> by_start_;
  std::vector<int> by_end_;
  mutable std::vector<Vec3> normals_;
};

namespace detail {

/// Picks four affinely independent points (exact test) or returns false.
inline bool find_simplex(std::span<const Vec3> pts, std::array<int, 4>& s) {
  const int n = static_cast<int>(pts.size());
  int i0 = 0;
  for (int i = 1; i < n; ++i) {
    if (pts[static_cast<std::size_t>(i)].x() < pts[static_cast<std::size_t>(i0)].x()) i0 = i;
  }
  int i1 = -1;
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = (pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(i0)]).squaredNorm();
    if (d > best) {
      best = d;
      i1 = i;
    }
  }
  if (i1 < 0) return false;
  int i2 = -1;
  best = 0.0;
  const Vec3 axis = pts[static_cast<std::size_t>(i1)] - pts[static_cast<std::size_t>(i0)];
  for (int i = 0; i < n; ++i) {
    const double d = axis.cross(pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(i0)]).squaredNorm();
    if (d > best) {
      best = d;
      i2 = i;
    }
  }
  if (i2 < 0) return false;
  const Vec3 normal = axis.cross(pts[static_cast<std::size_t>(i2)] - pts[static_cast<std::size_t>(i0)]);
  int i3 = -1;
  best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = std::abs(normal.dot(pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(i0)]));
    if (d > best) {
      best = d;
      i3 = i;
    }
  }
  if (i3 < 0) return false;
  s = {i0, i1, i2, i3};
  return predicates::orient3d(pts[static_cast<std::size_t>(i0)], pts[static_cast<std::size_t>(i1)],
                              pts[static_cast<std::size_t>(i2)], pts[static_cast<std::size_t>(i3)]) != 0;
}

}  // namespace detail

/// Builds the incremental hull of a full-dimensional point set; throws if the
/// set is exactly coplanar.
inline IncrementalHull3 build_incremental_hull(std::span<const Vec3> points) {
  std::array<int, 4> s{};
  if (!detail::find_simplex(points, s)) {
    throw std::invalid_argument("build_incremental_hull: point set is not full-dimensional");
  }
  IncrementalHull3 h(points, s);
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    if (i == s[0] || i == s[1] || i == s[2] || i == s[3]) continue;
    h.insert(i);
  }
  return h;
}

inline Hull3 IncrementalHull3::to_hull() const {
  Hull3 out;
  out.hull_dim = 3;
  out.points = points_;
  std::vector<int> face_id(faces_.size(), -1);
  std::vector<char> is_vertex(points_.size(), 0);
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    if (!faces_[f].alive) continue;
    for (int k = 0; k < 3; ++k) {
      const int g = faces_[f].nb[static_cast<std::size_t>(k)];
      if (g < 0 || !faces_[static_cast<std::size_t>(g)].alive) {
        throw std::logic_error("hull3d: facet structure is not watertight");
      }
      const auto& gf = faces_[static_cast<std::size_t>(g)];
      if (std::count(gf.nb.begin(), gf.nb.end(), static_cast<int>(f)) != 1) {
        throw std::logic_error("hull3d: inconsistent facet adjacency");
      }
    }
    face_id[f] = static_cast<int>(out.facets.size());
    Facet fc;
    fc.v = faces_[f].v;
    const Vec3& a = pt(fc.v[0]);
    const Vec3 n = (pt(fc.v[1]) - a).cross(pt(fc.v[2]) - a);
    fc.area = 0.5 * n.norm();
    fc.normal = n.norm() > 0.0 ? Vec3(n.normalized()) : Vec3::Zero();
    fc.offset = fc.normal.dot(a);
    out.facets.push_back(fc);
    for (int v : fc.v) is_vertex[static_cast<std::size_t>(v)] = 1;
  }
  const Measures m = measures();
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    if (face_id[f] < 0) continue;
    auto& fc = out.facets[static_cast<std::size_t>(face_id[f])];
    if (fc.normal != normals_[f]) {
      fc.normal = normals_[f];
      fc.offset = fc.normal.dot(pt(fc.v[0]));
    }
  }
  out.volume = m.volume;
  out.area = m.area;
  out.mean_curvature_integral = m.curvature;
  const double merge = tolerance();
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    if (!faces_[f].alive) continue;
    for (int i = 0; i < 3; ++i) {
      const int g = faces_[f].nb[static_cast<std::size_t>(i)];
      if (g < static_cast<int>(f)) continue;
      HullEdge e;
      e.a = faces_[f].v[static_cast<std::size_t>(i)];
      e.b = faces_[f].v[static_cast<std::size_t>((i + 1) % 3)];
      e.f0 = face_id[f];
      e.f1 = face_id[static_cast<std::size_t>(g)];
      e.length = (pt(e.b) - pt(e.a)).norm();
      e.exterior_angle = std::clamp(dihedral(out.facets[static_cast<std::size_t>(e.f0)].normal,
                                             out.facets[static_cast<std::size_t>(e.f1)].normal),
                                    0.0, M_PI);
      if (e.exterior_angle > merge) out.edges.push_back(e);
    }
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (is_vertex[i]) out.vertices.push_back(static_cast<int>(i));
  }
  return out;
}

inline Hull3 hull3d(std::span<const Vec3> points) {
  if (points.empty()) throw std::invalid_argument("hull3d: empty point set");
  const auto frame = affine_frame<3>(points);
  Hull3 out;
  out.points.assign(points.begin(), points.end());
  if (frame.rank == 3) {
    std::array<int, 4> s{};
    if (detail::find_simplex(points, s)) return build_incremental_hull(points).to_hull();
  }
  if (frame.rank == 0) {
    out.hull_dim = 0;
    out.vertices = {0};
    return out;
  }
  if (frame.rank == 1) {
    const Vec3 dir = frame.axes.col(0);
    int lo = 0;
    int hi = 0;
    for (int i = 0; i < static_cast<int>(points.size()); ++i) {
      if (points[static_cast<std::size_t>(i)].dot(dir) < points[static_cast<std::size_t>(lo)].dot(dir)) lo = i;
      if (points[static_cast<std::size_t>(i)].dot(dir) > points[static_cast<std::size_t>(hi)].dot(dir)) hi = i;
    }
    out.hull_dim = 1;
    out.vertices = {lo, hi};
    out.length = (points[static_cast<std::size_t>(hi)] - points[static_cast<std::size_t>(lo)]).norm();
    return out;
  }
  // Planar: hull in the principal plane.
  const Vec3 e0 = frame.axes.col(0);
  const Vec3 e1 = frame.axes.col(1);
  std::vector<Vec2> flat;
  flat.reserve(points.size());
  for (const auto& p : points) {
    const Vec3 q = p - frame.origin;
    flat.emplace_back(q.dot(e0), q.dot(e1));
  }
  const Hull2 h2 = hull2d(flat);
  out.hull_dim = h2.hull_dim == 2 ? 2 : h2.hull_dim;
  for (const auto& v : h2.vertices) {
    for (int i = 0; i < static_cast<int>(flat.size()); ++i) {
      if (flat[static_cast<std::size_t>(i)] == v) {
        out.vertices.push_back(i);
        break;
      }
    }
  }
  if (out.hull_dim == 2) {
    out.area = h2.area();
    out.perimeter = h2.perimeter();
    out.plane_normal = e0.cross(e1).normalized();
  } else if (out.hull_dim == 1) {
    out.length = h2.length();
  }
  return out;
}

}  // namespace parapack
