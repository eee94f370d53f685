#pragma once

// Convex bodies, gauge norms, difference bodies, projections and the volume
// constants of unit balls.

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "parapack/errors.hpp"
#include "parapack/hull.hpp"
#include "parapack/polygon.hpp"
#include "parapack/predicates.hpp"
#include "parapack/tolerance.hpp"
#include "parapack/vec.hpp"

namespace parapack {

/// Volume of the i-dimensional unit ball, by kappa_i = (2 pi / i) kappa_{i-2}.
inline double kappa(int i) {
  if (i < 0) throw std::invalid_argument("kappa: negative dimension");
  double even = 1.0;
  double odd = 2.0;
  if (i == 0) return even;
  if (i == 1) return odd;
  double k = (i % 2 == 0) ? even : odd;
  for (int j = (i % 2 == 0) ? 2 : 3; j <= i; j += 2) k *= 2.0 * std::numbers::pi / j;
  return k;
}

/// Unit vector of the ambient space.
template <int D>
class Direction {
 public:
  /// Normalises any nonzero vector.
  static Direction from(const Vec<D>& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("Direction: zero vector");
    return Direction(v / n);
  }

  /// Accepts an already normalised vector (norm 1 within 1e-12).
  explicit Direction(const Vec<D>& u) : u_(u) {
    if (std::abs(u.norm() - 1.0) > 1e-12) throw std::invalid_argument("Direction: not a unit vector");
  }

  [[nodiscard]] const Vec<D>& vec() const { return u_; }

  static Direction axis(int k = 0) { return Direction(Vec<D>::Unit(k)); }

 private:
  Vec<D> u_;
};

/// The body K being packed: the unit ball B^d, a convex polygon, or a
/// three-dimensional convex polytope. Immutable; derived data (hulls, the
/// facets of the difference body) is computed once at construction and shared
/// between copies.
class ConvexBody {
 public:
  enum class Kind { Ball, Polygon, Polytope3 };

  static ConvexBody ball(int dim) {
    if (dim < 1) throw InvalidBody("ball: dimension must be >= 1");
    auto d = std::make_shared<Data>();
    d->kind = Kind::Ball;
    d->dim = dim;
    d->volume = kappa(dim);
    return ConvexBody(std::move(d));
  }

  /// Vertices must be strictly convex, counterclockwise, at least three.
  static ConvexBody polygon(std::vector<Vec2> vertices) {
    check_polygon(vertices);
    auto d = std::make_shared<Data>();
    d->kind = Kind::Polygon;
    d->dim = 2;
    d->volume = polygon::area(vertices);
    d->centroid2 = polygon::centroid(vertices);
    const auto diff = polygon::scaled(
        polygon::minkowski_sum(vertices, polygon::negated(vertices)), 0.5);
    d->sym2 = polygon::half_planes(diff);
    d->diff2 = diff;
    d->poly2 = std::move(vertices);
    return ConvexBody(std::move(d));
  }

  /// Vertices must be in convex position and span space.
  static ConvexBody polytope3(std::vector<Vec3> vertices) {
    if (vertices.size() < 4) throw InvalidBody("polytope3: need at least 4 vertices");
    Hull3 h = hull3d(vertices);
    if (h.hull_dim != 3) throw InvalidBody("polytope3: vertices do not span 3-space");
    if (h.vertices.size() != vertices.size()) {
      throw InvalidBody("polytope3: vertices are not in convex position");
    }
    auto d = std::make_shared<Data>();
    d->kind = Kind::Polytope3;
    d->dim = 3;
    d->volume = h.volume;
    d->centroid3 = polytope_centroid(h);

    std::vector<Vec3> diffs;
    diffs.reserve(vertices.size() * vertices.size());
    for (const auto& a : vertices) {
      for (const auto& b : vertices) diffs.emplace_back(0.5 * (a - b));
    }
    Hull3 dh = hull3d(diffs);
    for (const auto& f : dh.facets) {
      d->sym3_normals.push_back(f.normal);
      d->sym3_offsets.push_back(f.offset);
    }
    for (int v : dh.vertices) d->diff3.push_back(dh.points[static_cast<std::size_t>(v)]);
    d->hull3 = std::move(h);
    d->poly3 = std::move(vertices);
    return ConvexBody(std::move(d));
  }

  [[nodiscard]] Kind kind() const { return data_->kind; }
  [[nodiscard]] bool is_ball() const { return data_->kind == Kind::Ball; }
  [[nodiscard]] int dim() const { return data_->dim; }
  [[nodiscard]] double volume() const { return data_->volume; }

  [[nodiscard]] const std::vector<Vec2>& polygon_vertices() const { return data_->poly2; }
  [[nodiscard]] const std::vector<Vec3>& polytope_vertices() const { return data_->poly3; }
  [[nodiscard]] const Hull3& polytope_hull() const { return data_->hull3; }

  /// Vertices of the difference body 1/2 (K - K) (polygon / polytope only).
  [[nodiscard]] const std::vector<Vec2>& difference_polygon() const { return data_->diff2; }
  [[nodiscard]] const std::vector<Vec3>& difference_vertices() const { return data_->diff3; }

  [[nodiscard]] Vec2 centroid2() const { return data_->centroid2; }
  [[nodiscard]] Vec3 centroid3() const { return data_->centroid3; }

  /// Facets { <n, x> <= h } of 1/2 (K - K); h > 0.
  [[nodiscard]] const polygon::HalfPlanes& difference_half_planes() const { return data_->sym2; }
  [[nodiscard]] std::span<const Vec3> difference_normals() const { return data_->sym3_normals; }
  [[nodiscard]] std::span<const double> difference_offsets() const { return data_->sym3_offsets; }

  [[nodiscard]] std::string describe() const {
    switch (kind()) {
      case Kind::Ball:
        return "ball" + std::to_string(dim());
      case Kind::Polygon:
        return "polygon(" + std::to_string(polygon_vertices().size()) + ")";
      case Kind::Polytope3:
        return "polytope3(" + std::to_string(polytope_vertices().size()) + ")";
    }
    return {};
  }

 private:
  struct Data {
    Kind kind = Kind::Ball;
    int dim = 0;
    double volume = 0.0;
    std::vector<Vec2> poly2;
    std::vector<Vec2> diff2;
    polygon::HalfPlanes sym2;
    Vec2 centroid2 = Vec2::Zero();
    std::vector<Vec3> poly3;
    std::vector<Vec3> diff3;
    Hull3 hull3;
    std::vector<Vec3> sym3_normals;
    std::vector<double> sym3_offsets;
    Vec3 centroid3 = Vec3::Zero();
  };

  explicit ConvexBody(std::shared_ptr<const Data> d) : data_(std::move(d)) {}

  static void check_polygon(const std::vector<Vec2>& v) {
    if (v.size() < 3) throw InvalidBody("polygon: need at least 3 vertices");
    double turning = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec2& a = v[i];
      const Vec2& b = v[(i + 1) % v.size()];
      const Vec2& c = v[(i + 2) % v.size()];
      if (predicates::orient2d(a, b, c) <= 0) {
        throw InvalidBody("polygon: vertices must be strictly convex and counterclockwise");
      }
      const Vec2 e0 = b - a;
      const Vec2 e1 = c - b;
      turning += std::atan2(cross2(e0, e1), e0.dot(e1));
    }
    if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6) {
      throw InvalidBody("polygon: vertex cycle winds more than once");
    }
  }

  static Vec3 polytope_centroid(const Hull3& h) {
    const Vec3 ref = h.points[static_cast<std::size_t>(h.vertices.front())];
    Vec3 c = Vec3::Zero();
    double vol = 0.0;
    for (const auto& f : h.facets) {
      const Vec3& a = h.points[static_cast<std::size_t>(f.v[0])];
      const Vec3& b = h.points[static_cast<std::size_t>(f.v[1])];
      const Vec3& cc = h.points[static_cast<std::size_t>(f.v[2])];
      const double t = (a - ref).dot((b - ref).cross(cc - ref)) / 6.0;
      vol += t;
      c += t * (ref + a + b + cc) / 4.0;
    }
    return c / vol;
  }

  std::shared_ptr<const Data> data_;
};

namespace detail {

template <int D>
void require_dim(const ConvexBody& K, const char* op) {
  if (K.dim() != D) {
    throw std::invalid_argument(std::string(op) + ": body dimension " + std::to_string(K.dim()) +
                                " does not match vector dimension " + std::to_string(D));
  }
}

}  // namespace detail

/// 1/2 (K - K).
inline ConvexBody difference_body(const ConvexBody& K) {
  switch (K.kind()) {
    case ConvexBody::Kind::Ball:
      return K;
    case ConvexBody::Kind::Polygon:
      return ConvexBody::polygon(K.difference_polygon());
    case ConvexBody::Kind::Polytope3:
      return ConvexBody::polytope3(K.difference_vertices());
  }
  return K;
}

/// ||x||_K: the Minkowski functional of 1/2 (K - K), evaluated exactly as the
/// largest ratio <n_f, x> / h_f over its facets.
template <int D>
double gauge_norm(const ConvexBody& K, const Vec<D>& x) {
  detail::require_dim<D>(K, "gauge_norm");
  if (K.is_ball()) return x.norm();
  double g = 0.0;
  if constexpr (D == 2) {
    const auto& hp = K.difference_half_planes();
    for (std::size_t i = 0; i < hp.normals.size(); ++i) g = std::max(g, hp.normals[i].dot(x) / hp.offsets[i]);
  } else {
    const auto n = K.difference_normals();
    const auto h = K.difference_offsets();
    for (std::size_t i = 0; i < n.size(); ++i) g = std::max(g, n[i].dot(x) / h[i]);
  }
  return g;
}

/// (d-1)-volume of the orthogonal projection of K onto u^perp.
template <int D>
double projection_volume(const ConvexBody& K, const Direction<D>& u) {
  detail::require_dim<D>(K, "projection_volume");
  if (K.is_ball()) return kappa(D - 1);
  if constexpr (D == 2) {
    const Vec2 perp(-u.vec().y(), u.vec().x());
    return polygon::width(K.polygon_vertices(), perp);
  } else {
    double s = 0.0;
    for (const auto& f : K.polytope_hull().facets) s += std::abs(f.normal.dot(u.vec())) * f.area;
    return 0.5 * s;
  }
}

template <int D>
struct SausageDirection {
  Direction<D> u;
  /// min over u of projection_volume(K, u) / gauge_norm(K, u)
  double ratio;
};

namespace detail {

template <int D>
double sausage_ratio(const ConvexBody& K, const Vec<D>& v) {
  const auto u = Direction<D>::from(v);
  return projection_volume<D>(K, u) / gauge_norm<D>(K, u.vec());
}

// Nelder-Mead over R^2; returns the best vertex.
template <typename F>
Eigen::Vector2d nelder_mead_2d(F&& f, Eigen::Vector2d x0, double step, int max_iter = 400) {
  std::array<Eigen::Vector2d, 3> x = {x0, x0 + Eigen::Vector2d(step, 0.0), x0 + Eigen::Vector2d(0.0, step)};
  std::array<double, 3> fx = {f(x[0]), f(x[1]), f(x[2])};
  for (int it = 0; it < max_iter; ++it) {
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fx[static_cast<std::size_t>(a)] < fx[static_cast<std::size_t>(b)]; });
    const auto b = static_cast<std::size_t>(idx[0]);
    const auto m = static_cast<std::size_t>(idx[1]);
    const auto w = static_cast<std::size_t>(idx[2]);
    if ((x[w] - x[b]).norm() < 1e-13) break;
    const Eigen::Vector2d c = 0.5 * (x[b] + x[m]);
    const Eigen::Vector2d r = c + (c - x[w]);
    const double fr = f(r);
    if (fr < fx[b]) {
      const Eigen::Vector2d e = c + 2.0 * (c - x[w]);
      const double fe = f(e);
      if (fe < fr) {
        x[w] = e;
        fx[w] = fe;
      } else {
        x[w] = r;
        fx[w] = fr;
      }
    } else if (fr < fx[m]) {
      x[w] = r;
      fx[w] = fr;
    } else {
      const Eigen::Vector2d k = fr < fx[w] ? Eigen::Vector2d(c + 0.5 * (r - c)) : Eigen::Vector2d(c + 0.5 * (x[w] - c));
      const double fk = f(k);
      if (fk < std::min(fr, fx[w])) {
        x[w] = k;
        fx[w] = fk;
      } else {
        for (auto i : {m, w}) {
          x[i] = x[b] + 0.5 * (x[i] - x[b]);
          fx[i] = f(x[i]);
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < 3; ++i) {
    if (fx[i] < fx[best]) best = i;
  }
  return x[best];
}

}  // namespace detail

/// Direction u_K of the densest sausage: minimises
/// projection_volume(K, u) / ||u||_K. Balls return the first axis.
template <int D>
SausageDirection<D> optimal_sausage_direction(const ConvexBody& K) {
  detail::require_dim<D>(K, "optimal_sausage_direction");
  if (K.is_ball()) return {Direction<D>::axis(0), kappa(D - 1)};
  if constexpr (D == 2) {
    // The ratio is even in u, so half a turn suffices.
    constexpr int kGrid = 3600;
    auto f = [&](double t) { return detail::sausage_ratio<2>(K, Vec2(std::cos(t), std::sin(t))); };
    double best_t = 0.0;
    double best_f = f(0.0);
    for (int i = 1; i < kGrid; ++i) {
      const double t = std::numbers::pi * i / kGrid;
      const double v = f(t);
      if (v < best_f) {
        best_f = v;
        best_t = t;
      }
    }
    // Golden-section refinement in the neighbouring grid cells.
    const double h = std::numbers::pi / kGrid;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = best_t - h;
    double b = best_t + h;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > 1e-14) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = f(d);
      }
    }
    const double t = 0.5 * (a + b);
    if (f(t) < best_f) {
      best_t = t;
      best_f = f(t);
    }
    return {Direction<2>::from(Vec2(std::cos(best_t), std::sin(best_t))), best_f};
  } else {
    // Fibonacci sphere, then Nelder-Mead in the tangent plane of the best point.
    constexpr int kGrid = 20000;
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    Vec3 best_u = Vec3::UnitX();
    double best_f = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGrid; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / kGrid;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden_angle * i;
      const Vec3 u(r * std::cos(phi), r * std::sin(phi), z);
      const double v = detail::sausage_ratio<3>(K, u);
      if (v < best_f) {
        best_f = v;
        best_u = u;
      }
    }
    Vec3 e1 = best_u.unitOrthogonal();
    Vec3 e2 = best_u.cross(e1);
    auto f = [&](const Eigen::Vector2d& st) {
      return detail::sausage_ratio<3>(K, Vec3(best_u + st.x() * e1 + st.y() * e2));
    };
    const double step = std::sqrt(4.0 * std::numbers::pi / kGrid);
    const Eigen::Vector2d st = detail::nelder_mead_2d(f, Eigen::Vector2d::Zero(), step);
    const double refined = f(st);
    if (refined < best_f) {
      best_f = refined;
      best_u = (best_u + st.x() * e1 + st.y() * e2).normalized();
    }
    return {Direction<3>::from(best_u), best_f};
  }
}

/// True if K is centrally symmetric about its centroid (within tolerance()).
inline bool is_centrally_symmetric(const ConvexBody& K) {
  const double tol = tolerance();
  auto symmetric = [tol](const auto& verts, const auto& c) {
    for (const auto& v : verts) {
      const auto mirrored = (2.0 * c - v).eval();
      const bool found = std::any_of(verts.begin(), verts.end(),
                                     [&](const auto& w) { return (w - mirrored).norm() <= tol; });
      if (!found) return false;
    }
    return true;
  };
  switch (K.kind()) {
    case ConvexBody::Kind::Ball:
      return true;
    case ConvexBody::Kind::Polygon:
      return symmetric(K.polygon_vertices(), K.centroid2());
    case ConvexBody::Kind::Polytope3:
      return symmetric(K.polytope_vertices(), K.centroid3());
  }
  return false;
}

/// A x K for a nonsingular linear map (polygons and polytopes).
template <int D>
ConvexBody linear_image(const ConvexBody& K, const Eigen::Matrix<double, D, D>& A) {
  detail::require_dim<D>(K, "linear_image");
  if (std::abs(A.determinant()) <= 0.0) throw std::invalid_argument("linear_image: singular map");
  if (K.is_ball()) throw CapabilityError("linear_image: ellipsoids are not representable");
  if constexpr (D == 2) {
    std::vector<Vec2> v;
    for (const auto& p : K.polygon_vertices()) v.emplace_back(A * p);
    if (A.determinant() < 0.0) std::reverse(v.begin(), v.end());
    return ConvexBody::polygon(std::move(v));
  } else {
    std::vector<Vec3> v;
    for (const auto& p : K.polytope_vertices()) v.emplace_back(A * p);
    return ConvexBody::polytope3(std::move(v));
  }
}

}  // namespace parapack
