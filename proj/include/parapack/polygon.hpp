#pragma once

// Planar convex polygon helpers. Polygons are vertex lists in counterclockwise
// order; lists of one or two vertices stand for a point or a segment.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "parapack/vec.hpp"

namespace parapack::polygon {

inline double area(std::span<const Vec2> v) {
  if (v.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) twice += cross2(v[i], v[(i + 1) % v.size()]);
  return 0.5 * twice;
}

inline double perimeter(std::span<const Vec2> v) {
  if (v.size() < 2) return 0.0;
  if (v.size() == 2) return 2.0 * (v[1] - v[0]).norm();
  double p = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) p += (v[(i + 1) % v.size()] - v[i]).norm();
  return p;
}

inline Vec2 centroid(std::span<const Vec2> v) {
  if (v.size() < 3) {
    Vec2 c = Vec2::Zero();
    for (const auto& p : v) c += p;
    return c / static_cast<double>(std::max<std::size_t>(v.size(), 1));
  }
  Vec2 c = Vec2::Zero();
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& a = v[i];
    const Vec2& b = v[(i + 1) % v.size()];
    const double w = cross2(a, b);
    twice += w;
    c += w * (a + b);
  }
  return c / (3.0 * twice);
}

/// max - min of <v, dir> over the vertices.
inline double width(std::span<const Vec2> v, const Vec2& dir) {
  double lo = v.front().dot(dir);
  double hi = lo;
  for (const auto& p : v) {
    lo = std::min(lo, p.dot(dir));
    hi = std::max(hi, p.dot(dir));
  }
  return hi - lo;
}

inline std::vector<Vec2> scaled(std::span<const Vec2> v, double s) {
  std::vector<Vec2> out(v.begin(), v.end());
  for (auto& p : out) p *= s;
  return out;
}

inline std::vector<Vec2> negated(std::span<const Vec2> v) { return scaled(v, -1.0); }

namespace detail {

// 0 for angles in [0, pi), 1 for [pi, 2pi).
inline int half(const Vec2& e) { return (e.y() < 0.0 || (e.y() == 0.0 && e.x() < 0.0)) ? 1 : 0; }

inline std::size_t lowest(std::span<const Vec2> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i].y() < v[best].y() || (v[i].y() == v[best].y() && v[i].x() < v[best].x())) best = i;
  }
  return best;
}

// Edge vectors in angular order, starting at the lowest vertex.
inline std::vector<Vec2> edges_from_lowest(std::span<const Vec2> v) {
  std::vector<Vec2> e;
  if (v.size() < 2) return e;
  const std::size_t start = lowest(v);
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::size_t i = (start + k) % v.size();
    const std::size_t j = (i + 1) % v.size();
    e.push_back(v[j] - v[i]);
  }
  return e;
}

}  // namespace detail

/// Minkowski sum of two convex polygons (ccw, possibly degenerate) by merging
/// their edge sequences in angular order. Parallel edges are merged into one.
inline std::vector<Vec2> minkowski_sum(std::span<const Vec2> p, std::span<const Vec2> q) {
  if (p.empty()) return {q.begin(), q.end()};
  if (q.empty()) return {p.begin(), p.end()};
  const auto ep = detail::edges_from_lowest(p);
  const auto eq = detail::edges_from_lowest(q);
  auto before = [](const Vec2& a, const Vec2& b) {
    const int ha = detail::half(a);
    const int hb = detail::half(b);
    if (ha != hb) return ha < hb ? -1 : 1;
    const double c = cross2(a, b);
    const double scale = a.norm() * b.norm();
    if (std::abs(c) <= 1e-14 * scale) return 0;
    return c > 0.0 ? -1 : 1;
  };

  std::vector<Vec2> merged;
  merged.reserve(ep.size() + eq.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < ep.size() || j < eq.size()) {
    Vec2 e;
    if (i == ep.size()) {
      e = eq[j++];
    } else if (j == eq.size()) {
      e = ep[i++];
    } else {
      const int order = before(ep[i], eq[j]);
      if (order < 0) {
        e = ep[i++];
      } else if (order > 0) {
        e = eq[j++];
      } else {
        e = ep[i++] + eq[j++];
      }
    }
    if (!merged.empty() && before(merged.back(), e) == 0) {
      merged.back() += e;
    } else {
      merged.push_back(e);
    }
  }
  if (merged.size() > 1 && before(merged.back(), merged.front()) == 0) {
    merged.front() += merged.back();
    merged.pop_back();
  }

  std::vector<Vec2> out;
  out.reserve(merged.size());
  Vec2 cur = p[detail::lowest(p)] + q[detail::lowest(q)];
  for (const auto& e : merged) {
    out.push_back(cur);
    cur += e;
  }
  return out;
}

/// Outward unit normals and support offsets of a ccw polygon's edges:
/// the polygon is { x : <n_i, x> <= h_i }.
struct HalfPlanes {
  std::vector<Vec2> normals;
  std::vector<double> offsets;
};

inline HalfPlanes half_planes(std::span<const Vec2> v) {
  HalfPlanes hp;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 e = v[(i + 1) % v.size()] - v[i];
    const Vec2 n = Vec2(e.y(), -e.x()).normalized();
    hp.normals.push_back(n);
    hp.offsets.push_back(n.dot(v[i]));
  }
  return hp;
}

}  // namespace parapack::polygon
