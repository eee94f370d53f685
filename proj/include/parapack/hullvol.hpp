#pragma once

// Volumes of conv C + rho K.
//
// Exact routes: the generalized Steiner polynomial of the hull with the unit
// disc / unit ball, and the edge-merge Minkowski sum for polygonal bodies.
// Independent route: a hit-or-miss Monte Carlo estimate whose membership test
// never touches the Steiner coefficients.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "parapack/errors.hpp"
#include "parapack/geometry.hpp"
#include "parapack/hull.hpp"
#include "parapack/packing_set.hpp"
#include "parapack/polygon.hpp"

namespace parapack {

/// vol(conv C + rho K) = sum_i coeffs[i] rho^i. coeffs[i] is binom(d, i)
/// times the i-th mixed volume V_i(conv C; K).
struct SteinerExpansion {
  int dim = 0;
  int hull_dim = 0;
  std::vector<double> coeffs;

  [[nodiscard]] double evaluate(double rho) const {
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * rho + *it;
    return v;
  }
};

/// Steiner polynomial of a planar hull with the unit disc: (A, P, pi).
inline SteinerExpansion steiner_disc(const Hull2& h) {
  SteinerExpansion s{2, h.hull_dim, {0.0, 0.0, std::numbers::pi}};
  if (h.hull_dim == 2) {
    s.coeffs[0] = h.area();
    s.coeffs[1] = h.perimeter();
  } else if (h.hull_dim == 1) {
    s.coeffs[1] = 2.0 * h.length();
  }
  return s;
}

/// Steiner polynomial of a spatial hull with the unit ball:
/// (V, S, M, 4 pi / 3) with M = sum_e length_e * exterior_angle_e / 2.
inline SteinerExpansion steiner_ball3(const Hull3& h) {
  const double k3 = 4.0 * std::numbers::pi / 3.0;
  SteinerExpansion s{3, h.hull_dim, {0.0, 0.0, 0.0, k3}};
  switch (h.hull_dim) {
    case 3: {
      double m = 0.0;
      for (const auto& e : h.edges) m += 0.5 * e.length * e.exterior_angle;
      s.coeffs[0] = h.volume;
      s.coeffs[1] = h.area;
      s.coeffs[2] = m;
      break;
    }
    case 2:
      s.coeffs[1] = 2.0 * h.area;
      s.coeffs[2] = 0.5 * std::numbers::pi * h.perimeter;
      break;
    case 1:
      s.coeffs[2] = std::numbers::pi * h.length;
      break;
    default:
      break;
  }
  return s;
}

struct MinkowskiVolume {
  double volume = 0.0;
  std::optional<SteinerExpansion> expansion;  ///< absent for polygonal bodies
};

namespace detail {

inline void require_positive_rho(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("rho must be positive and finite");
}

[[noreturn]] inline void unsupported_pair(int dim, const ConvexBody& K) {
  throw CapabilityError("unsupported (dimension, body) pair (" + std::to_string(dim) + ", " +
                        K.describe() + "); supported: (2, ball), (2, polygon), (3, ball)");
}

template <int D>
void require_supported(const ConvexBody& K) {
  if (K.dim() != D) {
    throw std::invalid_argument("body dimension " + std::to_string(K.dim()) +
                                " does not match packing dimension " + std::to_string(D));
  }
  if constexpr (D == 3) {
    if (!K.is_ball()) unsupported_pair(3, K);
  } else if constexpr (D != 2) {
    unsupported_pair(D, K);
  }
}

}  // namespace detail

/// Exact vol(conv C + rho K) for the pairs (2, ball), (2, polygon), (3, ball).
template <int D>
MinkowskiVolume minkowski_volume(const PackingSet<D>& C, const ConvexBody& K, double rho) {
  detail::require_supported<D>(K);
  detail::require_positive_rho(rho);
  if (C.empty()) throw std::invalid_argument("minkowski_volume: empty packing set");
  if constexpr (D == 2) {
    const Hull2 h = hull2d(C.points);
    if (K.is_ball()) {
      auto s = steiner_disc(h);
      return {s.evaluate(rho), std::move(s)};
    }
    const auto sum = polygon::minkowski_sum(h.vertices, polygon::scaled(K.polygon_vertices(), rho));
    return {polygon::area(sum), std::nullopt};
  } else {
    auto s = steiner_ball3(hull3d(C.points));
    return {s.evaluate(rho), std::move(s)};
  }
}

/// vol(conv P + rho B^3) for a raw point list; the fast path skips the edge
/// bookkeeping of hull3d when P is full-dimensional.
inline double ball3_volume(std::span<const Vec3> points, double rho) {
  const double k3 = 4.0 * std::numbers::pi / 3.0;
  if (points.size() >= 4) {
    std::array<int, 4> s{};
    if (detail::find_simplex(points, s)) {
      IncrementalHull3 h(points, s);
      for (int i = 0; i < static_cast<int>(points.size()); ++i) {
        if (i != s[0] && i != s[1] && i != s[2] && i != s[3]) h.insert(i);
      }
      const auto m = h.measures();
      return ((k3 * rho + m.curvature) * rho + m.area) * rho + m.volume;
    }
  }
  return steiner_ball3(hull3d(points)).evaluate(rho);
}

// ---------------------------------------------------------------------------
// Monte Carlo oracle
// ---------------------------------------------------------------------------

struct McEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  double box_volume = 0.0;
};

namespace detail {

inline double dist2_point_segment(const auto& p, const auto& a, const auto& b) {
  const auto ab = (b - a).eval();
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).squaredNorm();
}

// Closest point on triangle abc to p (Ericson, Real-Time Collision Detection).
inline double dist2_point_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return ap.squaredNorm();
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return bp.squaredNorm();
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return (p - (a + (d1 / (d1 - d3)) * ab)).squaredNorm();
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return cp.squaredNorm();
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return (p - (a + (d2 / (d2 - d6)) * ac)).squaredNorm();
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    return (p - (b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b))).squaredNorm();
  }
  const double denom = 1.0 / (va + vb + vc);
  return (p - (a + ab * (vb * denom) + ac * (vc * denom))).squaredNorm();
}

// Squared distance from p to a planar convex region (0 inside).
inline double dist2_point_polygon(const Vec2& p, std::span<const Vec2> v) {
  if (v.size() == 1) return (p - v[0]).squaredNorm();
  if (v.size() == 2) return dist2_point_segment(p, v[0], v[1]);
  bool inside = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (cross2(v[(i + 1) % v.size()] - v[i], p - v[i]) < 0.0) {
      inside = false;
      break;
    }
  }
  if (inside) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) best = std::min(best, dist2_point_segment(p, v[i], v[(i + 1) % v.size()]));
  return best;
}

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Runs `count_chunk(seed, n)` over fixed-size chunks with seeds seed + k.
/// The result does not depend on the number of worker threads.
template <typename CountChunk>
std::uint64_t run_chunks(std::uint64_t samples, std::uint64_t seed, unsigned threads, CountChunk&& count_chunk) {
  constexpr std::uint64_t kChunk = 1u << 16;
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> hits(chunks, 0);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t k = next++; k < chunks; k = next++) {
      const std::uint64_t n = std::min(kChunk, samples - k * kChunk);
      hits[k] = count_chunk(seed + k, n);
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  return total;
}

}  // namespace detail

/// Hit-or-miss estimate of vol(conv C + rho K) over the tight axis-aligned
/// bounding box. Deterministic for a fixed seed, independent of `threads`
/// (0 = hardware concurrency).
template <int D>
McEstimate mc_volume(const PackingSet<D>& C, const ConvexBody& K, double rho, std::uint64_t samples,
                     std::uint64_t seed, unsigned threads = 0) {
  detail::require_supported<D>(K);
  detail::require_positive_rho(rho);
  if (samples < 10000) throw std::invalid_argument("mc_volume: need at least 1e4 samples");
  if (C.empty()) throw std::invalid_argument("mc_volume: empty packing set");

  Vec<D> lo = C.points.front();
  Vec<D> hi = lo;
  for (const auto& p : C.points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  if (K.is_ball()) {
    lo.array() -= rho;
    hi.array() += rho;
  } else if constexpr (D == 2) {
    Vec2 klo = K.polygon_vertices().front();
    Vec2 khi = klo;
    for (const auto& v : K.polygon_vertices()) {
      klo = klo.cwiseMin(v);
      khi = khi.cwiseMax(v);
    }
    lo += rho * klo;
    hi += rho * khi;
  }
  const Vec<D> extent = hi - lo;
  const double box = extent.prod();
  const double r2 = rho * rho;

  std::uint64_t hits = 0;
  if constexpr (D == 2) {
    const Hull2 h = hull2d(C.points);
    if (K.is_ball()) {
      hits = detail::run_chunks(samples, seed, threads, [&](std::uint64_t s, std::uint64_t n) {
        std::mt19937_64 rng(s);
        std::uint64_t c = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
          const double x = lo.x() + extent.x() * detail::uniform01(rng);
          const double y = lo.y() + extent.y() * detail::uniform01(rng);
          if (detail::dist2_point_polygon(Vec2(x, y), h.vertices) <= r2) ++c;
        }
        return c;
      });
    } else {
      // x is in P + rho K  iff  (x - rho K) meets P: separating-axis test over
      // the edge normals of both polygons.
      std::vector<Vec2> axes;
      const auto& kv = K.polygon_vertices();
      auto add_normals = [&axes](std::span<const Vec2> v) {
        if (v.size() < 2) return;
        for (std::size_t i = 0; i < v.size(); ++i) {
          const Vec2 e = v[(i + 1) % v.size()] - v[i];
          if (e.squaredNorm() > 0.0) axes.emplace_back(e.y(), -e.x());
        }
      };
      add_normals(h.vertices);
      add_normals(kv);
      std::vector<double> pmin, pmax, kmin, kmax;
      for (const auto& a : axes) {
        double p0 = h.vertices.front().dot(a), p1 = p0;
        for (const auto& v : h.vertices) {
          p0 = std::min(p0, v.dot(a));
          p1 = std::max(p1, v.dot(a));
        }
        double k0 = kv.front().dot(a), k1 = k0;
        for (const auto& v : kv) {
          k0 = std::min(k0, v.dot(a));
          k1 = std::max(k1, v.dot(a));
        }
        pmin.push_back(p0);
        pmax.push_back(p1);
        kmin.push_back(k0);
        kmax.push_back(k1);
      }
      hits = detail::run_chunks(samples, seed, threads, [&](std::uint64_t s, std::uint64_t n) {
        std::mt19937_64 rng(s);
        std::uint64_t c = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
          const Vec2 x(lo.x() + extent.x() * detail::uniform01(rng), lo.y() + extent.y() * detail::uniform01(rng));
          bool separated = false;
          for (std::size_t k = 0; k < axes.size() && !separated; ++k) {
            const double t = x.dot(axes[k]);
            // (x - rho K) projects to [t - rho kmax, t - rho kmin].
            separated = (t - rho * kmax[k] > pmax[k]) || (t - rho * kmin[k] < pmin[k]);
          }
          if (!separated) ++c;
        }
        return c;
      });
    }
  } else {
    const Hull3 h = hull3d(C.points);
    auto sample = [&](std::mt19937_64& rng) {
      return Vec3(lo.x() + extent.x() * detail::uniform01(rng), lo.y() + extent.y() * detail::uniform01(rng),
                  lo.z() + extent.z() * detail::uniform01(rng));
    };
    auto P = [&h](int i) -> const Vec3& { return h.points[static_cast<std::size_t>(i)]; };
    if (h.hull_dim == 3) {
      hits = detail::run_chunks(samples, seed, threads, [&](std::uint64_t s, std::uint64_t n) {
        std::mt19937_64 rng(s);
        std::uint64_t c = 0;
        std::vector<double> sd(h.facets.size());
        for (std::uint64_t i = 0; i < n; ++i) {
          const Vec3 x = sample(rng);
          double worst = -std::numeric_limits<double>::infinity();
          for (std::size_t f = 0; f < h.facets.size(); ++f) {
            sd[f] = h.facets[f].normal.dot(x) - h.facets[f].offset;
            worst = std::max(worst, sd[f]);
          }
          if (worst <= 0.0) {
            ++c;
            continue;
          }
          if (worst > rho) continue;
          for (std::size_t f = 0; f < h.facets.size(); ++f) {
            if (sd[f] <= 0.0) continue;
            const auto& v = h.facets[f].v;
            if (detail::dist2_point_triangle(x, P(v[0]), P(v[1]), P(v[2])) <= r2) {
              ++c;
              break;
            }
          }
        }
        return c;
      });
    } else if (h.hull_dim == 2) {
      const Vec3 origin = P(h.vertices.front());
      const Vec3 nrm = h.plane_normal;
      const Vec3 e0 = (P(h.vertices[1]) - origin).normalized();
      const Vec3 e1 = nrm.cross(e0);
      std::vector<Vec2> flat;
      for (int v : h.vertices) flat.emplace_back((P(v) - origin).dot(e0), (P(v) - origin).dot(e1));
      if (polygon::area(flat) < 0.0) std::reverse(flat.begin(), flat.end());
      hits = detail::run_chunks(samples, seed, threads, [&](std::uint64_t s, std::uint64_t n) {
        std::mt19937_64 rng(s);
        std::uint64_t c = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
          const Vec3 q = sample(rng) - origin;
          const double off = q.dot(nrm);
          if (off * off > r2) continue;
          if (detail::dist2_point_polygon(Vec2(q.dot(e0), q.dot(e1)), flat) + off * off <= r2) ++c;
        }
        return c;
      });
    } else {
      const Vec3 a = P(h.vertices.front());
      const Vec3 b = P(h.vertices.back());
      hits = detail::run_chunks(samples, seed, threads, [&](std::uint64_t s, std::uint64_t n) {
        std::mt19937_64 rng(s);
        std::uint64_t c = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
          if (detail::dist2_point_segment(sample(rng), a, b) <= r2) ++c;
        }
        return c;
      });
    }
  }

  McEstimate est;
  est.samples = samples;
  est.hits = hits;
  est.box_volume = box;
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  est.estimate = box * p;
  est.standard_error = box * std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  return est;
}

}  // namespace parapack
