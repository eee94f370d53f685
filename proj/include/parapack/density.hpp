#pragma once

// Parametric densities, sausage limits and the closed-form parameter bounds.

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "parapack/errors.hpp"
#include "parapack/geometry.hpp"
#include "parapack/hullvol.hpp"
#include "parapack/packing.hpp"
#include "parapack/polygon.hpp"
#include "parapack/tolerance.hpp"

namespace parapack {

/// Densest packing density of the unit disc (hexagonal lattice).
inline const double kDiscPackingDensity = std::numbers::pi / (2.0 * std::sqrt(3.0));
/// Densest lattice packing density of the unit ball (FCC).
inline const double kBallLatticeDensity = std::numbers::pi / std::sqrt(18.0);

struct DensityReport {
  double value = 0.0;
  std::size_t n = 0;
  double rho = 0.0;
  double volume = 0.0;
  std::optional<SteinerExpansion> expansion;
  std::string config_label;
};

/// delta_rho(K, C) = #C vol(K) / vol(conv C + rho K). Throws InvalidPacking
/// if C + K overlaps.
template <int D>
DensityReport parametric_density(const ConvexBody& K, const PackingSet<D>& C, double rho) {
  detail::require_supported<D>(K);
  detail::require_positive_rho(rho);
  require_packing(K, C);
  auto mv = minkowski_volume(C, K, rho);
  DensityReport r;
  r.n = C.size();
  r.rho = rho;
  r.volume = mv.volume;
  r.value = static_cast<double>(C.size()) * K.volume() / mv.volume;
  r.expansion = std::move(mv.expansion);
  r.config_label = C.label;
  return r;
}

namespace detail {

// min over u of vol_{d-1}(K | u^perp) / ||u||_K; closed form for balls.
inline double sausage_ratio(const ConvexBody& K) {
  if (K.is_ball()) return kappa(K.dim() - 1);
  if (K.dim() == 2) return optimal_sausage_direction<2>(K).ratio;
  if (K.dim() == 3) return optimal_sausage_direction<3>(K).ratio;
  throw CapabilityError("sausage ratio: unsupported body " + K.describe());
}

}  // namespace detail

/// vol(conv S_n + rho K) for the optimal sausage, in closed form:
/// 2 (n - 1) ratio rho^(d-1) + vol(K) rho^d.
inline double sausage_volume(const ConvexBody& K, long long n, double rho) {
  detail::require_positive_rho(rho);
  if (n < 1) throw std::invalid_argument("sausage_volume: n must be >= 1");
  const int d = K.dim();
  return 2.0 * static_cast<double>(n - 1) * detail::sausage_ratio(K) * std::pow(rho, d - 1) +
         K.volume() * std::pow(rho, d);
}

/// lim_n delta_rho(K, S_n(K, u_K)) = rho^(1-d) vol(K) ||u_K||_K / (2 vol_{d-1}(K | u_K^perp)).
inline double sausage_limit_density(const ConvexBody& K, double rho) {
  detail::require_positive_rho(rho);
  return std::pow(rho, 1 - K.dim()) * K.volume() / (2.0 * detail::sausage_ratio(K));
}

struct SausageConvergence {
  double finite = 0.0;
  double limit = 0.0;
  double gap = 0.0;
};

inline SausageConvergence sausage_density_convergence(const ConvexBody& K, double rho, long long n) {
  SausageConvergence c;
  c.finite = static_cast<double>(n) * K.volume() / sausage_volume(K, n, rho);
  c.limit = sausage_limit_density(K, rho);
  c.gap = c.finite - c.limit;
  return c;
}

/// rho_s(K) = rho_c(K) = delta_1^s(K) / delta(K) for a centrally symmetric
/// planar K. delta(K) is an input; for the disc it defaults to pi / (2 sqrt 3).
inline double planar_parameters(const ConvexBody& K, std::optional<double> delta_K = std::nullopt) {
  if (K.dim() != 2) throw std::invalid_argument("planar_parameters: body must be planar");
  if (!is_centrally_symmetric(K)) throw std::invalid_argument("planar_parameters: body must satisfy K = -K");
  if (!delta_K) {
    if (!K.is_ball()) throw std::invalid_argument("planar_parameters: packing density required for " + K.describe());
    delta_K = kDiscPackingDensity;
  }
  if (!(*delta_K > 0.0) || *delta_K > 1.0) throw std::invalid_argument("planar_parameters: density must be in (0, 1]");
  const double value = sausage_limit_density(K, 1.0) / *delta_K;
  if (value < 0.75 - tolerance() || value > 1.0 + tolerance()) {
    throw InconsistencyError("planar_parameters: delta_1^s/delta = " + std::to_string(value) +
                             " lies outside [3/4, 1]; the supplied packing density is wrong");
  }
  return value;
}

/// Upper bound delta(K) n / (n - 1 + delta(K) rho^2) on delta_rho(K, n) for a
/// symmetric planar K and rho >= rho_s(K).
inline double planar_upper_bound(double delta_K, long long n, double rho) {
  if (n < 1) throw std::invalid_argument("planar_upper_bound: n must be >= 1");
  return delta_K * static_cast<double>(n) / (static_cast<double>(n - 1) + delta_K * rho * rho);
}

// ---------------------------------------------------------------------------
// Bounds
// ---------------------------------------------------------------------------

enum class BodyClass { Ball, Symmetric, General };

inline std::string to_string(BodyClass c) {
  switch (c) {
    case BodyClass::Ball: return "ball";
    case BodyClass::Symmetric: return "symmetric";
    case BodyClass::General: return "general";
  }
  return "?";
}

struct BoundEntry {
  std::string name;
  double value = 0.0;
  std::string condition;
  std::string locator;
};

struct BoundReport {
  int dim = 0;
  BodyClass body = BodyClass::General;
  double epsilon = 0.0;
  /// The sausage conjecture (rho = 1, balls) is settled in dimensions >= 42.
  bool sausage_conjecture_proven = false;
  std::vector<BoundEntry> entries;

  [[nodiscard]] const BoundEntry* find(const std::string& name) const {
    for (const auto& e : entries) {
      if (e.name == name) return &e;
    }
    return nullptr;
  }
};

/// Evaluates the known bounds on rho_s, rho_c, rho_c^* and the related
/// density estimates in dimension d. epsilon enters the asymptotic upper
/// bound on delta(B^d).
inline BoundReport bound_report(int d, BodyClass body, double epsilon = 0.01) {
  if (d < 2) throw std::invalid_argument("bound_report: d must be >= 2");
  if (!(epsilon > 0.0) || epsilon >= std::sqrt(2.0) - 1.0) {
    throw std::invalid_argument("bound_report: epsilon must lie in (0, sqrt 2 - 1)");
  }
  const double dd = d;
  const bool symmetric = body != BodyClass::General;
  const double pi = std::numbers::pi;
  BoundReport r;
  r.dim = d;
  r.body = body;
  r.epsilon = epsilon;
  r.sausage_conjecture_proven = d >= 42;
  auto add = [&r](std::string name, double value, std::string condition, std::string locator) {
    r.entries.push_back({std::move(name), value, std::move(condition), std::move(locator)});
  };

  add("rho_s_lower", 1.0 / (32.0 * dd), "every convex body; sausages are optimal for rho < 1/(32d)",
      "small-parameter sausage theorem");
  add("rho_c_upper", symmetric ? 2.0 : dd + 1.0,
      symmetric ? "K = -K, since K - K = 2K" : "general K, since K - K lies in (d+1)K about the centroid",
      "large-body theorem with K - K in rho-bar K");
  add("lattice_rho_c_upper",
      body == BodyClass::Ball ? std::sqrt(21.0) / 2.0 : (symmetric ? 3.0 : 1.5 * (dd + 1.0)),
      body == BodyClass::Ball ? "K = B^d" : (symmetric ? "K = -K" : "general K"),
      "Rogers lattice refinement");
  add("ball_rho_s_threshold", std::sqrt(2.0),
      "K = B^d: for every rho < sqrt 2 sausages are optimal once d >= d_rho", "liminf of rho_s(B^d)");
  add("sausage_conjecture_dimension", 42.0, d >= 42 ? "d >= 42: proven" : "d < 42: open",
      "sausage conjecture threshold d_1 <= 42");
  const double kd = kappa(d);
  const double kd1 = kappa(d - 1);
  add("ball_volume_ratio", kd / kd1, "kappa_d / kappa_{d-1}", "unit ball volumes");
  add("ball_volume_ratio_lower", std::sqrt(2.0 * pi / (dd + 1.0)), "strict lower estimate of kappa_d / kappa_{d-1}",
      "unit ball volume estimates");
  add("ball_volume_ratio_upper", std::sqrt(2.0 * pi / dd), "strict upper estimate of kappa_d / kappa_{d-1}",
      "unit ball volume estimates");
  add("sausage_factor_lower", 1.0 / dd,
      "strict lower estimate of ||u_K|| vol(K) / (2 vol_{d-1}(K|u_K^perp)), which is at most 1",
      "sausage factor estimates");
  add("ball_density_upper_asymptotic", std::sqrt(pi / dd) * std::pow(std::sqrt(2.0) - epsilon, 1.0 - dd),
      "delta(B^d) <= sqrt(pi/d) (sqrt 2 - eps)^(1-d) for d >= d_eps", "consequence of the sqrt 2 threshold");
  add("ball_density_lower_from_rho_c", kd / (2.0 * kd1) * std::pow(2.0, 1.0 - dd),
      "delta(B^d) >= kappa_d / (2 kappa_{d-1}) rho_c^(1-d) with rho_c <= 2", "sausage sandwich for B^d");
  if (symmetric) {
    add("symmetric_density_lower", std::pow(2.0, 1.0 - dd) / dd, "delta(K) > 2^(1-d) / d for K = -K",
        "sausage sandwich with rho_c <= 2");
  }
  add("schmidt_lattice_density_lower", dd * std::pow(2.0, -dd),
      "delta^*(K) >= c d 2^(-d); c is an unspecified absolute constant (value shown for c = 1)",
      "Schmidt lattice bound");
  return r;
}

/// Smallest rho-bar with K - K contained in rho-bar (K - c), c the centroid
/// of K. Equals 2 for symmetric bodies and d + 1 for simplices.
inline double difference_body_ratio(const ConvexBody& K) {
  if (K.is_ball() || is_centrally_symmetric(K)) return 2.0;
  double best = 0.0;
  if (K.dim() == 2) {
    const auto& v = K.polygon_vertices();
    const Vec2 c = K.centroid2();
    const auto hp = polygon::half_planes(v);
    for (const auto& a : v) {
      for (const auto& b : v) {
        const Vec2 x = a - b;
        for (std::size_t f = 0; f < hp.normals.size(); ++f) {
          best = std::max(best, hp.normals[f].dot(x) / (hp.offsets[f] - hp.normals[f].dot(c)));
        }
      }
    }
  } else if (K.dim() == 3) {
    const auto& v = K.polytope_vertices();
    const Vec3 c = K.centroid3();
    const auto& h = K.polytope_hull();
    for (const auto& a : v) {
      for (const auto& b : v) {
        const Vec3 x = a - b;
        for (const auto& f : h.facets) best = std::max(best, f.normal.dot(x) / (f.offset - f.normal.dot(c)));
      }
    }
  } else {
    throw CapabilityError("difference_body_ratio: dimension must be 2 or 3");
  }
  return best;
}

}  // namespace parapack
