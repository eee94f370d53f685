#pragma once

// Best-known finite packings, sausage/cluster crossovers and catastrophe scans.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "parapack/density.hpp"
#include "parapack/geometry.hpp"
#include "parapack/hullvol.hpp"
#include "parapack/packing.hpp"

namespace parapack {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for the refinement of one scan row.
inline std::uint64_t row_seed(std::uint64_t base, long long n, double rho) {
  return splitmix64(splitmix64(splitmix64(base) ^ static_cast<std::uint64_t>(n)) ^ std::bit_cast<std::uint64_t>(rho));
}

inline constexpr std::uint64_t kDefaultSeed = 20240601;

struct RefineOptions {
  int steps = 2000;
  double start = 0.1;
  double end = 1e-4;
};

namespace detail {

template <int D>
double config_volume(const PackingSet<D>& C, const ConvexBody& K, double rho) {
  if constexpr (D == 3) {
    return ball3_volume(C.points, rho);
  } else {
    return minkowski_volume(C, K, rho).volume;
  }
}

// The moved point i must keep gauge distance >= 2 to every other point.
template <int D>
bool placement_ok(const ConvexBody& K, const PackingSet<D>& C, std::size_t i, const Vec<D>& p) {
  for (std::size_t j = 0; j < C.size(); ++j) {
    if (j != i && gauge_norm<D>(K, (p - C.points[j]).eval()) < 2.0) return false;
  }
  return true;
}

// Rescales a lattice cluster so that it packs K: every pairwise gauge
// distance becomes at least 2.
template <int D>
PackingSet<D> fit_to_body(PackingSet<D> C, const ConvexBody& K) {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < C.size(); ++i) {
    for (std::size_t j = i + 1; j < C.size(); ++j) lo = std::min(lo, gauge_norm<D>(K, (C.points[i] - C.points[j]).eval()));
  }
  if (lo < 2.0) {
    for (auto& p : C.points) p *= 2.0 / lo;
  }
  return C;
}

// Square-grid cluster with spacing 2 in spiral order.
inline PackingSet<2> grid_cluster(int n) {
  struct Site {
    long key;
    double angle;
    Vec2 p;
  };
  const int R = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))) + 2;
  std::vector<Site> sites;
  for (int i = -R; i <= R; ++i) {
    for (int j = -R; j <= R; ++j) {
      double a = std::atan2(static_cast<double>(j), static_cast<double>(i));
      if (a < 0.0) a += 2.0 * std::numbers::pi;
      sites.push_back({static_cast<long>(i) * i + static_cast<long>(j) * j, (i == 0 && j == 0) ? 0.0 : a,
                       Vec2(2.0 * i, 2.0 * j)});
    }
  }
  std::sort(sites.begin(), sites.end(),
            [](const Site& a, const Site& b) { return a.key != b.key ? a.key < b.key : a.angle < b.angle; });
  PackingSet<2> C;
  C.label = "grid:" + std::to_string(n);
  for (int k = 0; k < n; ++k) C.points.push_back(sites[static_cast<std::size_t>(k)].p);
  return C;
}

}  // namespace detail

/// Random single-point moves with geometrically shrinking magnitude; a move
/// is kept if the set still packs K and the volume does not grow.
template <int D>
PackingSet<D> refine_config(const ConvexBody& K, PackingSet<D> C, double rho, std::uint64_t seed,
                            const RefineOptions& opt = {}) {
  if (C.size() < 3 || opt.steps <= 0) return C;
  std::mt19937_64 rng(seed);
  double current = detail::config_volume(C, K, rho);
  const double decay = std::pow(opt.end / opt.start, 1.0 / std::max(1, opt.steps - 1));
  double magnitude = opt.start;
  bool moved = false;
  for (int step = 0; step < opt.steps; ++step, magnitude *= decay) {
    const auto i = static_cast<std::size_t>(rng() % C.size());
    Vec<D> delta;
    for (int k = 0; k < D; ++k) delta[k] = 2.0 * detail::uniform01(rng) - 1.0;
    const Vec<D> old = C.points[i];
    const Vec<D> cand = old + magnitude * delta;
    if (!detail::placement_ok(K, C, i, cand)) continue;
    C.points[i] = cand;
    const double v = detail::config_volume(C, K, rho);
    if (v <= current) {
      current = v;
      moved = true;
    } else {
      C.points[i] = old;
    }
  }
  if (moved) C.label += "+refined";
  return C;
}

/// Raw cluster family for (K, n, rho): hexagonal or square-grid clusters in
/// the plane (rescaled to pack K), FCC clusters for the ball in space.
template <int D>
PackingSet<D> cluster_family(const ConvexBody& K, int n, double rho) {
  detail::require_supported<D>(K);
  if constexpr (D == 2) {
    auto hex = hex_cluster(n);
    if (K.is_ball()) return hex;
    hex = detail::fit_to_body(std::move(hex), K);
    auto grid = detail::fit_to_body(detail::grid_cluster(n), K);
    return detail::config_volume(grid, K, rho) < detail::config_volume(hex, K, rho) ? grid : hex;
  } else {
    return fcc_cluster(n, FccShape::Auto, rho);
  }
}

template <int D>
struct BestConfig {
  PackingSet<D> set;
  DensityReport report;
  std::string family;  ///< "sausage" or "cluster"
};

/// Densest configuration found among the optimal sausage and the refined
/// cluster family. A certified lower bound on delta_rho(K, n), not an optimum.
template <int D>
BestConfig<D> best_config(const ConvexBody& K, int n, double rho, std::uint64_t seed = kDefaultSeed,
                          const RefineOptions& opt = {}) {
  detail::require_supported<D>(K);
  detail::require_positive_rho(rho);
  if (n < 1) throw std::invalid_argument("best_config: n must be >= 1");
  auto saus = optimal_sausage<D>(K, n);
  auto s_report = parametric_density(K, saus, rho);
  auto cluster = refine_config(K, cluster_family<D>(K, n, rho), rho, seed, opt);
  auto c_report = parametric_density(K, cluster, rho);
  if (c_report.value > s_report.value) return {std::move(cluster), std::move(c_report), "cluster"};
  return {std::move(saus), std::move(s_report), "sausage"};
}

enum class Winner { Sausage, Cluster, Tie };

inline std::string to_string(Winner w) {
  switch (w) {
    case Winner::Sausage: return "sausage";
    case Winner::Cluster: return "cluster";
    case Winner::Tie: return "tie";
  }
  return "?";
}

inline constexpr double kTieTolerance = 1e-9;

inline Winner decide(double sausage_density, double cluster_density) {
  if (std::abs(cluster_density - sausage_density) <= kTieTolerance) return Winner::Tie;
  return cluster_density > sausage_density ? Winner::Cluster : Winner::Sausage;
}

struct ScanRow {
  long long n = 0;
  double rho = 0.0;
  double sausage_density = 0.0;
  double best_cluster_density = 0.0;
  Winner winner = Winner::Tie;
  std::string cluster_label;
};

struct ScanOptions {
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;  ///< 0 = hardware concurrency
  bool refine = true;
  RefineOptions refine_options{};
};

/// One row per n in [n_min, n_max]: optimal sausage against the best cluster
/// of the implemented families (disc for d = 2, ball for d = 3). Rows do not
/// depend on the thread count.
inline std::vector<ScanRow> catastrophe_scan(int d, double rho, int n_min, int n_max, const ScanOptions& opt = {}) {
  if (d != 2 && d != 3) throw CapabilityError("catastrophe_scan: dimension must be 2 or 3");
  if (n_min < 2 || n_max < n_min) throw std::invalid_argument("catastrophe_scan: need 2 <= n_min <= n_max");
  detail::require_positive_rho(rho);
  const ConvexBody K = ConvexBody::ball(d);
  std::vector<ScanRow> rows(static_cast<std::size_t>(n_max - n_min + 1));
  auto run_row = [&](std::size_t idx) {
    const int n = n_min + static_cast<int>(idx);
    ScanRow r;
    r.n = n;
    r.rho = rho;
    r.sausage_density = static_cast<double>(n) * K.volume() / sausage_volume(K, n, rho);
    RefineOptions ro = opt.refine_options;
    if (!opt.refine) ro.steps = 0;
    const std::uint64_t s = row_seed(opt.seed, n, rho);
    if (d == 2) {
      auto C = refine_config(K, cluster_family<2>(K, n, rho), rho, s, ro);
      r.best_cluster_density = parametric_density(K, C, rho).value;
      r.cluster_label = C.label;
    } else {
      auto C = refine_config(K, cluster_family<3>(K, n, rho), rho, s, ro);
      r.best_cluster_density = parametric_density(K, C, rho).value;
      r.cluster_label = C.label;
    }
    r.winner = decide(r.sausage_density, r.best_cluster_density);
    rows[idx] = std::move(r);
  };
  unsigned threads = opt.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opt.threads;
  threads = std::min<unsigned>(threads, static_cast<unsigned>(rows.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) run_row(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) run_row(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  return rows;
}

/// Smallest n whose row is a cluster win (the empirical magic number).
inline std::optional<long long> first_cluster_win(const std::vector<ScanRow>& rows) {
  for (const auto& r : rows) {
    if (r.winner == Winner::Cluster) return r.n;
  }
  return std::nullopt;
}

/// rho at which the optimal sausage and the cluster that is best at rho = 2
/// have equal density, found by bisection on [0.05, 2]. Empty if the cluster
/// does not win at rho = 2 or already wins at rho = 0.05.
template <int D>
std::optional<double> crossover_parameter(const ConvexBody& K, int n) {
  detail::require_supported<D>(K);
  if (n <= 2) return std::nullopt;
  const auto saus = optimal_sausage<D>(K, n);
  const auto cluster = cluster_family<D>(K, n, 2.0);
  require_packing(K, cluster);
  auto gap = [&](double rho) {
    return detail::config_volume(saus, K, rho) - detail::config_volume(cluster, K, rho);
  };
  double lo = 0.05;
  double hi = 2.0;
  if (!(gap(hi) > 0.0) || !(gap(lo) < 0.0)) return std::nullopt;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (gap(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

struct DimPoint {
  double rho = 0.0;
  int hull_dim = 0;
  std::string family;
};

/// Affine dimension of the best configuration found at each rho.
inline std::vector<DimPoint> empirical_dim_profile(const ConvexBody& K, int n, const std::vector<double>& rhos,
                                                   std::uint64_t seed = kDefaultSeed) {
  if (K.dim() != 3 || !K.is_ball()) throw CapabilityError("empirical_dim_profile: requires the unit ball B^3");
  std::vector<DimPoint> out;
  for (double rho : rhos) {
    auto best = best_config<3>(K, n, rho, row_seed(seed, n, rho));
    out.push_back({rho, hull3d(best.set.points).hull_dim, best.family});
  }
  return out;
}

}  // namespace parapack
