// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "parapack/parapack.hpp"

using namespace parapack;

namespace {

const double kPi = std::numbers::pi;
const double kS3 = std::sqrt(3.0);

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Runs one criterion, enforcing its runtime budget.
bool criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double t = seconds_since(t0);
  if (t > budget_s) {
    o.pass = false;
    o.detail += fmt("; runtime %.1fs exceeds %.0fs", t, budget_s);
  }
  std::printf("%s [%d] %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), t, o.detail.c_str());
  std::fflush(stdout);
  return o.pass;
}

ConvexBody square() { return ConvexBody::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}); }

ConvexBody hexagon() {
  std::vector<Vec2> v;
  const double r = 2.0 / kS3;
  for (int k = 0; k < 6; ++k) v.emplace_back(r * std::cos(kPi * k / 3.0), r * std::sin(kPi * k / 3.0));
  return ConvexBody::polygon(std::move(v));
}

// Convex hull of random points as a polygon body.
ConvexBody random_polygon(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  while (true) {
    std::vector<Vec2> pts;
    for (int i = 0; i < 8; ++i) pts.emplace_back(g(rng), 0.6 * g(rng));
    const auto h = hull2d(pts);
    if (h.hull_dim == 2 && h.vertices.size() >= 3 && h.area() > 0.3) return ConvexBody::polygon(h.vertices);
  }
}

template <int D>
PackingSet<D> random_points(std::mt19937_64& rng, int n, double spread) {
  std::uniform_real_distribution<double> u(-spread, spread);
  PackingSet<D> C;
  const int kind = static_cast<int>(rng() % 4);  // 0: generic, 1: collinear, 2: coplanar (3D)
  const Vec<D> dir = Vec<D>::NullaryExpr([&](Eigen::Index) { return u(rng); });
  const Vec<D> dir2 = Vec<D>::NullaryExpr([&](Eigen::Index) { return u(rng); });
  for (int i = 0; i < n; ++i) {
    if (kind == 1) {
      C.points.push_back(u(rng) * dir);
    } else if (kind == 2 && D == 3) {
      C.points.push_back(u(rng) * dir + u(rng) * dir2);
    } else {
      C.points.push_back(Vec<D>::NullaryExpr([&](Eigen::Index) { return u(rng); }));
    }
  }
  return C;
}

// Random sequential disc packing inside a disc of radius R.
PackingSet<2> random_disc_packing(std::mt19937_64& rng, int n, double R) {
  std::uniform_real_distribution<double> u(-R, R);
  PackingSet<2> C;
  int tries = 0;
  while (static_cast<int>(C.size()) < n && tries < 200000) {
    ++tries;
    const Vec2 p(u(rng), u(rng));
    if (p.norm() > R) continue;
    bool ok = true;
    for (const auto& q : C.points) ok = ok && (p - q).norm() >= 2.0;
    if (ok) C.points.push_back(p);
  }
  C.label = "random";
  return C;
}

// Every planar disc configuration the library generates, plus random packings.
std::vector<PackingSet<2>> generated_disc_configs() {
  const auto B = ConvexBody::ball(2);
  std::vector<PackingSet<2>> out;
  for (int n = 1; n <= 60; ++n) {
    out.push_back(optimal_sausage<2>(B, n));
    out.push_back(hex_cluster(n));
  }
  for (int n : {3, 5, 7, 10, 19, 30}) {
    for (double rho : {kS3 / 2.0, 1.0, 2.0}) out.push_back(best_config<2>(B, n, rho).set);
  }
  std::mt19937_64 rng(2024);
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + static_cast<int>(rng() % 25);
    auto C = random_disc_packing(rng, n, 2.0 + 1.2 * std::sqrt(static_cast<double>(n)));
    if (C.size() >= 1) out.push_back(std::move(C));
  }
  return out;
}

Outcome c1_figures() {
  const auto B = ConvexBody::ball(2);
  const auto S7 = optimal_sausage<2>(B, 7);
  const auto H7 = hex_cluster(7);
  struct Case {
    const char* name;
    const PackingSet<2>* C;
    double rho;
    double expected;
  };
  const Case cases[] = {
      {"S7 rho=1", &S7, 1.0, 7 * kPi / (24 + kPi)},
      {"S7 rho=2", &S7, 2.0, 7 * kPi / (48 + 4 * kPi)},
      {"hex7 rho=2", &H7, 2.0, 7 * kPi / (6 * kS3 + 24 + 4 * kPi)},
      {"S7 rho=1/2", &S7, 0.5, 7 * kPi / (12 + kPi / 4)},
      {"hex7 rho=1/2", &H7, 0.5, 7 * kPi / (6 * kS3 + 6 + kPi / 4)},
  };
  Outcome o;
  double worst = 0.0;
  for (const auto& c : cases) {
    const double v = parametric_density(B, *c.C, c.rho).value;
    const double rel = std::abs(v - c.expected) / c.expected;
    worst = std::max(worst, rel);
    if (rel > 1e-12) {
      o.pass = false;
      o.detail += fmt("%s: %.17g vs %.17g; ", c.name, v, c.expected);
    }
  }
  const double s = parametric_density(B, S7, kS3 / 2.0).value;
  const double h = parametric_density(B, H7, kS3 / 2.0).value;
  if (std::abs(s - h) >= 1e-12 || std::abs(s - 0.9503) > 5e-5) {
    o.pass = false;
    o.detail += fmt("tie: sausage %.17g hex %.17g; ", s, h);
  }
  o.detail += fmt("max rel err %.2e, tie %.6f (|diff| %.1e)", worst, s, std::abs(s - h));
  return o;
}

Outcome c2_planar_parameters() {
  Outcome o;
  const double disc = planar_parameters(ConvexBody::ball(2), kPi / (2 * kS3));
  const double sq = planar_parameters(square(), 1.0);
  const double hx = planar_parameters(hexagon(), 1.0);
  o.pass = std::abs(disc - kS3 / 2) <= 1e-12 && std::abs(sq - 1.0) <= 1e-9 && std::abs(hx - 0.75) <= 1e-9;
  for (double v : {disc, sq, hx}) o.pass = o.pass && v >= 0.75 - 1e-12 && v <= 1.0 + 1e-12;
  o.detail = fmt("disc %.17g, square %.17g, hexagon %.17g", disc, sq, hx);
  return o;
}

Outcome c3_sausage_limits() {
  Outcome o;
  const auto B = ConvexBody::ball(2);
  const double lim = sausage_limit_density(B, 1.0);
  const auto conv = sausage_density_convergence(B, 1.0, 1000000);
  // The finite densities must decrease towards the limit.
  bool trend = true;
  double prev = 1e300;
  for (long long n = 10; n <= 1000000; n *= 10) {
    const auto c = sausage_density_convergence(B, 1.0, n);
    trend = trend && c.finite < prev && c.finite > c.limit;
    prev = c.finite;
  }
  o.pass = std::abs(lim - kPi / 4) <= 1e-12 && std::abs(conv.gap) < 1e-5 && trend;
  o.detail = fmt("limit %.17g, gap at n=1e6 %.3e, monotone trend %s", lim, conv.gap, trend ? "yes" : "no");
  return o;
}

Outcome c4_oracle() {
  Outcome o;
  std::mt19937_64 rng(4242);
  const double rhos[] = {0.3, 1.0, 2.0};
  std::ostringstream det;
  auto report = [&](const char* name, double rho, int agree) {
    det << name << "@" << rho << ":" << agree << "/50 ";
    if (agree < 48) o.pass = false;
  };
  for (double rho : rhos) {
    int agree = 0;
    const auto B = ConvexBody::ball(2);
    for (int k = 0; k < 50; ++k) {
      const auto C = random_points<2>(rng, 1 + static_cast<int>(rng() % 12), 3.0);
      const double exact = minkowski_volume(C, B, rho).volume;
      const auto mc = mc_volume(C, B, rho, 1000000, rng(), 1);
      agree += std::abs(mc.estimate - exact) <= 4.0 * mc.standard_error;
    }
    report("disc", rho, agree);
  }
  for (double rho : rhos) {
    int agree = 0;
    for (int k = 0; k < 50; ++k) {
      const auto K = random_polygon(rng);
      const auto C = random_points<2>(rng, 1 + static_cast<int>(rng() % 12), 3.0);
      const double exact = minkowski_volume(C, K, rho).volume;
      const auto mc = mc_volume(C, K, rho, 1000000, rng(), 1);
      agree += std::abs(mc.estimate - exact) <= 4.0 * mc.standard_error;
    }
    report("polygon", rho, agree);
  }
  for (double rho : rhos) {
    int agree = 0;
    const auto B = ConvexBody::ball(3);
    for (int k = 0; k < 50; ++k) {
      const auto C = random_points<3>(rng, 1 + static_cast<int>(rng() % 12), 3.0);
      const double exact = minkowski_volume(C, B, rho).volume;
      const auto mc = mc_volume(C, B, rho, 1000000, rng(), 1);
      agree += std::abs(mc.estimate - exact) <= 4.0 * mc.standard_error;
    }
    report("ball3", rho, agree);
  }
  o.detail = det.str();
  return o;
}

Outcome c5_steiner_structure() {
  Outcome o;
  std::mt19937_64 rng(55);
  int checked = 0;
  int mismatches = 0;
  int per_dim[4] = {0, 0, 0, 0};
  for (int k = 0; k < 200; ++k) {
    // Points on a random affine flat of dimension 0..3 (d = 3) or 0..2 (d = 2).
    const bool spatial = k % 2 == 0;
    const int d = spatial ? 3 : 2;
    const int flat = static_cast<int>(rng() % static_cast<unsigned>(d + 1));
    std::normal_distribution<double> g;
    std::vector<double> coeffs;
    if (spatial) {
      const Vec3 o3(g(rng), g(rng), g(rng));
      std::vector<Vec3> axes;
      for (int a = 0; a < flat; ++a) axes.emplace_back(g(rng), g(rng), g(rng));
      PackingSet<3> C;
      const int n = flat == 0 ? 1 + static_cast<int>(rng() % 2) : flat + 1 + static_cast<int>(rng() % 8);
      for (int i = 0; i < n; ++i) {
        Vec3 p = o3;
        for (const auto& ax : axes) p += g(rng) * ax;
        C.points.push_back(p);
      }
      if (flat == 0) C.points.resize(1);
      const auto s = *minkowski_volume(C, ConvexBody::ball(3), 1.0).expansion;
      ++per_dim[s.hull_dim];
      if (s.hull_dim != flat) ++mismatches;
      coeffs = s.coeffs;
      for (int i = 0; i <= d; ++i) {
        ++checked;
        if ((coeffs[static_cast<std::size_t>(i)] == 0.0) != (s.hull_dim < d - i)) ++mismatches;
      }
    } else {
      const Vec2 o2(g(rng), g(rng));
      std::vector<Vec2> axes;
      for (int a = 0; a < flat; ++a) axes.emplace_back(g(rng), g(rng));
      PackingSet<2> C;
      const int n = flat == 0 ? 1 : flat + 1 + static_cast<int>(rng() % 8);
      for (int i = 0; i < n; ++i) {
        Vec2 p = o2;
        for (const auto& ax : axes) p += g(rng) * ax;
        C.points.push_back(p);
      }
      const auto s = *minkowski_volume(C, ConvexBody::ball(2), 1.0).expansion;
      ++per_dim[s.hull_dim];
      if (s.hull_dim != flat) ++mismatches;
      for (int i = 0; i <= d; ++i) {
        ++checked;
        if ((s.coeffs[static_cast<std::size_t>(i)] == 0.0) != (s.hull_dim < d - i)) ++mismatches;
      }
    }
  }
  o.pass = mismatches == 0;
  o.detail = fmt("%d coefficient checks, %d mismatches; hull dims 0/1/2/3: %d/%d/%d/%d", checked, mismatches,
                 per_dim[0], per_dim[1], per_dim[2], per_dim[3]);
  return o;
}

Outcome c6_catastrophe() {
  Outcome o;
  const auto rows = catastrophe_scan(3, 1.0, 50, 70);
  const auto first = first_cluster_win(rows);
  // Below the scanned window the cluster families must lose too.
  const auto low = catastrophe_scan(3, 1.0, 2, 49);
  const auto low_win = first_cluster_win(low);
  const bool row50 = rows.front().winner == Winner::Sausage;
  o.pass = first && *first >= 56 && *first <= 70 && !low_win && row50;
  std::string wins;
  for (const auto& r : rows) {
    if (r.winner == Winner::Cluster) wins += std::to_string(r.n) + " ";
  }
  o.detail = fmt("first cluster win n=%lld; cluster wins at: %s; n<=50 all sausage: %s",
                 first ? *first : -1LL, wins.c_str(), (!low_win && row50) ? "yes" : "no");
  if (first) {
    const auto& r = rows[static_cast<std::size_t>(*first - 50)];
    o.detail += fmt("; at n=%lld sausage %.9f vs %s %.9f", r.n, r.sausage_density, r.cluster_label.c_str(),
                    r.best_cluster_density);
  }
  return o;
}

Outcome c7_planar_bound(const std::vector<PackingSet<2>>& configs) {
  Outcome o;
  const auto B = ConvexBody::ball(2);
  const double dB = kPi / (2 * kS3);
  double worst = -1e300;
  int evaluated = 0;
  for (const auto& C : configs) {
    for (double rho : {kS3 / 2.0, 1.0, 2.0}) {
      const double v = parametric_density(B, C, rho).value;
      const double bound = planar_upper_bound(dB, static_cast<long long>(C.size()), rho);
      worst = std::max(worst, v - bound);
      ++evaluated;
    }
  }
  const double tie_bound = planar_upper_bound(dB, 7, kS3 / 2.0);
  const double tie = parametric_density(B, hex_cluster(7), kS3 / 2.0).value;
  o.pass = worst <= 1e-12 && std::abs(tie_bound - tie) <= 1e-9;
  o.detail = fmt("%d evaluations, max(density - bound) %.3e; bound at (7, sqrt3/2) %.12f vs tie %.12f", evaluated,
                 worst, tie_bound, tie);
  return o;
}

Outcome c8_invariance() {
  Outcome o;
  std::mt19937_64 rng(808);
  std::normal_distribution<double> g;
  // Affine invariance for a polygon body.
  double affine_err = 0.0;
  const auto K = ConvexBody::polygon({{0, 0}, {2, 0}, {3, 1}, {1, 2}, {-0.5, 1}});
  for (int k = 0; k < 20; ++k) {
    Eigen::Matrix2d A;
    do {
      A << g(rng), g(rng), g(rng), g(rng);
    } while (std::abs(A.determinant()) < 0.2);
    const Vec2 t(g(rng), g(rng));
    const auto C = refine_config(K, cluster_family<2>(K, 3 + k % 9, 1.0), 1.0, rng(), RefineOptions{200, 0.1, 1e-3});
    const auto AK = linear_image<2>(K, A);
    PackingSet<2> AC;
    for (const auto& p : C.points) AC.points.push_back(A * p + t);
    for (double rho : {0.4, 1.0, 2.0}) {
      const double a = parametric_density(K, C, rho).value;
      const double b = parametric_density(AK, AC, rho).value;
      affine_err = std::max(affine_err, std::abs(a - b) / a);
    }
  }
  // Monotone decreasing and continuous in rho on 100-point grids.
  bool monotone = true;
  double max_jump = 0.0;
  const auto B2 = ConvexBody::ball(2);
  const auto B3 = ConvexBody::ball(3);
  auto grid_check = [&](auto density) {
    double prev = density(0.1);
    const double h = (3.0 - 0.1) / 99.0;
    for (int i = 1; i < 100; ++i) {
      const double rho = 0.1 + i * h;
      const double v = density(rho);
      monotone = monotone && v < prev;
      // |d delta / d rho| <= d delta / rho, so a step changes delta by at most d h / rho.
      const double lipschitz = 3.0 * prev * h / (rho - h);
      max_jump = std::max(max_jump, (prev - v) / lipschitz);
      prev = v;
    }
  };
  grid_check([&](double r) { return parametric_density(B2, hex_cluster(19), r).value; });
  grid_check([&](double r) { return parametric_density(K, hex_cluster(1), r).value; });
  const auto fcc = fcc_cluster(13, FccShape::Auto, 1.0);
  grid_check([&](double r) { return parametric_density(B3, fcc, r).value; });
  grid_check([&](double r) { return parametric_density(B3, optimal_sausage<3>(B3, 9), r).value; });
  // Ball sausage density does not depend on the direction.
  double dir_err = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto u3 = Direction<3>::from(Vec3(g(rng), g(rng), g(rng)));
    const auto u2 = Direction<2>::from(Vec2(g(rng), g(rng)));
    const int n = 2 + k % 20;
    for (double rho : {0.5, 1.0, 2.0}) {
      const double ref3 = n * kappa(3) / sausage_volume(B3, n, rho);
      const double ref2 = n * kappa(2) / sausage_volume(B2, n, rho);
      dir_err = std::max(dir_err, std::abs(parametric_density(B3, sausage<3>(B3, u3, n), rho).value - ref3));
      dir_err = std::max(dir_err, std::abs(parametric_density(B2, sausage<2>(B2, u2, n), rho).value - ref2));
    }
  }
  o.pass = affine_err <= 1e-9 && monotone && max_jump <= 1.0 && dir_err <= 1e-12;
  o.detail = fmt("affine max rel err %.2e; monotone %s, max step / Lipschitz bound %.3f; direction max err %.2e",
                 affine_err, monotone ? "yes" : "no", max_jump, dir_err);
  return o;
}

Outcome c9_large_parameter(const std::vector<PackingSet<2>>& configs) {
  Outcome o;
  const auto B = ConvexBody::ball(2);
  const double dB = kPi / (2 * kS3);
  double worst = 0.0;
  for (const auto& C : configs) worst = std::max(worst, parametric_density(B, C, 2.0).value);
  o.pass = worst <= dB + 1e-12;
  o.detail = fmt("%zu configurations, max density at rho=2 %.15f <= %.15f", configs.size(), worst, dB);
  return o;
}

Outcome c10_lattices() {
  Outcome o;
  const double hex = lattice_density<2>(ConvexBody::ball(2), hexagonal_lattice());
  const double fcc = lattice_density<3>(ConvexBody::ball(3), fcc_lattice());
  bool rejected = false;
  try {
    lattice_density<3>(ConvexBody::ball(3), Lattice<3>::from_basis(0.9 * fcc_lattice().basis));
  } catch (const NotAPackingLattice&) {
    rejected = true;
  }
  o.pass = std::abs(hex - kPi / (2 * kS3)) <= 1e-12 && std::abs(fcc - kPi / std::sqrt(18.0)) <= 1e-12 && rejected;
  o.detail = fmt("hex %.17g, fcc %.17g, shrunken FCC rejected: %s", hex, fcc, rejected ? "yes" : "no");
  return o;
}

}  // namespace

int main() {
  int failed = 0;
  failed += !criterion(1, "figure reproduction", 1.0, c1_figures);
  failed += !criterion(2, "planar parameters", 60.0, c2_planar_parameters);
  failed += !criterion(3, "sausage limits", 60.0, c3_sausage_limits);
  failed += !criterion(4, "oracle equivalence", 600.0, c4_oracle);
  failed += !criterion(5, "Steiner structure", 60.0, c5_steiner_structure);
  failed += !criterion(6, "sausage catastrophe d=3 rho=1", 300.0, c6_catastrophe);
  std::vector<PackingSet<2>> configs;
  try {
    configs = generated_disc_configs();
  } catch (const std::exception& e) {
    std::printf("could not generate disc configurations: %s\n", e.what());
  }
  failed += !criterion(7, "planar upper bound", 120.0, [&] { return c7_planar_bound(configs); });
  failed += !criterion(8, "invariance suite", 120.0, c8_invariance);
  failed += !criterion(9, "large-parameter consistency", 60.0, [&] { return c9_large_parameter(configs); });
  failed += !criterion(10, "lattice densities", 60.0, c10_lattices);
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
