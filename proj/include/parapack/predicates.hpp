#pragma once

// Orientation predicates with exact sign.
//
// A floating-point evaluation is accepted when it clears a static error
// bound; otherwise the determinant is re-evaluated exactly with
// non-overlapping floating-point expansions (Shewchuk's arithmetic, with
// products split by fma).

#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Core>

namespace parapack::predicates {

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon() / 2.0;  // 2^-53
inline constexpr double kCcwBound = (3.0 + 16.0 * kEps) * kEps;
inline constexpr double kO3dBound = (7.0 + 56.0 * kEps) * kEps;

inline void two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  const double bv = x - a;
  const double av = x - bv;
  y = (a - av) + (b - bv);
}

inline void fast_two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  y = b - (x - a);
}

inline void two_diff(double a, double b, double& x, double& y) {
  x = a - b;
  const double bv = a - x;
  const double av = x + bv;
  y = (a - av) + (bv - b);
}

inline void two_product(double a, double b, double& x, double& y) {
  x = a * b;
  y = std::fma(a, b, -x);
}

/// Non-overlapping expansion, components in increasing magnitude, zeros
/// eliminated. An empty expansion is zero.
template <int N>
struct Expansion {
  std::array<double, N> c{};
  int len = 0;

  [[nodiscard]] int sign() const {
    if (len == 0) return 0;
    return c[len - 1] > 0.0 ? 1 : (c[len - 1] < 0.0 ? -1 : 0);
  }
};

template <int N>
Expansion<N> diff_expansion(double a, double b) {
  Expansion<N> e;
  double hi = 0.0;
  double lo = 0.0;
  two_diff(a, b, hi, lo);
  if (lo != 0.0) e.c[e.len++] = lo;
  if (hi != 0.0) e.c[e.len++] = hi;
  return e;
}

// h = e + f; the caller guarantees e.len + f.len <= N.
template <int N, int A, int B>
Expansion<N> sum(const Expansion<A>& e, const Expansion<B>& f) {
  Expansion<N> h;
  for (int i = 0; i < e.len; ++i) h.c[h.len++] = e.c[i];
  for (int j = 0; j < f.len; ++j) {
    double q = f.c[j];
    int out = 0;
    for (int i = 0; i < h.len; ++i) {
      double qn = 0.0;
      double hh = 0.0;
      two_sum(q, h.c[i], qn, hh);
      q = qn;
      if (hh != 0.0) h.c[out++] = hh;
    }
    if (q != 0.0) h.c[out++] = q;
    h.len = out;
  }
  return h;
}

template <int N, int M>
Expansion<N> scale(const Expansion<M>& e, double b) {
  static_assert(N >= 2 * M);
  Expansion<N> h;
  if (e.len == 0 || b == 0.0) return h;
  double q = 0.0;
  double hh = 0.0;
  two_product(e.c[0], b, q, hh);
  if (hh != 0.0) h.c[h.len++] = hh;
  for (int i = 1; i < e.len; ++i) {
    double p1 = 0.0;
    double p0 = 0.0;
    two_product(e.c[i], b, p1, p0);
    double s = 0.0;
    two_sum(q, p0, s, hh);
    if (hh != 0.0) h.c[h.len++] = hh;
    fast_two_sum(p1, s, q, hh);
    if (hh != 0.0) h.c[h.len++] = hh;
  }
  if (q != 0.0) h.c[h.len++] = q;
  return h;
}

template <int N, int A, int B>
Expansion<N> product(const Expansion<A>& e, const Expansion<B>& f) {
  static_assert(N >= 2 * A * B);
  Expansion<N> acc;
  for (int j = 0; j < f.len; ++j) acc = sum<N>(acc, scale<2 * A>(e, f.c[j]));
  return acc;
}

template <int N, int M>
Expansion<N> negate(const Expansion<M>& e) {
  static_assert(N >= M);
  Expansion<N> h;
  h.len = e.len;
  for (int i = 0; i < e.len; ++i) h.c[i] = -e.c[i];
  return h;
}

inline int orient2d_exact(const double* a, const double* b, const double* c) {
  const auto acx = diff_expansion<2>(a[0], c[0]);
  const auto bcy = diff_expansion<2>(b[1], c[1]);
  const auto acy = diff_expansion<2>(a[1], c[1]);
  const auto bcx = diff_expansion<2>(b[0], c[0]);
  const auto left = product<8>(acx, bcy);
  const auto right = product<8>(acy, bcx);
  return sum<16>(left, negate<8>(right)).sign();
}

// Minor b.y*c.z - b.z*c.y with two-component entries.
inline Expansion<16> minor2(const Expansion<2>& by, const Expansion<2>& cz, const Expansion<2>& bz,
                            const Expansion<2>& cy) {
  return sum<16>(product<8>(by, cz), negate<8>(product<8>(bz, cy)));
}

inline int orient3d_exact(const double* a, const double* b, const double* c, const double* d) {
  std::array<Expansion<2>, 3> ad{};
  std::array<Expansion<2>, 3> bd{};
  std::array<Expansion<2>, 3> cd{};
  for (int k = 0; k < 3; ++k) {
    ad[k] = diff_expansion<2>(a[k], d[k]);
    bd[k] = diff_expansion<2>(b[k], d[k]);
    cd[k] = diff_expansion<2>(c[k], d[k]);
  }
  const auto m0 = minor2(bd[1], cd[2], bd[2], cd[1]);
  const auto m1 = minor2(bd[2], cd[0], bd[0], cd[2]);
  const auto m2 = minor2(bd[0], cd[1], bd[1], cd[0]);
  const auto t0 = product<64>(m0, ad[0]);
  const auto t1 = product<64>(m1, ad[1]);
  const auto t2 = product<64>(m2, ad[2]);
  return sum<192>(sum<128>(t0, t1), t2).sign();
}

}  // namespace detail

/// Sign of det[a-c, b-c]: +1 when a, b, c turn counterclockwise.
inline int orient2d(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  const double detleft = (a.x() - c.x()) * (b.y() - c.y());
  const double detright = (a.y() - c.y()) * (b.x() - c.x());
  const double det = detleft - detright;
  const double bound = detail::kCcwBound * (std::abs(detleft) + std::abs(detright));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return detail::orient2d_exact(a.data(), b.data(), c.data());
}

/// Sign of det[a-d, b-d, c-d]. Positive when d lies on the side of the plane
/// abc opposite to the normal (b-a)x(c-a), i.e. abc is counterclockwise seen
/// from d's negative side. Equivalently: orient3d(a,b,c,p) < 0 means p is on
/// the positive side of the oriented plane through a, b, c.
inline int orient3d(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                    const Eigen::Vector3d& d) {
  const double adx = a.x() - d.x(), ady = a.y() - d.y(), adz = a.z() - d.z();
  const double bdx = b.x() - d.x(), bdy = b.y() - d.y(), bdz = b.z() - d.z();
  const double cdx = c.x() - d.x(), cdy = c.y() - d.y(), cdz = c.z() - d.z();
  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * std::abs(adz) +
                           (std::abs(cdxady) + std::abs(adxcdy)) * std::abs(bdz) +
                           (std::abs(adxbdy) + std::abs(bdxady)) * std::abs(cdz);
  const double bound = detail::kO3dBound * permanent;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return detail::orient3d_exact(a.data(), b.data(), c.data(), d.data());
}

}  // namespace parapack::predicates
