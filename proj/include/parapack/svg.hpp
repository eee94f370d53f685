#pragma once

// SVG 1.1 drawing of a planar configuration: the translates x_i + K and the
// outline of conv C + rho K.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "parapack/geometry.hpp"
#include "parapack/hull.hpp"
#include "parapack/io.hpp"
#include "parapack/packing_set.hpp"
#include "parapack/polygon.hpp"

namespace parapack::svg {

namespace detail {

struct Box {
  double x0 = std::numeric_limits<double>::infinity();
  double y0 = std::numeric_limits<double>::infinity();
  double x1 = -std::numeric_limits<double>::infinity();
  double y1 = -std::numeric_limits<double>::infinity();

  void add(const Vec2& p) {
    x0 = std::min(x0, p.x());
    y0 = std::min(y0, p.y());
    x1 = std::max(x1, p.x());
    y1 = std::max(y1, p.y());
  }
};

// SVG's y axis points down; configurations are drawn mirrored back.
inline std::string xy(const Vec2& p) { return io::number(p.x()) + "," + io::number(0.0 - p.y()); }

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

inline std::string polygon_path(const std::vector<Vec2>& v) {
  std::string d = "M" + xy(v.front());
  for (std::size_t i = 1; i < v.size(); ++i) d += " L" + xy(v[i]);
  return d + " Z";
}

// Boundary of conv(hull) + rho B^2: offset edges joined by circular arcs.
inline std::string rounded_path(const std::vector<Vec2>& hull, double rho) {
  const std::size_t m = hull.size();
  if (m == 1) {
    const Vec2& c = hull.front();
    const Vec2 a = c + Vec2(rho, 0.0);
    const Vec2 b = c - Vec2(rho, 0.0);
    const std::string r = io::number(rho);
    return "M" + xy(a) + " A" + r + "," + r + " 0 1,0 " + xy(b) + " A" + r + "," + r + " 0 1,0 " + xy(a) + " Z";
  }
  std::vector<Vec2> normals;
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 e = hull[(i + 1) % m] - hull[i];
    normals.push_back(Vec2(e.y(), -e.x()).normalized());
  }
  const std::string r = io::number(rho);
  std::string d;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = (i + 1) % m;
    const Vec2 start = hull[i] + rho * normals[i];
    const Vec2 end = hull[j] + rho * normals[i];
    d += (i == 0 ? "M" : " L") + xy(start) + " L" + xy(end);
    const Vec2 next = hull[j] + rho * normals[j];
    // Counterclockwise in the plane is clockwise after the y flip.
    d += " A" + r + "," + r + " 0 0,0 " + xy(next);
  }
  return d + " Z";
}

}  // namespace detail

/// Renders C + K (translates filled) and conv C + rho K (outlined).
inline std::string render(const ConvexBody& K, const PackingSet<2>& C, double rho) {
  if (K.dim() != 2) throw std::invalid_argument("render: planar bodies only");
  const Hull2 h = hull2d(C.points);
  detail::Box box;
  std::string shapes;
  for (const auto& p : C.points) {
    if (K.is_ball()) {
      shapes += "<circle cx=\"" + io::number(p.x()) + "\" cy=\"" + io::number(0.0 - p.y()) +
                "\" r=\"1\" fill=\"#c6dbef\" stroke=\"#08519c\" stroke-width=\"0.03\"/>\n";
      box.add(p + Vec2(1.0, 1.0));
      box.add(p - Vec2(1.0, 1.0));
    } else {
      std::vector<Vec2> v;
      for (const auto& q : K.polygon_vertices()) {
        v.push_back(p + q);
        box.add(p + q);
      }
      shapes += "<path d=\"" + detail::polygon_path(v) +
                "\" fill=\"#c6dbef\" stroke=\"#08519c\" stroke-width=\"0.03\"/>\n";
    }
  }
  std::string outline;
  if (K.is_ball()) {
    outline = detail::rounded_path(h.vertices, rho);
    for (const auto& p : h.vertices) {
      box.add(p + Vec2(rho, rho));
      box.add(p - Vec2(rho, rho));
    }
  } else {
    const auto sum = polygon::minkowski_sum(h.vertices, polygon::scaled(K.polygon_vertices(), rho));
    outline = detail::polygon_path(sum);
    for (const auto& p : sum) box.add(p);
  }
  for (const auto& p : C.points) {
    shapes += "<circle cx=\"" + io::number(p.x()) + "\" cy=\"" + io::number(0.0 - p.y()) + "\" r=\"0.05\" fill=\"#000\"/>\n";
  }
  const double w = box.x1 - box.x0;
  const double hgt = box.y1 - box.y0;
  const double mx = 0.05 * w;
  const double my = 0.05 * hgt;
  // Mirrored y range: [-y1, -y0].
  const std::string view = io::number(box.x0 - mx) + " " + io::number(-box.y1 - my) + " " + io::number(w + 2 * mx) +
                           " " + io::number(hgt + 2 * my);
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" + view + "\">\n";
  out += "<title>" + detail::escape(C.label) + " rho=" + io::number(rho) + "</title>\n";
  out += shapes;
  out += "<path d=\"" + outline + "\" fill=\"none\" stroke=\"#cb181d\" stroke-width=\"0.05\"/>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace parapack::svg
