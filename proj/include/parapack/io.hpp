#pragma once

// JSON and CSV serialization. Every number is written with 17 significant
// digits through std::to_chars, so output is locale independent and
// round-trips exactly.

#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "parapack/density.hpp"
#include "parapack/geometry.hpp"
#include "parapack/hullvol.hpp"
#include "parapack/packing.hpp"
#include "parapack/search.hpp"

namespace parapack::io {

inline std::string number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return {buf, res.ptr};
}

inline std::string number(long long x) { return std::to_string(x); }
inline std::string number(std::size_t x) { return std::to_string(x); }
inline std::string number(int x) { return std::to_string(x); }

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

inline std::string boolean(bool b) { return b ? "true" : "false"; }

using Members = std::vector<std::pair<std::string, std::string>>;

inline std::string object(const Members& m) {
  std::string out = "{";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) out += ",";
    out += quote(m[i].first) + ":" + m[i].second;
  }
  return out + "}";
}

inline std::string array(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += items[i];
  }
  return out + "]";
}

template <typename Vector>
std::string vec_array(const Vector& v) {
  std::vector<std::string> items;
  for (Eigen::Index i = 0; i < v.size(); ++i) items.push_back(number(static_cast<double>(v[i])));
  return array(items);
}

inline std::string to_json(const SteinerExpansion& s) {
  std::vector<std::string> c;
  for (double x : s.coeffs) c.push_back(number(x));
  return object({{"dim", number(s.dim)}, {"hull_dim", number(s.hull_dim)}, {"coeffs", array(c)}});
}

template <int D>
std::string to_json(const PackingSet<D>& C) {
  std::vector<std::string> pts;
  for (const auto& p : C.points) pts.push_back(vec_array(p));
  return object({{"dim", number(D)}, {"label", quote(C.label)}, {"points", array(pts)}});
}

template <int D>
std::string to_json(const Lattice<D>& L) {
  std::vector<std::string> cols;
  for (int j = 0; j < D; ++j) cols.push_back(vec_array(Vec<D>(L.basis.col(j))));
  return object({{"basis", array(cols)}, {"det", number(L.det)}});
}

inline std::string to_json(const DensityReport& r) {
  return object({{"value", number(r.value)},
                 {"n", number(r.n)},
                 {"rho", number(r.rho)},
                 {"volume", number(r.volume)},
                 {"expansion", r.expansion ? to_json(*r.expansion) : "null"},
                 {"config_label", quote(r.config_label)}});
}

inline std::string to_json(const BoundReport& r) {
  std::vector<std::string> e;
  for (const auto& b : r.entries) {
    e.push_back(object({{"name", quote(b.name)},
                        {"value", number(b.value)},
                        {"condition", quote(b.condition)},
                        {"locator", quote(b.locator)}}));
  }
  return object({{"dim", number(r.dim)},
                 {"body", quote(to_string(r.body))},
                 {"epsilon", number(r.epsilon)},
                 {"sausage_conjecture_proven", boolean(r.sausage_conjecture_proven)},
                 {"bounds", array(e)}});
}

inline std::string to_json(const ScanRow& r) {
  return object({{"n", number(r.n)},
                 {"rho", number(r.rho)},
                 {"sausage_density", number(r.sausage_density)},
                 {"best_cluster_density", number(r.best_cluster_density)},
                 {"winner", quote(to_string(r.winner))},
                 {"cluster_label", quote(r.cluster_label)}});
}

inline std::string to_json(const std::vector<ScanRow>& rows) {
  std::vector<std::string> items;
  for (const auto& r : rows) items.push_back(to_json(r));
  return array(items);
}

inline std::string to_json(const McEstimate& m) {
  return object({{"estimate", number(m.estimate)},
                 {"standard_error", number(m.standard_error)},
                 {"samples", number(static_cast<long long>(m.samples))},
                 {"hits", number(static_cast<long long>(m.hits))},
                 {"box_volume", number(m.box_volume)}});
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

inline std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::string out = "n,rho,sausage_density,best_cluster_density,winner,cluster_label\n";
  for (const auto& r : rows) {
    out += number(r.n) + "," + number(r.rho) + "," + number(r.sausage_density) + "," +
           number(r.best_cluster_density) + "," + to_string(r.winner) + "," + csv_field(r.cluster_label) + "\n";
  }
  return out;
}

inline constexpr const char* kDensityCsvHeader = "n,rho,family,density,volume,hull_dim\n";

inline std::string density_csv_row(const DensityReport& r, const std::string& family, int hull_dim) {
  return number(r.n) + "," + number(r.rho) + "," + csv_field(family) + "," + number(r.value) + "," +
         number(r.volume) + "," + number(hull_dim) + "\n";
}

// ---------------------------------------------------------------------------
// Input
// ---------------------------------------------------------------------------

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return nlohmann::json::parse(in);
}

template <int D>
Vec<D> parse_vector(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != D) {
    throw std::invalid_argument("expected a " + std::to_string(D) + "-vector, got " + j.dump());
  }
  Vec<D> v;
  for (int i = 0; i < D; ++i) v[i] = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

/// Accepts {"dim": d, "label": s, "points": [...]} or a bare array of points.
template <int D>
PackingSet<D> parse_packing_set(const nlohmann::json& j) {
  PackingSet<D> C;
  const nlohmann::json* pts = &j;
  if (j.is_object()) {
    if (j.contains("dim") && j.at("dim").get<int>() != D) {
      throw std::invalid_argument("packing set has dim " + j.at("dim").dump() + ", expected " + std::to_string(D));
    }
    C.label = j.value("label", std::string{});
    pts = &j.at("points");
  }
  if (!pts->is_array() || pts->empty()) throw std::invalid_argument("packing set needs a non-empty point list");
  for (const auto& p : *pts) C.points.push_back(parse_vector<D>(p));
  require_distinct(C);
  return C;
}

/// {"type": "ball", "dim": d} | {"type": "polygon", "vertices": [...]} |
/// {"type": "polytope", "vertices": [...]}
inline ConvexBody parse_body(const nlohmann::json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "ball") return ConvexBody::ball(j.at("dim").get<int>());
  if (type == "polygon") {
    std::vector<Vec2> v;
    for (const auto& p : j.at("vertices")) v.push_back(parse_vector<2>(p));
    return ConvexBody::polygon(std::move(v));
  }
  if (type == "polytope") {
    std::vector<Vec3> v;
    for (const auto& p : j.at("vertices")) v.push_back(parse_vector<3>(p));
    return ConvexBody::polytope3(std::move(v));
  }
  throw std::invalid_argument("unknown body type '" + type + "'");
}

}  // namespace parapack::io
