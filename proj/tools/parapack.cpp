// Command-line front end: density, scan, bounds, oracle, render.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "parapack/parapack.hpp"

namespace pp = parapack;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalidPacking = 2;
constexpr int kExitCapability = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const char* kBodyHelp =
    "Body: ball2 | ball3 | square ([-1,1]^2) | triangle ((0,0),(2,0),(0,2)) | "
    "hexagon (regular, unit inradius) | path to a JSON body file | inline JSON "
    "such as {\"type\":\"polygon\",\"vertices\":[[0,0],[1,0],[0,1]]}";

const char* kConfigHelp =
    "Configuration: sausage:N (optimal direction) | hex:N (planar hexagonal cluster) | "
    "fcc:N (FCC cluster, ball3) | best:N (best found) | file:PATH (packing set JSON)";

pp::ConvexBody builtin_body(const std::string& name) {
  if (name == "ball2") return pp::ConvexBody::ball(2);
  if (name == "ball3") return pp::ConvexBody::ball(3);
  if (name == "square") return pp::ConvexBody::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  if (name == "triangle") return pp::ConvexBody::polygon({{0, 0}, {2, 0}, {0, 2}});
  if (name == "hexagon") {
    const double R = 2.0 / std::sqrt(3.0);
    std::vector<pp::Vec2> v;
    for (int k = 0; k < 6; ++k) {
      const double a = std::numbers::pi / 6.0 + k * std::numbers::pi / 3.0;
      v.emplace_back(R * std::cos(a), R * std::sin(a));
    }
    return pp::ConvexBody::polygon(std::move(v));
  }
  if (!name.empty() && name.front() == '{') return pp::io::parse_body(nlohmann::json::parse(name));
  std::ifstream probe(name);
  if (probe) return pp::io::parse_body(pp::io::read_json_file(name));
  throw UsageError("unknown body '" + name + "'");
}

struct ConfigSpec {
  std::string kind;
  int n = 0;
  std::string path;
};

ConfigSpec parse_config(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw UsageError("configuration must look like kind:N or file:PATH");
  ConfigSpec c;
  c.kind = s.substr(0, colon);
  const std::string arg = s.substr(colon + 1);
  if (c.kind == "file") {
    c.path = arg;
    return c;
  }
  if (c.kind != "sausage" && c.kind != "hex" && c.kind != "fcc" && c.kind != "best") {
    throw UsageError("unknown configuration kind '" + c.kind + "'");
  }
  try {
    std::size_t used = 0;
    c.n = std::stoi(arg, &used);
    if (used != arg.size() || c.n < 1) throw std::invalid_argument("n");
  } catch (const std::exception&) {
    throw UsageError("configuration size must be a positive integer, got '" + arg + "'");
  }
  return c;
}

template <int D>
pp::PackingSet<D> build_config(const pp::ConvexBody& K, const ConfigSpec& c, double rho, std::uint64_t seed) {
  if (c.kind == "file") return pp::io::parse_packing_set<D>(pp::io::read_json_file(c.path));
  if (c.kind == "sausage") return pp::optimal_sausage<D>(K, c.n);
  if (c.kind == "best") return pp::best_config<D>(K, c.n, rho, seed).set;
  if constexpr (D == 2) {
    if (c.kind == "hex") return K.is_ball() ? pp::hex_cluster(c.n) : pp::cluster_family<2>(K, c.n, rho);
    throw pp::CapabilityError("configuration '" + c.kind + "' needs a 3-dimensional body");
  } else {
    if (c.kind == "fcc") {
      if (!K.is_ball()) throw pp::CapabilityError("fcc clusters are generated for ball3 only");
      return pp::fcc_cluster(c.n, pp::FccShape::Auto, rho);
    }
    throw pp::CapabilityError("configuration '" + c.kind + "' needs a planar body");
  }
}

int hull_dim_of(const pp::PackingSet<2>& C) { return pp::hull2d(C.points).hull_dim; }
int hull_dim_of(const pp::PackingSet<3>& C) { return pp::hull3d(C.points).hull_dim; }

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

void require_increasing(const std::vector<double>& rhos) {
  if (rhos.empty()) throw UsageError("--rho needs at least one value");
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    if (!(rhos[i] > 0.0)) throw UsageError("--rho values must be positive");
    if (i > 0 && !(rhos[i] > rhos[i - 1])) throw UsageError("--rho grid must be increasing");
  }
}

struct Options {
  std::string body = "ball2";
  std::string config;
  std::vector<double> rho{1.0};
  std::uint64_t seed = pp::kDefaultSeed;
  std::uint64_t samples = 1000000;
  unsigned threads = 1;
  std::string format = "json";
  std::string output;
  int dim = 3;
  std::string n_range = "2:10";
  bool find_magic = false;
  bool no_refine = false;
  std::string body_class = "ball";
  double epsilon = 0.01;
};

template <int D>
std::string run_density(const pp::ConvexBody& K, const Options& o) {
  const auto spec = parse_config(o.config);
  std::vector<std::string> json_rows;
  std::string csv = pp::io::kDensityCsvHeader;
  for (double rho : o.rho) {
    const auto C = build_config<D>(K, spec, rho, o.seed);
    const auto report = pp::parametric_density(K, C, rho);
    json_rows.push_back(pp::io::to_json(report));
    csv += pp::io::density_csv_row(report, spec.kind, hull_dim_of(C));
  }
  if (o.format == "csv") return csv;
  if (json_rows.size() == 1) return json_rows.front() + "\n";
  return pp::io::array(json_rows) + "\n";
}

template <int D>
std::string run_oracle(const pp::ConvexBody& K, const Options& o) {
  const auto spec = parse_config(o.config);
  std::vector<std::string> rows;
  for (double rho : o.rho) {
    const auto C = build_config<D>(K, spec, rho, o.seed);
    const auto exact = pp::minkowski_volume(C, K, rho);
    const auto mc = pp::mc_volume(C, K, rho, o.samples, o.seed, o.threads);
    const double sigmas = mc.standard_error > 0.0 ? std::abs(exact.volume - mc.estimate) / mc.standard_error : 0.0;
    rows.push_back(pp::io::object({{"config_label", pp::io::quote(C.label)},
                                   {"rho", pp::io::number(rho)},
                                   {"exact", pp::io::number(exact.volume)},
                                   {"monte_carlo", pp::io::to_json(mc)},
                                   {"sigmas", pp::io::number(sigmas)},
                                   {"agree", pp::io::boolean(sigmas <= 4.0)}}));
  }
  return (rows.size() == 1 ? rows.front() : pp::io::array(rows)) + "\n";
}

std::pair<int, int> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  try {
    if (colon == std::string::npos) {
      const int n = std::stoi(s);
      return {n, n};
    }
    return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw UsageError("--n must look like A:B");
  }
}

int dispatch(const CLI::App& app, const Options& o) {
  auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (name == "bounds") {
    pp::BodyClass bc;
    if (o.body_class == "ball") {
      bc = pp::BodyClass::Ball;
    } else if (o.body_class == "symmetric") {
      bc = pp::BodyClass::Symmetric;
    } else if (o.body_class == "general") {
      bc = pp::BodyClass::General;
    } else {
      throw UsageError("--class must be ball, symmetric or general");
    }
    emit(pp::io::to_json(pp::bound_report(o.dim, bc, o.epsilon)) + "\n", o.output);
    return kExitOk;
  }
  if (name == "scan") {
    const auto [lo, hi] = parse_range(o.n_range);
    require_increasing(o.rho);
    std::vector<pp::ScanRow> rows;
    for (double rho : o.rho) {
      pp::ScanOptions so;
      so.seed = o.seed;
      so.threads = o.threads;
      so.refine = !o.no_refine;
      auto part = pp::catastrophe_scan(o.dim, rho, lo, hi, so);
      rows.insert(rows.end(), part.begin(), part.end());
    }
    std::stable_sort(rows.begin(), rows.end(), [](const pp::ScanRow& a, const pp::ScanRow& b) { return a.n < b.n; });
    std::string text;
    if (o.format == "csv") {
      text = pp::io::scan_csv(rows);
    } else {
      text = pp::io::to_json(rows) + "\n";
    }
    if (o.find_magic) {
      std::vector<std::string> magic;
      for (double rho : o.rho) {
        std::vector<pp::ScanRow> at;
        for (const auto& r : rows) {
          if (r.rho == rho) at.push_back(r);
        }
        const auto m = pp::first_cluster_win(at);
        magic.push_back(pp::io::object({{"rho", pp::io::number(rho)}, {"first_cluster_win", m ? std::to_string(*m) : "null"}}));
      }
      if (o.format == "json") {
        text = pp::io::object({{"rows", pp::io::to_json(rows)}, {"magic", pp::io::array(magic)}}) + "\n";
      } else {
        for (const auto& m : magic) std::cerr << m << "\n";
      }
    }
    emit(text, o.output);
    return kExitOk;
  }

  const auto K = builtin_body(o.body);
  require_increasing(o.rho);
  if (name == "density") {
    emit(K.dim() == 2 ? run_density<2>(K, o) : K.dim() == 3 ? run_density<3>(K, o)
                                                           : throw pp::CapabilityError("dimension must be 2 or 3"),
         o.output);
    return kExitOk;
  }
  if (name == "oracle") {
    emit(K.dim() == 2 ? run_oracle<2>(K, o) : K.dim() == 3 ? run_oracle<3>(K, o)
                                                          : throw pp::CapabilityError("dimension must be 2 or 3"),
         o.output);
    return kExitOk;
  }
  if (name == "render") {
    if (K.dim() != 2) throw pp::CapabilityError("render draws planar configurations only");
    const auto C = build_config<2>(K, parse_config(o.config), o.rho.front(), o.seed);
    pp::require_packing(K, C);
    emit(pp::svg::render(K, C, o.rho.front()), o.output);
    return kExitOk;
  }
  throw UsageError("unknown command " + name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parametric densities of finite packings"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&o](CLI::App* s, bool needs_config) {
    s->add_option("--body", o.body, kBodyHelp)->capture_default_str();
    auto* cfg = s->add_option("--config", o.config, kConfigHelp);
    if (needs_config) cfg->required();
    s->add_option("--rho", o.rho, "Parameter rho; a comma-separated increasing grid is accepted")
        ->delimiter(',')
        ->capture_default_str();
    s->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    s->add_option("-o,--output", o.output, "Output path (default: standard output)");
  };

  auto* density = app.add_subcommand("density", "Parametric density of a configuration");
  add_common(density, true);
  density->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  auto* scan = app.add_subcommand("scan", "Sausage versus cluster scan over n");
  scan->add_option("--dim", o.dim, "Dimension (2 or 3)")->check(CLI::IsMember({2, 3}))->capture_default_str();
  scan->add_option("--rho", o.rho, "Parameter rho (comma-separated grid allowed)")->delimiter(',')->capture_default_str();
  scan->add_option("--n", o.n_range, "Range A:B of cardinalities")->capture_default_str();
  scan->add_flag("--find-magic", o.find_magic, "Report the first n where a cluster wins");
  scan->add_flag("--no-refine", o.no_refine, "Skip continuous refinement of clusters");
  scan->add_option("--seed", o.seed, "Base seed for refinement")->capture_default_str();
  scan->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();
  scan->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  scan->add_option("-o,--output", o.output, "Output path (default: standard output)");

  auto* bounds = app.add_subcommand("bounds", "Known bounds on the sausage and critical parameters");
  bounds->add_option("--dim", o.dim, "Dimension d >= 2")->check(CLI::Range(2, 1000000))->capture_default_str();
  bounds->add_option("--class", o.body_class, "ball, symmetric or general")->capture_default_str();
  bounds->add_option("--epsilon", o.epsilon, "epsilon in the asymptotic ball density bound")->capture_default_str();
  bounds->add_option("-o,--output", o.output, "Output path (default: standard output)");

  auto* oracle = app.add_subcommand("oracle", "Exact volume against the Monte Carlo estimate");
  add_common(oracle, true);
  oracle->add_option("--samples", o.samples, "Monte Carlo samples (>= 10000)")->capture_default_str();
  oracle->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();

  auto* render = app.add_subcommand("render", "SVG drawing of a planar configuration");
  add_common(render, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return dispatch(app, o);
  } catch (const pp::InvalidPacking& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidPacking;
  } catch (const pp::CapabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapability;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
