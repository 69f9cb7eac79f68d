#pragma once

// Batch pipeline plumbing: run configurations, the JSON run report (all
// floating-point output at 17 significant digits), CSV ingestion of sampled
// maps, polyline export for plotting, and the published report schema.
//
// Exit-code contract of the CLI built on top of this header:
//   0 success, 1 config error, 2 unsupported mathematical regime
//   (non-closed holonomy), 3 internal check failure.

#include "cylmom/builtin_examples.hpp"

#include <json.hpp>

#include <chrono>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

namespace cylmom {

using ojson = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// JSON emission helpers.

// Non-finite values are not representable in JSON; they appear as the
// strings "inf" / "-inf" / "nan" (e.g. the injectivity radius of a trivial
// subgroup).
inline ojson jnum(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline ojson jvec(const Vec& v) {
  ojson a = ojson::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(jnum(v[i]));
  return a;
}

inline ojson jmat(const Mat& m) {
  ojson a = ojson::array();
  for (int i = 0; i < m.rows(); ++i) a.push_back(jvec(m.row(i).transpose()));
  return a;
}

namespace detail {

inline void dump17(const ojson& j, std::string& out, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close_pad(2 * depth, ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + ojson(it.key()).dump() + ": ";
        dump17(it.value(), out, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& el : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        dump17(el, out, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    case ojson::value_t::number_float: {
      double v = j.get<double>();
      if (!std::isfinite(v)) throw InternalError("dump17: non-finite number reached emission");
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace detail

inline std::string dump_report_json(const ojson& j) {
  std::string out;
  detail::dump17(j, out, 0);
  out += "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Run configuration.

struct TargetSpec {
  std::string type = "euclidean";  // "euclidean" | "cylinder"
  int dim = 0;
  Mat subspace_basis{0, 0};
  Mat lattice_basis{0, 0};

  TargetSpace make() const {
    if (type == "euclidean") return euclidean_target(dim);
    Mat sub = subspace_basis.cols() == 0 ? Mat(0, dim) : subspace_basis;
    Mat lat = lattice_basis.cols() == 0 ? Mat(0, dim) : lattice_basis;
    return cylinder_target(make_closed_subgroup(dim, sub, lat));
  }
};

struct CsvSpec {
  std::string points_file;  // one row per point: coordinates, then value
  int domain_dim = 0;
  std::string adjacency_file;  // optional: rows "i,j"
  TargetSpec target;
};

struct ModelSpec {
  Mat omega;
  Vec periods;
  Mat generators;
  Vec basepoint;   // defaults to 0
  Vec base_value;  // defaults to 0
};

struct RunConfig {
  std::vector<std::string> tasks = {"all"};
  std::string example;  // builtin name; empty when model/csv given
  std::optional<ModelSpec> model;
  std::optional<CsvSpec> csv;
  int resolution = 16;
  double eps_fiber = 1e-9;
  int radius_hops = 2;
  double coverage_threshold = 0.95;
  double tol_convexity = -1.0;  // < 0: automatic (2x max local image edge)
  double eps_gap = -1.0;        // < 0: automatic weak-convexity tolerance
  int pair_budget = 300;
  std::uint64_t seed = 23;
  bool weak = true;
  std::string out_dir;  // empty: no files written

  bool want(const std::string& task) const {
    for (const auto& t : tasks) {
      if (t == "all" || t == task) return true;
    }
    return false;
  }
};

namespace detail {

inline Mat mat_from_json(const ojson& a, const std::string& what) {
  if (!a.is_array()) throw ConfigError(what + ": expected an array of rows");
  const int rows = static_cast<int>(a.size());
  int cols = -1;
  Mat m;
  for (int i = 0; i < rows; ++i) {
    const auto& r = a[i];
    if (!r.is_array()) throw ConfigError(what + ": row " + std::to_string(i) + " is not an array");
    if (cols < 0) {
      cols = static_cast<int>(r.size());
      m = Mat(rows, cols);
    }
    if (static_cast<int>(r.size()) != cols) throw ConfigError(what + ": ragged rows");
    for (int k = 0; k < cols; ++k) {
      if (!r[k].is_number()) throw ConfigError(what + ": non-numeric entry");
      m(i, k) = r[k].get<double>();
    }
  }
  if (rows == 0) throw ConfigError(what + ": empty matrix");
  return m;
}

inline Vec vec_from_json(const ojson& a, const std::string& what) {
  if (!a.is_array()) throw ConfigError(what + ": expected an array");
  Vec v(static_cast<int>(a.size()));
  for (int i = 0; i < v.size(); ++i) {
    if (!a[i].is_number()) throw ConfigError(what + ": non-numeric entry");
    v[i] = a[i].get<double>();
  }
  return v;
}

// Period entries are positive numbers or the string "inf" for R factors.
inline Vec periods_from_json(const ojson& a, const std::string& what) {
  if (!a.is_array() || a.empty()) throw ConfigError(what + ": expected a nonempty array");
  Vec v(static_cast<int>(a.size()));
  for (int i = 0; i < v.size(); ++i) {
    if (a[i].is_string() && a[i].get<std::string>() == "inf") {
      v[i] = kInf;
    } else if (a[i].is_number() && a[i].get<double>() > 0.0) {
      v[i] = a[i].get<double>();
    } else {
      throw ConfigError(what + ": entries must be positive numbers or \"inf\"");
    }
  }
  return v;
}

inline void reject_unknown_keys(const ojson& j, const std::set<std::string>& known,
                                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) {
      throw ConfigError(where + ": unknown key '" + it.key() + "'");
    }
  }
}

}  // namespace detail

inline RunConfig parse_run_config(const ojson& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  detail::reject_unknown_keys(
      j,
      {"schema_version", "tasks", "example", "model", "csv", "resolution", "eps_fiber",
       "radius_hops", "coverage_threshold", "tol_convexity", "eps_gap", "pair_budget", "seed",
       "weak", "out_dir"},
      "config");
  if (j.contains("schema_version") &&
      !(j["schema_version"].is_number_integer() && j["schema_version"].get<int>() == 1)) {
    throw ConfigError("config: unsupported schema_version (expected 1)");
  }

  RunConfig cfg;
  if (j.contains("tasks")) {
    if (!j["tasks"].is_array() || j["tasks"].empty()) {
      throw ConfigError("config.tasks: expected a nonempty array");
    }
    cfg.tasks.clear();
    for (const auto& t : j["tasks"]) {
      static const std::set<std::string> kTasks = {"all", "holonomy", "momentum", "harness",
                                                   "normalform"};
      if (!t.is_string() || !kTasks.count(t.get<std::string>())) {
        throw ConfigError("config.tasks: entries must be one of all | holonomy | momentum | "
                          "harness | normalform");
      }
      cfg.tasks.push_back(t.get<std::string>());
    }
  }

  const int sources = int(j.contains("example")) + int(j.contains("model")) +
                      int(j.contains("csv"));
  if (sources != 1) {
    throw ConfigError("config: exactly one of 'example', 'model', 'csv' must be given");
  }

  if (j.contains("example")) {
    if (!j["example"].is_string()) throw ConfigError("config.example: expected a string");
    cfg.example = j["example"].get<std::string>();
    bool known = false;
    for (const auto& e : list_builtin_examples()) known = known || e.name == cfg.example;
    if (!known) throw ConfigError("config.example: unknown builtin example '" + cfg.example + "'");
  }

  if (j.contains("model")) {
    const auto& m = j["model"];
    if (!m.is_object()) throw ConfigError("config.model: expected an object");
    detail::reject_unknown_keys(
        m, {"omega", "periods", "generators", "basepoint", "base_value"}, "config.model");
    for (const char* req : {"omega", "periods", "generators"}) {
      if (!m.contains(req)) throw ConfigError(std::string("config.model: missing '") + req + "'");
    }
    ModelSpec spec;
    spec.omega = detail::mat_from_json(m["omega"], "config.model.omega");
    spec.periods = detail::periods_from_json(m["periods"], "config.model.periods");
    spec.generators = detail::mat_from_json(m["generators"], "config.model.generators");
    spec.basepoint = m.contains("basepoint")
                         ? detail::vec_from_json(m["basepoint"], "config.model.basepoint")
                         : Vec::Zero(spec.omega.rows());
    spec.base_value = m.contains("base_value")
                          ? detail::vec_from_json(m["base_value"], "config.model.base_value")
                          : Vec::Zero(spec.generators.rows());
    try {
      make_torus_model(spec.omega, spec.periods, spec.generators);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config.model: ") + e.what());
    }
    if (spec.basepoint.size() != spec.omega.rows() ||
        spec.base_value.size() != spec.generators.rows()) {
      throw ConfigError("config.model: basepoint/base_value dimension mismatch");
    }
    cfg.model = spec;
  }

  if (j.contains("csv")) {
    const auto& c = j["csv"];
    if (!c.is_object()) throw ConfigError("config.csv: expected an object");
    detail::reject_unknown_keys(c, {"points_file", "domain_dim", "adjacency_file", "target"},
                                "config.csv");
    CsvSpec spec;
    if (!c.contains("points_file") || !c["points_file"].is_string() ||
        c["points_file"].get<std::string>().empty()) {
      throw ConfigError("config.csv.points_file: expected a nonempty path");
    }
    spec.points_file = c["points_file"].get<std::string>();
    if (!c.contains("domain_dim") || !c["domain_dim"].is_number_integer() ||
        c["domain_dim"].get<int>() < 1) {
      throw ConfigError("config.csv.domain_dim: expected a positive integer");
    }
    spec.domain_dim = c["domain_dim"].get<int>();
    if (c.contains("adjacency_file")) {
      if (!c["adjacency_file"].is_string()) {
        throw ConfigError("config.csv.adjacency_file: expected a path");
      }
      spec.adjacency_file = c["adjacency_file"].get<std::string>();
    }
    if (!c.contains("target") || !c["target"].is_object()) {
      throw ConfigError("config.csv.target: expected an object");
    }
    const auto& t = c["target"];
    detail::reject_unknown_keys(t, {"type", "dim", "subspace_basis", "lattice_basis"},
                                "config.csv.target");
    if (!t.contains("type") || !t["type"].is_string()) {
      throw ConfigError("config.csv.target.type: expected \"euclidean\" or \"cylinder\"");
    }
    spec.target.type = t["type"].get<std::string>();
    if (spec.target.type != "euclidean" && spec.target.type != "cylinder") {
      throw ConfigError("config.csv.target.type: expected \"euclidean\" or \"cylinder\"");
    }
    if (!t.contains("dim") || !t["dim"].is_number_integer() || t["dim"].get<int>() < 1) {
      throw ConfigError("config.csv.target.dim: expected a positive integer");
    }
    spec.target.dim = t["dim"].get<int>();
    if (t.contains("subspace_basis")) {
      spec.target.subspace_basis =
          detail::mat_from_json(t["subspace_basis"], "config.csv.target.subspace_basis");
    }
    if (t.contains("lattice_basis")) {
      spec.target.lattice_basis =
          detail::mat_from_json(t["lattice_basis"], "config.csv.target.lattice_basis");
    }
    if (spec.target.type == "euclidean" &&
        (t.contains("subspace_basis") || t.contains("lattice_basis"))) {
      throw ConfigError("config.csv.target: bases are only meaningful for cylinder targets");
    }
    try {
      spec.target.make();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config.csv.target: ") + e.what());
    }
    cfg.csv = spec;
    for (const char* t_name : {"holonomy", "momentum", "normalform"}) {
      if (std::find(cfg.tasks.begin(), cfg.tasks.end(), t_name) != cfg.tasks.end()) {
        throw ConfigError(std::string("config.tasks: '") + t_name +
                          "' needs a model; csv inputs support only the harness task");
      }
    }
  }

  auto get_num = [&](const char* key, double lo, double hi, double& slot) {
    if (!j.contains(key)) return;
    if (!j[key].is_number()) throw ConfigError(std::string("config.") + key + ": expected a number");
    double v = j[key].get<double>();
    if (!(v > lo) || !(v <= hi)) {
      throw ConfigError(std::string("config.") + key + ": out of range");
    }
    slot = v;
  };
  if (j.contains("resolution")) {
    if (!j["resolution"].is_number_integer() || j["resolution"].get<int>() < 8) {
      throw ConfigError("config.resolution: expected an integer >= 8");
    }
    cfg.resolution = j["resolution"].get<int>();
  }
  get_num("eps_fiber", 0.0, kInf, cfg.eps_fiber);
  get_num("coverage_threshold", 0.0, 1.0, cfg.coverage_threshold);
  get_num("tol_convexity", 0.0, kInf, cfg.tol_convexity);
  get_num("eps_gap", 0.0, kInf, cfg.eps_gap);
  if (j.contains("radius_hops")) {
    if (!j["radius_hops"].is_number_integer() || j["radius_hops"].get<int>() < 1) {
      throw ConfigError("config.radius_hops: expected an integer >= 1");
    }
    cfg.radius_hops = j["radius_hops"].get<int>();
  }
  if (j.contains("pair_budget")) {
    if (!j["pair_budget"].is_number_integer() || j["pair_budget"].get<int>() < 1) {
      throw ConfigError("config.pair_budget: expected an integer >= 1");
    }
    cfg.pair_budget = j["pair_budget"].get<int>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() || j["seed"].get<long long>() < 0) {
      throw ConfigError("config.seed: expected a nonnegative integer");
    }
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("weak")) {
    if (!j["weak"].is_boolean()) throw ConfigError("config.weak: expected a boolean");
    cfg.weak = j["weak"].get<bool>();
  }
  if (j.contains("out_dir")) {
    if (!j["out_dir"].is_string()) throw ConfigError("config.out_dir: expected a path");
    cfg.out_dir = j["out_dir"].get<std::string>();
  }
  return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  ojson j;
  try {
    j = ojson::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError("config: '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_run_config(j);
}

// ---------------------------------------------------------------------------
// CSV ingestion: one row per point, domain coordinates then target value;
// optional adjacency file with one "i,j" edge per row.

namespace detail {

inline std::vector<std::vector<double>> load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("csv: cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string trimmed;
    for (char ch : line) {
      if (!std::isspace(static_cast<unsigned char>(ch))) trimmed += ch;
    }
    if (trimmed.empty() || trimmed[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(trimmed);
    std::string cell;
    bool bad = false;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) bad = true;
      } catch (const std::exception&) {
        bad = true;
      }
      if (bad) break;
    }
    if (bad) {
      if (rows.empty() && lineno == 1) continue;  // tolerate a header line
      throw ConfigError("csv: '" + path + "' line " + std::to_string(lineno) +
                        ": non-numeric cell");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

inline SampledMap sampled_map_from_csv(const CsvSpec& spec) {
  SampledMap f;
  f.target = spec.target.make();
  const int want_cols = spec.domain_dim + f.target.dim;
  auto rows = detail::load_csv(spec.points_file);
  if (rows.empty()) throw ConfigError("csv: '" + spec.points_file + "' has no data rows");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) != want_cols) {
      throw ConfigError("csv: '" + spec.points_file + "' row " + std::to_string(r + 1) + " has " +
                        std::to_string(rows[r].size()) + " columns, expected " +
                        std::to_string(want_cols) + " (domain + value)");
    }
    Vec p(spec.domain_dim), v(f.target.dim);
    for (int i = 0; i < spec.domain_dim; ++i) p[i] = rows[r][i];
    for (int i = 0; i < f.target.dim; ++i) v[i] = rows[r][spec.domain_dim + i];
    f.domain_points.push_back(p);
    f.values.push_back(v);
  }
  if (!spec.adjacency_file.empty()) {
    auto edges = detail::load_csv(spec.adjacency_file);
    for (std::size_t r = 0; r < edges.size(); ++r) {
      if (edges[r].size() != 2) {
        throw ConfigError("csv: '" + spec.adjacency_file + "' row " + std::to_string(r + 1) +
                          ": expected two columns i,j");
      }
      int i = static_cast<int>(edges[r][0]), j = static_cast<int>(edges[r][1]);
      if (i < 0 || j < 0 || i >= static_cast<int>(f.domain_points.size()) ||
          j >= static_cast<int>(f.domain_points.size()) ||
          edges[r][0] != i || edges[r][1] != j) {
        throw ConfigError("csv: '" + spec.adjacency_file + "' row " + std::to_string(r + 1) +
                          ": edge endpoints out of range");
      }
      f.adjacency.push_back({i, j});
    }
  }
  try {
    validate_sampled_map(f);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("csv: invalid sampled map: ") + e.what());
  }
  return f;
}

// ---------------------------------------------------------------------------
// Pipeline.

struct CheckRow {
  std::string name;
  bool pass = false;
  bool required = true;  // informative rows never fail the run
  std::string detail;
};

struct RunOutcome {
  ojson report;
  std::vector<CheckRow> checks;
  bool pass = true;
};

namespace detail {

inline ojson subgroup_json(const ClosedSubgroup& H) {
  ojson g;
  g["ambient_dim"] = H.ambient_dim;
  g["subspace_basis"] = jmat(H.subspace_basis);
  g["lattice_basis"] = jmat(H.lattice_basis);
  g["shortest_lattice"] = jnum(H.shortest_lattice);
  g["injectivity_radius"] = jnum(injectivity_radius(H));
  return g;
}

inline ojson histogram_json(const std::map<int, int>& h) {
  ojson o = ojson::object();
  for (auto [k, v] : h) o[std::to_string(k)] = v;
  return o;
}

inline ojson target_json(const TargetSpace& t) {
  ojson o;
  o["type"] = t.quotient ? "cylinder" : "euclidean";
  o["dim"] = t.dim;
  o["group"] = t.quotient ? subgroup_json(*t.quotient) : ojson(nullptr);
  return o;
}

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Expected invariants of the builtin examples, used as required checks.
struct BuiltinExpectation {
  double shortest = -1.0;  // holonomy shortest lattice vector; -1: trivial group
  int lattice_rank = 0;
  int components_per_fiber = 1;
};

inline std::optional<BuiltinExpectation> builtin_expectation(const std::string& name) {
  if (name == "t2-standard") return BuiltinExpectation{2 * kPi, 1, 1};
  if (name == "t2-doubled") return BuiltinExpectation{4 * kPi, 1, 2};
  if (name == "r2-on-t2") return BuiltinExpectation{2 * kPi, 2, 1};
  if (name == "linear-torus-rep") return BuiltinExpectation{-1.0, 0, 1};
  return std::nullopt;
}

// Waypoints of the witnessing geodesic of a weak-convexity pair, rebuilt
// from the recorded lattice coefficients.
inline std::vector<Vec> witness_waypoints(const TargetSpace& target, const Vec& a, const Vec& b,
                                          const VecI& coeffs, int steps = 8) {
  std::vector<Vec> pts;
  if (!target.quotient) {
    for (int s = 0; s <= steps; ++s) {
      pts.push_back(a + (static_cast<double>(s) / steps) * (b - a));
    }
    return pts;
  }
  const ClosedSubgroup& H = *target.quotient;
  Vec w = detail::project_off_subspace(H, a - b);
  if (coeffs.size() > 0) w -= H.lat.transpose() * coeffs.cast<double>();
  for (int s = 0; s <= steps; ++s) {
    pts.push_back(project(H, a - (static_cast<double>(s) / steps) * w).rep);
  }
  return pts;
}

}  // namespace detail

inline ojson config_json(const RunConfig& cfg) {
  ojson c;
  c["tasks"] = cfg.tasks;
  ojson src;
  if (!cfg.example.empty()) {
    src["kind"] = "builtin";
    src["example"] = cfg.example;
  } else if (cfg.model) {
    src["kind"] = "model";
    src["omega"] = jmat(cfg.model->omega);
    src["periods"] = jvec(cfg.model->periods);
    src["generators"] = jmat(cfg.model->generators);
    src["basepoint"] = jvec(cfg.model->basepoint);
    src["base_value"] = jvec(cfg.model->base_value);
  } else if (cfg.csv) {
    src["kind"] = "csv";
    src["points_file"] = cfg.csv->points_file;
    src["domain_dim"] = cfg.csv->domain_dim;
    src["adjacency_file"] = cfg.csv->adjacency_file;
    src["target_type"] = cfg.csv->target.type;
    src["target_dim"] = cfg.csv->target.dim;
  }
  c["source"] = src;
  c["resolution"] = cfg.resolution;
  c["eps_fiber"] = jnum(cfg.eps_fiber);
  c["radius_hops"] = cfg.radius_hops;
  c["coverage_threshold"] = jnum(cfg.coverage_threshold);
  c["tol_convexity"] = cfg.tol_convexity < 0 ? ojson(nullptr) : jnum(cfg.tol_convexity);
  c["eps_gap"] = cfg.eps_gap < 0 ? ojson(nullptr) : jnum(cfg.eps_gap);
  c["pair_budget"] = cfg.pair_budget;
  c["seed"] = cfg.seed;
  c["weak"] = cfg.weak;
  c["out_dir"] = cfg.out_dir;
  return c;
}

inline RunOutcome run_pipeline(const RunConfig& cfg) {
  using clock = std::chrono::steady_clock;
  RunOutcome out;
  ojson timing = ojson::object();
  auto timed = [&](const char* name, auto&& fn) {
    auto t0 = clock::now();
    fn();
    timing[name] = jnum(std::chrono::duration<double>(clock::now() - t0).count());
  };
  auto add_check = [&](const std::string& name, bool pass, bool required,
                       const std::string& detail) {
    out.checks.push_back({name, pass, required, detail});
    if (required && !pass) out.pass = false;
  };

  const bool is_rep = cfg.example == "linear-torus-rep";
  const bool is_csv = cfg.csv.has_value();
  auto expect = detail::builtin_expectation(cfg.example);

  // Model resolution (may throw UnsupportedRegime for non-closed holonomy).
  std::optional<TorusExample> tex;
  std::optional<RepExample> rex;
  if (is_rep) {
    rex = make_rep_example();
  } else if (!cfg.example.empty()) {
    tex = make_torus_example(cfg.example);
  } else if (cfg.model) {
    TorusExample ex;
    ex.name = "custom-model";
    ex.model = make_torus_model(cfg.model->omega, cfg.model->periods, cfg.model->generators);
    ex.basepoint = cfg.model->basepoint;
    ex.base_value = cfg.model->base_value;
    ex.holonomy = holonomy_group(ex.model, ex.basepoint);
    ex.mesh_group = ex.holonomy.group;
    tex = ex;
  }

  ojson holonomy_block = nullptr;
  ojson momentum_block = nullptr;
  ojson harness_block = nullptr;
  ojson normal_form_block = nullptr;
  std::vector<std::string> hypotheses;
  std::vector<std::string> disclaimers;

  if (tex) {
    hypotheses.push_back("abelian action: assumed (constant commuting generator fields)");
    hypotheses.push_back(
        "holonomy subgroup closed: verified numerically (lattice assembled from loop "
        "transports)");
  } else if (rex) {
    hypotheses.push_back("abelian action: exact (linear torus representation)");
    hypotheses.push_back("holonomy: trivial (simply connected domain)");
  }

  if (cfg.want("holonomy")) {
    timed("holonomy", [&] {
      ojson h;
      if (tex) {
        h["basepoint"] = jvec(tex->basepoint);
        h["generators"] = jmat(tex->model.generators);
        h["loop_transports"] = jmat(tex->holonomy.loop_transports);
        h["group"] = detail::subgroup_json(tex->holonomy.group);
        h["trivial"] = tex->holonomy.group.b() == 0 && tex->holonomy.group.a() == 0;
        if (expect && expect->shortest > 0) {
          double got = tex->holonomy.group.shortest_lattice;
          bool ok = std::abs(got - expect->shortest) <= 1e-9 &&
                    tex->holonomy.group.b() == expect->lattice_rank;
          add_check("holonomy-lattice", ok, true,
                    "shortest lattice vector " + detail::fmt(got) + ", expected " +
                        detail::fmt(expect->shortest) + " at rank " +
                        std::to_string(expect->lattice_rank));
        } else {
          add_check("holonomy-closed", true, true,
                    "holonomy lattice assembled; shortest vector " +
                        detail::fmt(tex->holonomy.group.shortest_lattice));
        }
      } else if (rex) {
        ClosedSubgroup trivial = trivial_subgroup(rex->rep.torus_rank());
        h["basepoint"] = jvec(Vec::Zero(2 * rex->rep.complex_dim()));
        h["generators"] = jmat(rex->rep.weights);
        h["loop_transports"] = jmat(Mat(0, rex->rep.torus_rank()));
        h["group"] = detail::subgroup_json(trivial);
        h["trivial"] = true;
        add_check("holonomy-lattice", true, true, "trivial holonomy (simply connected domain)");
      }
      holonomy_block = std::move(h);
    });
  }

  if (cfg.want("momentum") && (tex || rex)) {
    timed("momentum", [&] {
      ojson m;
      m["convention"] = "K(basepoint) = [base_value]; representatives have lattice coordinates "
                        "in [0, 1) and no subgroup-subspace component";
      ojson samples = ojson::array();
      if (tex) {
        const ClosedSubgroup& H = tex->holonomy.group;
        std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
        Vec span(tex->model.dim);
        for (int i = 0; i < tex->model.dim; ++i) {
          span[i] = std::isfinite(tex->model.periods[i]) ? tex->model.periods[i] : 2 * kPi;
        }
        for (int s = 0; s < 16; ++s) {
          Vec lift(tex->model.dim);
          for (int i = 0; i < tex->model.dim; ++i) lift[i] = uniform_in(rng, 0.0, span[i]);
          auto value = momentum_at(tex->model, H, tex->basepoint, tex->base_value, lift);
          ojson row;
          row["point"] = jvec(lift);
          row["value"] = jvec(value.rep);
          samples.push_back(row);
        }
        // Path independence modulo H: re-lifting the endpoint by deck
        // translations must not move the cylinder value.
        double worst = 0.0;
        int pairs = 0;
        bool compact = true;
        for (int i = 0; i < tex->model.dim; ++i) compact = compact && std::isfinite(span[i]);
        for (int s = 0; s < 32; ++s) {
          Vec lift(tex->model.dim);
          Vec shifted(tex->model.dim);
          for (int i = 0; i < tex->model.dim; ++i) {
            lift[i] = uniform_in(rng, 0.0, span[i]);
            double k = std::isfinite(tex->model.periods[i])
                           ? static_cast<double>(uniform_int(rng, -2, 2))
                           : 0.0;
            shifted[i] = lift[i] + k * (std::isfinite(tex->model.periods[i])
                                            ? tex->model.periods[i]
                                            : 0.0);
          }
          auto a = momentum_at(tex->model, H, tex->basepoint, tex->base_value, lift);
          auto b = momentum_at(tex->model, H, tex->basepoint, tex->base_value, shifted);
          worst = std::max(worst, cyl_distance(H, a, b));
          ++pairs;
        }
        ojson pi;
        pi["pairs"] = pairs;
        pi["max_distance"] = jnum(worst);
        m["path_independence"] = pi;
        add_check("momentum-path-independence", worst <= 1e-8, true,
                  "max cylinder distance over deck-translated lifts " + detail::fmt(worst) +
                      (compact ? "" : " (unbounded factors held fixed)"));
      } else if (rex) {
        auto mesh = rep_momentum_mesh(*rex, 3, 8);
        for (std::size_t i = 0; i < mesh.domain_points.size() && samples.size() < 16; ++i) {
          ojson row;
          row["point"] = jvec(mesh.domain_points[i]);
          row["value"] = jvec(mesh.values[i]);
          samples.push_back(row);
        }
        m["path_independence"] = nullptr;
      }
      m["samples"] = samples;
      momentum_block = std::move(m);
    });
  }

  if (cfg.want("harness")) {
    timed("harness", [&] {
      SampledMap mesh;
      std::string mesh_desc;
      if (is_csv) {
        mesh = sampled_map_from_csv(*cfg.csv);
        mesh_desc = "csv:" + cfg.csv->points_file;
        hypotheses.push_back("closedness: assumed (user-supplied sampling)");
      } else if (rex) {
        mesh = rep_momentum_mesh(*rex, std::max(2, cfg.resolution / 4),
                                 std::max(8, cfg.resolution));
        mesh_desc = "polar ball mesh on C^" + std::to_string(rex->rep.complex_dim());
        hypotheses.push_back("closedness: assumed (compact domain)");
      } else {
        for (int i = 0; i < tex->model.dim; ++i) {
          if (!std::isfinite(tex->model.periods[i])) {
            throw ConfigError(
                "harness: mesh construction needs a compact model (finite periods); sample "
                "unbounded models externally and ingest them as csv");
          }
        }
        mesh = torus_momentum_mesh(*tex, cfg.resolution);
        mesh_desc = "wrapped grid mesh at resolution " + std::to_string(cfg.resolution);
        hypotheses.push_back("closedness: assumed (compact domain)");
      }

      auto q = build_fiber_quotient(mesh, cfg.eps_fiber);
      auto fibers = fiber_connectivity_report(q);

      LocalConditionsOptions lopt;
      lopt.radius_hops = cfg.radius_hops;
      lopt.coverage_threshold = cfg.coverage_threshold;
      lopt.tol_convexity = cfg.tol_convexity;
      auto local = check_local_conditions(mesh, q, lopt);

      WeakConvexityOptions wopt;
      wopt.tol = cfg.eps_gap;
      wopt.pair_budget = cfg.pair_budget;
      wopt.seed = cfg.seed;
      wopt.weak = cfg.weak;
      auto convexity = verify_weak_convexity(mesh, q, wopt);

      ojson h;
      ojson mj;
      mj["points"] = static_cast<int>(mesh.domain_points.size());
      mj["edges"] = static_cast<int>(mesh.adjacency.size());
      mj["description"] = mesh_desc;
      h["mesh"] = mj;
      h["target"] = detail::target_json(mesh.target);

      ojson fq;
      fq["eps_fiber"] = jnum(q.eps_fiber);
      fq["buckets"] = static_cast<int>(q.bucket_value.size());
      fq["components"] = static_cast<int>(q.component_bucket.size());
      fq["histogram"] = detail::histogram_json(fibers.histogram);
      fq["all_connected"] = fibers.all_connected;
      fq["domain_components"] = q.domain_components;
      fq["warnings"] = q.warnings;
      h["fiber_quotient"] = fq;

      ojson lc;
      lc["radius_hops"] = cfg.radius_hops;
      lc["coverage_threshold"] = jnum(cfg.coverage_threshold);
      lc["interior_checked"] = local.interior_checked;
      lc["lfc_fraction"] = jnum(local.lfc_fraction);
      lc["loi_fraction"] = jnum(local.loi_fraction);
      lc["lcd_fraction"] = jnum(local.lcd_fraction);
      lc["all_fraction"] = jnum(local.all_fraction);
      ojson failures = ojson::array();
      for (int idx : local.failing_interior) {
        if (failures.size() >= 32) break;
        ojson f;
        f["index"] = idx;
        f["point"] = jvec(mesh.domain_points[idx]);
        f["witness"] = local.points[idx].witness;
        failures.push_back(f);
      }
      lc["failures"] = failures;
      lc["failures_truncated"] = local.failing_interior.size() > 32;
      lc["warnings"] = local.warnings;
      h["local_conditions"] = lc;

      ojson wc;
      wc["weak"] = cfg.weak;
      wc["is_convex"] = convexity.base.is_convex;
      wc["unique_values"] = convexity.unique_values;
      wc["pairs_checked"] = convexity.base.pairs_checked;
      wc["max_gap"] = jnum(convexity.base.max_gap);
      wc["tol"] = jnum(convexity.tol);
      if (convexity.base.witness_pair) {
        ojson wp;
        wp["i"] = convexity.base.witness_pair->first;
        wp["j"] = convexity.base.witness_pair->second;
        wc["witness_pair"] = wp;
      } else {
        wc["witness_pair"] = nullptr;
      }
      ojson wits = ojson::array();
      for (const auto& w : convexity.witnesses) {
        if (wits.size() >= 32) break;
        ojson wj;
        wj["i"] = w.i;
        wj["j"] = w.j;
        wj["ok"] = w.ok;
        wj["gap"] = jnum(w.gap);
        wj["lift_norm"] = jnum(w.lift_norm);
        ojson coeffs = ojson::array();
        for (int c = 0; c < w.lift_coeffs.size(); ++c) coeffs.push_back(w.lift_coeffs[c]);
        wj["lift_coeffs"] = coeffs;
        wj["value_i"] = jvec(q.bucket_value[w.i]);
        wj["value_j"] = jvec(q.bucket_value[w.j]);
        ojson geo = ojson::array();
        for (const Vec& p : detail::witness_waypoints(mesh.target, q.bucket_value[w.i],
                                                      q.bucket_value[w.j], w.lift_coeffs)) {
          geo.push_back(jvec(p));
        }
        wj["geodesic"] = geo;
        wits.push_back(wj);
      }
      wc["witnesses"] = wits;
      wc["witnesses_truncated"] = convexity.witnesses.size() > 32;
      h["weak_convexity"] = wc;

      disclaimers.push_back(local.proxy_note);
      disclaimers.push_back(
          "convexity verdicts hold at tolerance " + detail::fmt(convexity.tol) +
          "; a sampled check cannot certify exact convexity");
      disclaimers.push_back("fiber buckets merge values by single linkage at eps_fiber = " +
                            detail::fmt(q.eps_fiber));

      if (expect) {
        bool hist_ok = fibers.histogram.size() == 1 &&
                       fibers.histogram.count(expect->components_per_fiber) == 1;
        add_check("fiber-histogram", hist_ok, true,
                  "expected " + std::to_string(expect->components_per_fiber) +
                      " component(s) per fiber");
        add_check("weak-convexity", convexity.base.is_convex, true,
                  "max geodesic clearance " + detail::fmt(convexity.base.max_gap) + " at tol " +
                      detail::fmt(convexity.tol));
        add_check("local-conditions", local.all_fraction >= 0.99, true,
                  "LFC+LOI+LCD pass fraction " + detail::fmt(local.all_fraction) +
                      " over interior points");
      } else {
        add_check("fibers-connected", fibers.all_connected, false,
                  "informative verdict on user data");
        add_check("weak-convexity", convexity.base.is_convex, false,
                  "informative verdict on user data; max gap " +
                      detail::fmt(convexity.base.max_gap));
        add_check("local-conditions", local.all_fraction >= 0.99, false,
                  "informative verdict on user data; pass fraction " +
                      detail::fmt(local.all_fraction));
      }
      harness_block = std::move(h);
    });
  }

  if (cfg.want("normalform") && (tex || rex)) {
    timed("normalform", [&] {
      ojson nf;
      SliceSplitting split;
      TorusRepresentation nf_rep = make_torus_representation(Mat::Identity(1, 1));
      if (tex) {
        Mat chu = chu_map(tex->model, reduce_point(tex->model, tex->basepoint));
        split = splitting_from_chu(chu);
        auto chart = chart_consistency(tex->model, split, tex->basepoint, tex->base_value);
        ojson cj;
        cj["extent"] = jnum(0.5);
        cj["resolution"] = 9;
        cj["samples"] = chart.samples;
        cj["constant"] = jvec(chart.constant);
        cj["max_residual"] = jnum(chart.max_residual);
        nf["chart"] = cj;
        add_check("normal-form-chart", chart.max_residual <= 1e-6, true,
                  "max residual of lifted momentum minus local form " +
                      detail::fmt(chart.max_residual));
      } else {
        split = make_slice_splitting(Mat::Identity(rex->rep.torus_rank(), rex->rep.torus_rank()),
                                     rex->rep.torus_rank(), 0, 0, Mat(0, 0));
        nf_rep = rex->rep;
        nf["chart"] = nullptr;
      }
      ojson sj;
      sj["dim_gm"] = split.dim_gm;
      sj["dim_m"] = split.dim_m;
      sj["dim_q"] = split.dim_q;
      sj["basis"] = jmat(split.basis);
      sj["chu_q"] = jmat(split.chu_q);
      nf["splitting"] = sj;

      NormalFormMeshOptions mopt;
      mopt.eps_fiber = cfg.eps_fiber;
      LocalConditionsOptions lopt;
      lopt.radius_hops = cfg.radius_hops;
      lopt.coverage_threshold = cfg.coverage_threshold;
      lopt.tol_convexity = cfg.tol_convexity;
      auto props = check_local_properties(split, nf_rep, mopt, lopt);
      ojson pj = ojson::array();
      for (const auto& [name, lc] : props.parts) {
        ojson p;
        p["name"] = name;
        p["interior_checked"] = lc.interior_checked;
        p["all_fraction"] = jnum(lc.all_fraction);
        pj.push_back(p);
      }
      ojson lp;
      lp["parts"] = pj;
      lp["product_histogram"] = detail::histogram_json(props.product_fibers.histogram);
      lp["min_all_fraction"] = jnum(props.min_all_fraction);
      lp["all_pass"] = props.all_pass;
      nf["local_properties"] = lp;
      add_check("normal-form-local", props.all_pass, !is_csv,
                "local conditions on the model factors and their product");
      normal_form_block = std::move(nf);
    });
  }

  ojson report;
  report["schema_version"] = 1;
  ojson gen;
  gen["name"] = "cylmom";
  gen["version"] = "0.1.0";
  report["generator"] = gen;
  report["config"] = config_json(cfg);
  report["holonomy"] = holonomy_block;
  report["momentum"] = momentum_block;
  report["harness"] = harness_block;
  report["normal_form"] = normal_form_block;
  report["assumed_hypotheses"] = hypotheses;
  report["disclaimers"] = disclaimers;
  ojson checks = ojson::array();
  for (const auto& c : out.checks) {
    ojson row;
    row["name"] = c.name;
    row["pass"] = c.pass;
    row["required"] = c.required;
    row["detail"] = c.detail;
    checks.push_back(row);
  }
  ojson summary;
  summary["checks"] = checks;
  summary["pass"] = out.pass;
  report["summary"] = summary;
  ojson t;
  t["seconds"] = timing;
  report["timing"] = t;
  out.report = std::move(report);
  return out;
}

// ---------------------------------------------------------------------------
// Artifact emission.

// Witness geodesics and image samples as CSV polylines for external
// plotting.  Columns: polyline_id, kind, seq, c0..c{dim-1}.
inline std::string polylines_csv(const ojson& report) {
  int dim = 0;
  const bool have_harness = report.contains("harness") && report["harness"].is_object();
  if (have_harness) dim = report["harness"]["target"]["dim"].get<int>();
  std::string out = "polyline_id,kind,seq";
  for (int i = 0; i < dim; ++i) out += ",c" + std::to_string(i);
  out += "\n";
  if (!have_harness) return out;

  auto append_row = [&](int id, const char* kind, int seq, const ojson& coords) {
    out += std::to_string(id);
    out += ",";
    out += kind;
    out += "," + std::to_string(seq);
    for (const auto& c : coords) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", c.get<double>());
      out += ",";
      out += buf;
    }
    out += "\n";
  };

  int id = 0;
  const auto& wc = report["harness"]["weak_convexity"];
  std::set<std::string> seen_values;
  for (const auto& w : wc["witnesses"]) {
    for (const char* key : {"value_i", "value_j"}) {
      std::string tag = w[key].dump();
      if (seen_values.insert(tag).second) append_row(id++, "image_sample", 0, w[key]);
    }
  }
  for (const auto& w : wc["witnesses"]) {
    int seq = 0;
    for (const auto& p : w["geodesic"]) append_row(id, "witness_geodesic", seq++, p);
    ++id;
  }
  return out;
}

inline std::string summary_text(const RunOutcome& outcome) {
  std::string out;
  for (const auto& c : outcome.checks) {
    out += (c.pass ? "PASS " : "FAIL ") + c.name + (c.required ? "" : " (informative)") + " — " +
           c.detail + "\n";
  }
  out += std::string("RESULT ") + (outcome.pass ? "PASS" : "FAIL") + "\n";
  return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

inline void write_run_outputs(const RunOutcome& outcome, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto base = std::filesystem::path(out_dir);
  write_text_file((base / "report.json").string(), dump_report_json(outcome.report));
  write_text_file((base / "polylines.csv").string(), polylines_csv(outcome.report));
  write_text_file((base / "summary.txt").string(), summary_text(outcome));
}

// ---------------------------------------------------------------------------
// Published report schema (draft-07 subset).

inline ojson report_schema() {
  auto parse = [](const char* text) { return ojson::parse(text); };
  return parse(R"JSON({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "cylmom run report",
  "type": "object",
  "required": ["schema_version", "generator", "config", "holonomy", "momentum", "harness",
               "normal_form", "assumed_hypotheses", "disclaimers", "summary", "timing"],
  "additionalProperties": false,
  "definitions": {
    "extnumber": {"anyOf": [{"type": "number"},
                            {"type": "string", "enum": ["inf", "-inf", "nan"]}]},
    "vector": {"type": "array", "items": {"$ref": "#/definitions/extnumber"}},
    "matrix": {"type": "array", "items": {"$ref": "#/definitions/vector"}},
    "histogram": {"type": "object", "additionalProperties": {"type": "integer"}},
    "stringlist": {"type": "array", "items": {"type": "string"}},
    "subgroup": {
      "type": "object",
      "required": ["ambient_dim", "subspace_basis", "lattice_basis", "shortest_lattice",
                   "injectivity_radius"],
      "additionalProperties": false,
      "properties": {
        "ambient_dim": {"type": "integer"},
        "subspace_basis": {"$ref": "#/definitions/matrix"},
        "lattice_basis": {"$ref": "#/definitions/matrix"},
        "shortest_lattice": {"$ref": "#/definitions/extnumber"},
        "injectivity_radius": {"$ref": "#/definitions/extnumber"}
      }
    },
    "sample": {
      "type": "object",
      "required": ["point", "value"],
      "additionalProperties": false,
      "properties": {
        "point": {"$ref": "#/definitions/vector"},
        "value": {"$ref": "#/definitions/vector"}
      }
    },
    "check": {
      "type": "object",
      "required": ["name", "pass", "required", "detail"],
      "additionalProperties": false,
      "properties": {
        "name": {"type": "string"},
        "pass": {"type": "boolean"},
        "required": {"type": "boolean"},
        "detail": {"type": "string"}
      }
    },
    "witness": {
      "type": "object",
      "required": ["i", "j", "ok", "gap", "lift_norm", "lift_coeffs", "value_i", "value_j",
                   "geodesic"],
      "additionalProperties": false,
      "properties": {
        "i": {"type": "integer"},
        "j": {"type": "integer"},
        "ok": {"type": "boolean"},
        "gap": {"$ref": "#/definitions/extnumber"},
        "lift_norm": {"$ref": "#/definitions/extnumber"},
        "lift_coeffs": {"type": "array", "items": {"type": "integer"}},
        "value_i": {"$ref": "#/definitions/vector"},
        "value_j": {"$ref": "#/definitions/vector"},
        "geodesic": {"$ref": "#/definitions/matrix"}
      }
    },
    "failure": {
      "type": "object",
      "required": ["index", "point", "witness"],
      "additionalProperties": false,
      "properties": {
        "index": {"type": "integer"},
        "point": {"$ref": "#/definitions/vector"},
        "witness": {"type": "string"}
      }
    }
  },
  "properties": {
    "schema_version": {"type": "integer", "enum": [1]},
    "generator": {
      "type": "object",
      "required": ["name", "version"],
      "additionalProperties": false,
      "properties": {"name": {"type": "string"}, "version": {"type": "string"}}
    },
    "config": {
      "type": "object",
      "required": ["tasks", "source", "resolution", "eps_fiber", "radius_hops",
                   "coverage_threshold", "tol_convexity", "eps_gap", "pair_budget", "seed",
                   "weak", "out_dir"],
      "additionalProperties": false,
      "properties": {
        "tasks": {"$ref": "#/definitions/stringlist"},
        "source": {"type": "object"},
        "resolution": {"type": "integer"},
        "eps_fiber": {"$ref": "#/definitions/extnumber"},
        "radius_hops": {"type": "integer"},
        "coverage_threshold": {"$ref": "#/definitions/extnumber"},
        "tol_convexity": {"anyOf": [{"$ref": "#/definitions/extnumber"}, {"type": "null"}]},
        "eps_gap": {"anyOf": [{"$ref": "#/definitions/extnumber"}, {"type": "null"}]},
        "pair_budget": {"type": "integer"},
        "seed": {"type": "integer"},
        "weak": {"type": "boolean"},
        "out_dir": {"type": "string"}
      }
    },
    "holonomy": {
      "anyOf": [
        {"type": "null"},
        {
          "type": "object",
          "required": ["basepoint", "generators", "loop_transports", "group", "trivial"],
          "additionalProperties": false,
          "properties": {
            "basepoint": {"$ref": "#/definitions/vector"},
            "generators": {"$ref": "#/definitions/matrix"},
            "loop_transports": {"$ref": "#/definitions/matrix"},
            "group": {"$ref": "#/definitions/subgroup"},
            "trivial": {"type": "boolean"}
          }
        }
      ]
    },
    "momentum": {
      "anyOf": [
        {"type": "null"},
        {
          "type": "object",
          "required": ["convention", "path_independence", "samples"],
          "additionalProperties": false,
          "properties": {
            "convention": {"type": "string"},
            "path_independence": {
              "anyOf": [
                {"type": "null"},
                {
                  "type": "object",
                  "required": ["pairs", "max_distance"],
                  "additionalProperties": false,
                  "properties": {
                    "pairs": {"type": "integer"},
                    "max_distance": {"$ref": "#/definitions/extnumber"}
                  }
                }
              ]
            },
            "samples": {"type": "array", "items": {"$ref": "#/definitions/sample"}}
          }
        }
      ]
    },
    "harness": {
      "anyOf": [
        {"type": "null"},
        {
          "type": "object",
          "required": ["mesh", "target", "fiber_quotient", "local_conditions",
                       "weak_convexity"],
          "additionalProperties": false,
          "properties": {
            "mesh": {
              "type": "object",
              "required": ["points", "edges", "description"],
              "additionalProperties": false,
              "properties": {
                "points": {"type": "integer"},
                "edges": {"type": "integer"},
                "description": {"type": "string"}
              }
            },
            "target": {
              "type": "object",
              "required": ["type", "dim", "group"],
              "additionalProperties": false,
              "properties": {
                "type": {"type": "string", "enum": ["euclidean", "cylinder"]},
                "dim": {"type": "integer"},
                "group": {"anyOf": [{"type": "null"}, {"$ref": "#/definitions/subgroup"}]}
              }
            },
            "fiber_quotient": {
              "type": "object",
              "required": ["eps_fiber", "buckets", "components", "histogram", "all_connected",
                           "domain_components", "warnings"],
              "additionalProperties": false,
              "properties": {
                "eps_fiber": {"$ref": "#/definitions/extnumber"},
                "buckets": {"type": "integer"},
                "components": {"type": "integer"},
                "histogram": {"$ref": "#/definitions/histogram"},
                "all_connected": {"type": "boolean"},
                "domain_components": {"type": "integer"},
                "warnings": {"$ref": "#/definitions/stringlist"}
              }
            },
            "local_conditions": {
              "type": "object",
              "required": ["radius_hops", "coverage_threshold", "interior_checked",
                           "lfc_fraction", "loi_fraction", "lcd_fraction", "all_fraction",
                           "failures", "failures_truncated", "warnings"],
              "additionalProperties": false,
              "properties": {
                "radius_hops": {"type": "integer"},
                "coverage_threshold": {"$ref": "#/definitions/extnumber"},
                "interior_checked": {"type": "integer"},
                "lfc_fraction": {"$ref": "#/definitions/extnumber"},
                "loi_fraction": {"$ref": "#/definitions/extnumber"},
                "lcd_fraction": {"$ref": "#/definitions/extnumber"},
                "all_fraction": {"$ref": "#/definitions/extnumber"},
                "failures": {"type": "array", "items": {"$ref": "#/definitions/failure"}},
                "failures_truncated": {"type": "boolean"},
                "warnings": {"$ref": "#/definitions/stringlist"}
              }
            },
            "weak_convexity": {
              "type": "object",
              "required": ["weak", "is_convex", "unique_values", "pairs_checked", "max_gap",
                           "tol", "witness_pair", "witnesses", "witnesses_truncated"],
              "additionalProperties": false,
              "properties": {
                "weak": {"type": "boolean"},
                "is_convex": {"type": "boolean"},
                "unique_values": {"type": "integer"},
                "pairs_checked": {"type": "integer"},
                "max_gap": {"$ref": "#/definitions/extnumber"},
                "tol": {"$ref": "#/definitions/extnumber"},
                "witness_pair": {
                  "anyOf": [
                    {"type": "null"},
                    {
                      "type": "object",
                      "required": ["i", "j"],
                      "additionalProperties": false,
                      "properties": {"i": {"type": "integer"}, "j": {"type": "integer"}}
                    }
                  ]
                },
                "witnesses": {"type": "array", "items": {"$ref": "#/definitions/witness"}},
                "witnesses_truncated": {"type": "boolean"}
              }
            }
          }
        }
      ]
    },
    "normal_form": {
      "anyOf": [
        {"type": "null"},
        {
          "type": "object",
          "required": ["chart", "splitting", "local_properties"],
          "additionalProperties": false,
          "properties": {
            "chart": {
              "anyOf": [
                {"type": "null"},
                {
                  "type": "object",
                  "required": ["extent", "resolution", "samples", "constant", "max_residual"],
                  "additionalProperties": false,
                  "properties": {
                    "extent": {"$ref": "#/definitions/extnumber"},
                    "resolution": {"type": "integer"},
                    "samples": {"type": "integer"},
                    "constant": {"$ref": "#/definitions/vector"},
                    "max_residual": {"$ref": "#/definitions/extnumber"}
                  }
                }
              ]
            },
            "splitting": {
              "type": "object",
              "required": ["dim_gm", "dim_m", "dim_q", "basis", "chu_q"],
              "additionalProperties": false,
              "properties": {
                "dim_gm": {"type": "integer"},
                "dim_m": {"type": "integer"},
                "dim_q": {"type": "integer"},
                "basis": {"$ref": "#/definitions/matrix"},
                "chu_q": {"$ref": "#/definitions/matrix"}
              }
            },
            "local_properties": {
              "type": "object",
              "required": ["parts", "product_histogram", "min_all_fraction", "all_pass"],
              "additionalProperties": false,
              "properties": {
                "parts": {
                  "type": "array",
                  "items": {
                    "type": "object",
                    "required": ["name", "interior_checked", "all_fraction"],
                    "additionalProperties": false,
                    "properties": {
                      "name": {"type": "string"},
                      "interior_checked": {"type": "integer"},
                      "all_fraction": {"$ref": "#/definitions/extnumber"}
                    }
                  }
                },
                "product_histogram": {"$ref": "#/definitions/histogram"},
                "min_all_fraction": {"$ref": "#/definitions/extnumber"},
                "all_pass": {"type": "boolean"}
              }
            }
          }
        }
      ]
    },
    "assumed_hypotheses": {"$ref": "#/definitions/stringlist"},
    "disclaimers": {"$ref": "#/definitions/stringlist"},
    "summary": {
      "type": "object",
      "required": ["checks", "pass"],
      "additionalProperties": false,
      "properties": {
        "checks": {"type": "array", "items": {"$ref": "#/definitions/check"}},
        "pass": {"type": "boolean"}
      }
    },
    "timing": {
      "type": "object",
      "required": ["seconds"],
      "additionalProperties": false,
      "properties": {
        "seconds": {"type": "object", "additionalProperties": {"$ref": "#/definitions/extnumber"}}
      }
    }
  }
})JSON");
}

}  // namespace cylmom
