#include "latdisc/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "latdisc/acceptance.hpp"
#include "latdisc/arith.hpp"
#include "latdisc/counting.hpp"
#include "latdisc/error.hpp"
#include "latdisc/norms.hpp"
#include "latdisc/parallel.hpp"
#include "latdisc/spectral.hpp"

namespace latdisc {

namespace {

const std::set<std::string> kExperiments = {"count",    "discrepancy", "mixed-norm", "parseval-check", "sandwich",
                                            "gfunction", "cramer",     "divergence", "verify"};

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::config_invalid, msg); }

// Non-finite numbers are written as strings; JSON has no literal for them.
Json num(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

class Params {
 public:
  explicit Params(const Json& j) : j_(j) {
    if (!j_.is_object()) invalid("\"params\" must be an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  double number(const char* key, std::optional<double> fallback = std::nullopt) const {
    if (!j_.contains(key)) {
      if (fallback) return *fallback;
      invalid(std::string("params.") + key + " is required");
    }
    if (!j_[key].is_number()) invalid(std::string("params.") + key + " must be a number");
    return j_[key].get<double>();
  }

  long integer(const char* key, std::optional<long> fallback = std::nullopt) const {
    if (!j_.contains(key)) {
      if (fallback) return *fallback;
      invalid(std::string("params.") + key + " is required");
    }
    if (!j_[key].is_number_integer()) invalid(std::string("params.") + key + " must be an integer");
    return j_[key].get<long>();
  }

  bool flag(const char* key, bool fallback) const {
    if (!j_.contains(key)) return fallback;
    if (!j_[key].is_boolean()) invalid(std::string("params.") + key + " must be true or false");
    return j_[key].get<bool>();
  }

  std::string text(const char* key, const std::string& fallback) const {
    if (!j_.contains(key)) return fallback;
    if (!j_[key].is_string()) invalid(std::string("params.") + key + " must be a string");
    return j_[key].get<std::string>();
  }

  /// A number or a non-empty list of numbers.
  std::vector<double> list(const char* key, std::optional<std::vector<double>> fallback = std::nullopt) const {
    if (!j_.contains(key)) {
      if (fallback) return *fallback;
      invalid(std::string("params.") + key + " is required");
    }
    const auto& v = j_[key];
    std::vector<double> out;
    if (v.is_number()) {
      out.push_back(v.get<double>());
    } else if (v.is_array()) {
      for (const auto& e : v) {
        if (!e.is_number()) invalid(std::string("params.") + key + " must hold numbers");
        out.push_back(e.get<double>());
      }
    } else {
      invalid(std::string("params.") + key + " must be a number or a list");
    }
    if (out.empty()) invalid(std::string("params.") + key + " must not be empty");
    return out;
  }

  std::vector<double> vector(const char* key, int d) const {
    if (!j_.contains(key)) return std::vector<double>(d, 0.0);
    auto v = list(key);
    if (static_cast<int>(v.size()) != d) invalid(std::string("params.") + key + " must have one entry per dimension");
    return v;
  }

  std::vector<std::vector<double>> vectors(const char* key, int d, std::vector<std::vector<double>> fallback) const {
    if (!j_.contains(key)) return fallback;
    const auto& v = j_[key];
    if (!v.is_array() || v.empty()) invalid(std::string("params.") + key + " must be a non-empty list of vectors");
    std::vector<std::vector<double>> out;
    for (const auto& e : v) {
      if (!e.is_array() || static_cast<int>(e.size()) != d) invalid(std::string("params.") + key + " entries must have d numbers");
      std::vector<double> row;
      for (const auto& c : e) {
        if (!c.is_number()) invalid(std::string("params.") + key + " entries must be numbers");
        row.push_back(c.get<double>());
      }
      out.push_back(row);
    }
    return out;
  }

 private:
  const Json& j_;
};

Json vec_json(std::span<const double> v) {
  Json a = Json::array();
  for (double c : v) a.push_back(c);
  return a;
}

ConvexBody config_body(const Json& config) {
  if (!config.contains("body")) invalid("\"body\" is required");
  return body_from_json(config["body"]);
}

DilationMeasure config_measure(const Json& config) {
  if (!config.contains("measure")) return DilationMeasure::dirac();
  return measure_from_json(config["measure"]);
}

Json norm_row_json(const NormRow& row) {
  Json j;
  j["d"] = row.d;
  j["body"] = row.body;
  j["measure"] = row.measure;
  j["beta"] = num(row.beta);
  j["p"] = row.p;
  j["H"] = row.H;
  j["R"] = row.R;
  j["G"] = row.G;
  j["radial_mode"] = row.radial_mode;
  j["value"] = num(row.value);
  j["meta_tail"] = num(row.meta_tail);
  return j;
}

NormRequest norm_request(const Json& config, const Params& params) {
  NormRequest req{config_body(config), config_measure(config)};
  req.H = params.number("H", 1.0);
  req.grid = static_cast<int>(params.integer("grid", 64));
  req.nodes = static_cast<int>(params.integer("nodes", 64));
  req.normalized = params.flag("normalized", true);
  req.budget = params.number("budget", 1e9);
  const auto mode = params.text("radial_mode", req.measure.kind() == MeasureKind::uniform01 ? "exact_sweep" : "node_quadrature");
  if (mode == "exact_sweep") {
    req.radial_mode = RadialMode::exact_sweep;
  } else if (mode == "node_quadrature") {
    req.radial_mode = RadialMode::node_quadrature;
  } else {
    invalid("params.radial_mode must be exact_sweep or node_quadrature");
  }
  if (params.has("grid_offset")) req.grid_offset = params.vector("grid_offset", req.body.dim());
  if (req.grid < 2) invalid("params.grid must be >= 2");
  return req;
}

NormRow base_row(const NormRequest& req) {
  NormRow row;
  row.d = req.body.dim();
  row.body = to_string(req.body.kind());
  row.measure = to_string(req.measure.kind());
  row.beta = req.measure.beta();
  row.H = req.H;
  row.radial_mode = to_string(req.radial_mode);
  return row;
}

Report run_count(const Json& config, const Params& params, bool with_discrepancy) {
  const auto body = config_body(config);
  const auto x = params.vector("x", body.dim());
  const auto rs = params.list("r");
  const bool normalized = params.flag("normalized", false);
  Report rep;
  rep.columns = with_discrepancy ? std::vector<std::string>{"r", "count", "discrepancy"}
                                 : std::vector<std::string>{"r", "count"};
  for (double r : rs) {
    if (!(r > 0.0)) invalid("params.r must be > 0");
    Json row;
    row["r"] = r;
    const auto c = count_lattice_points(body, r, x);
    row["count"] = c;
    if (with_discrepancy) row["discrepancy"] = discrepancy(body, r, x, normalized);
    rep.results.push_back(row);
  }
  if (rs.size() == 1) rep.extra["count"] = rep.results[0]["count"];
  rep.extra["x"] = vec_json(x);
  return rep;
}

Report run_mixed_norm(const Json& config, const Params& params) {
  auto req = norm_request(config, params);
  const auto ps = params.list("p", std::vector<double>{2.0});
  const auto Rs = params.list("R");
  const auto index = critical_index(req.body.dim(), req.measure.beta_finite());
  Report rep;
  rep.columns = norm_csv_columns();
  for (double R : Rs) {
    req.R = R;
    const auto values = mixed_norms(req, ps);
    std::vector<double> coarse(ps.size(), 0.0);
    const bool can_halve = req.grid >= 4 && req.grid % 2 == 0;
    if (can_halve) {
      auto half = req;
      half.grid = req.grid / 2;
      coarse = mixed_norms(half, ps);
    }
    for (std::size_t i = 0; i < ps.size(); ++i) {
      auto row = base_row(req);
      row.p = ps[i];
      row.R = R;
      row.G = req.grid;
      row.value = values[i];
      // Change against the half-resolution grid, a self-convergence indicator.
      row.meta_tail = can_halve ? std::abs(values[i] - coarse[i]) : std::nan("");
      rep.results.push_back(norm_row_json(row));
    }
  }
  rep.extra["critical_index"] = Json{{"A", num(index.A)}, {"alpha", index.alpha}};
  return rep;
}

Report run_parseval(const Json& config, const Params& params) {
  auto req = norm_request(config, params);
  req.p = 2.0;
  const auto Rs = params.list("R");
  const long N = params.integer("N", 400);
  const bool grid_route = params.flag("grid_route", true);
  Report rep;
  rep.columns = norm_csv_columns();
  Json gaps = Json::array();
  for (double R : Rs) {
    req.R = R;
    const auto pv = mixed_norm_parseval_p2(req.body, req.measure, req.H, R, N, req.normalized);
    auto row = base_row(req);
    row.p = 2.0;
    row.R = R;
    row.G = 0;
    row.radial_mode = "parseval";
    row.value = pv.value;
    row.meta_tail = pv.tail_bound;
    rep.results.push_back(norm_row_json(row));
    if (grid_route) {
      auto grid_row = base_row(req);
      grid_row.p = 2.0;
      grid_row.R = R;
      grid_row.G = req.grid;
      grid_row.value = mixed_norm(req);
      grid_row.meta_tail = 0.0;
      rep.results.push_back(norm_row_json(grid_row));
      gaps.push_back(std::abs(grid_row.value - pv.value) / pv.value);
    }
  }
  rep.extra["relative_gap"] = gaps;
  return rep;
}

Report run_sandwich(const Json& config, const Params& params) {
  const auto body = config_body(config);
  const auto x = params.vector("x", body.dim());
  const auto rs = params.list("r");
  const double delta = params.number("delta", 0.05);
  const long N = params.integer("N", 0);
  const double eps = params.number("epsilon", inradius_about_origin(body));
  const Mollifier mollifier(body.dim(), eps, params.number("lambda", 8.0));
  Report rep;
  rep.columns = {"r", "lower", "exact", "upper", "tail", "N", "contained"};
  for (double r : rs) {
    const auto s = mollified_discrepancy(body, r, x, delta, mollifier, N);
    const double exact = discrepancy(body, r, x, false);
    Json row;
    row["r"] = r;
    row["lower"] = s.lower;
    row["exact"] = exact;
    row["upper"] = s.upper;
    row["tail"] = s.tail;
    row["N"] = s.truncation;
    row["contained"] = s.lower <= exact && exact <= s.upper;
    rep.results.push_back(row);
  }
  return rep;
}

Report run_gfunction(const Json& config, const Params& params) {
  const auto body = config_body(config);
  const int d = body.dim();
  const long K = params.integer("K", 4);
  const long N = params.integer("N", 64);
  const double tol = params.number("tol", 1e-12);
  std::vector<double> shifted(d, 0.0);
  shifted[0] = 0.5;
  const auto points = params.vectors("points", d, {std::vector<double>(d, 0.0), shifted});
  Report rep;
  rep.columns = {"kind", "at", "value", "tail", "suspected"};
  if (params.has("k")) {
    for (const auto& kv : params.vectors("k", d, {})) {
      IntVec k;
      for (double c : kv) {
        if (c != std::floor(c)) invalid("params.k entries must be integers");
        k.push_back(static_cast<long>(c));
      }
      const auto s = g_limit_coefficient(body, k, N, tol);
      Json row;
      row["kind"] = "coefficient";
      row["at"] = vec_json(kv);
      row["value"] = s.value.real();
      row["tail"] = num(s.tail_bound);
      row["suspected"] = s.suspected;
      rep.results.push_back(row);
    }
  }
  for (const auto& x : points) {
    const auto g = g_limit_eval(body, x, K, N, tol);
    Json row;
    row["kind"] = "value";
    row["at"] = vec_json(x);
    row["value"] = g.value;
    row["tail"] = num(g.tail_bound);
    row["suspected"] = g.suspected;
    rep.results.push_back(row);
  }
  return rep;
}

Report run_cramer(const Params& params) {
  const auto Ts = params.list("T", std::vector<double>{1e4, 1e5, 1e6});
  const long n_max = params.integer("n_max", 10000);
  const auto series = cramer_constant(n_max);
  const double target = series.partial + series.tail_estimate;
  Report rep;
  rep.columns = {"T", "integral", "series", "gap"};
  for (double T : Ts) {
    if (!(T >= 1.0)) invalid("params.T must be >= 1");
    const double v = cramer_integral(T);
    Json row;
    row["T"] = T;
    row["integral"] = v;
    row["series"] = target;
    row["gap"] = std::abs(v - target) / target;
    rep.results.push_back(row);
  }
  rep.extra["series_partial"] = series.partial;
  rep.extra["series_tail_estimate"] = series.tail_estimate;
  rep.extra["root"] = series.root;
  return rep;
}

Report run_divergence(const Params& params) {
  const int d = static_cast<int>(params.integer("d", 4));
  const double alpha = params.number("alpha", 1.0);
  std::vector<long> Ks;
  for (double k : params.list("K", std::vector<double>{8, 16, 32, 64})) {
    if (k != std::floor(k) || k < 0) invalid("params.K entries must be non-negative integers");
    Ks.push_back(static_cast<long>(k));
  }
  const auto S = divergence_probe(d, alpha, Ks);
  Report rep;
  rep.columns = {"K", "S"};
  for (std::size_t i = 0; i < Ks.size(); ++i) rep.results.push_back(Json{{"K", Ks[i]}, {"S", S[i]}});
  return rep;
}

Report run_verify(const Json& config) {
  std::uint64_t seed = kDefaultSeed;
  if (config.contains("seed")) seed = config["seed"].get<std::uint64_t>();
  auto results = run_criteria(seed);
  const auto dir = std::filesystem::temp_directory_path() / ("latdisc-verify-" + config_hash(config));
  results.push_back(determinism_criterion(seed, results, dir.string()));
  return criteria_report(results, config);
}

std::string csv_cell(const Json& v) {
  std::string s;
  if (v.is_string()) {
    s = v.get<std::string>();
  } else if (v.is_boolean()) {
    s = v.get<bool>() ? "true" : "false";
  } else if (v.is_number_integer()) {
    s = std::to_string(v.get<std::int64_t>());
  } else if (v.is_number()) {
    s = format_double(v.get<double>());
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + csv_cell(v[i]);
  } else if (v.is_null()) {
    s = "";
  } else {
    s = v.dump();
  }
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return s;
}

}  // namespace

Json apply_overrides(Json config, const Overrides& o) {
  if (!config.is_object()) invalid("config must be a JSON object");
  if (o.out) config["output"]["path"] = *o.out;
  if (o.seed) config["seed"] = *o.seed;
  if (o.p) config["params"]["p"] = *o.p;
  if (o.R) config["params"]["R"] = *o.R;
  if (o.grid) config["params"]["grid"] = *o.grid;
  return config;
}

std::string config_hash(const Json& config) {
  // The output block only says where the report goes, so it is left out.
  nlohmann::json sorted = nlohmann::json::parse(config.dump());
  if (sorted.is_object()) sorted.erase("output");
  const std::string text = sorted.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string output_format(const Json& config) {
  if (!config.contains("output")) return "json";
  const auto& out = config["output"];
  if (!out.is_object()) invalid("\"output\" must be an object");
  std::string fallback = "json";
  if (out.contains("path") && out["path"].is_string()) {
    const auto path = out["path"].get<std::string>();
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) fallback = "csv";
  }
  if (out.contains("format") && !out["format"].is_string()) invalid("output.format must be a string");
  const std::string fmt = out.value("format", fallback);
  if (fmt != "csv" && fmt != "json") invalid("output.format must be csv or json");
  return fmt;
}

std::string output_path(const Json& config) {
  if (!config.contains("output") || !config["output"].contains("path")) return "";
  if (!config["output"]["path"].is_string()) invalid("output.path must be a string");
  return config["output"]["path"].get<std::string>();
}

Report run_experiment(const Json& config) {
  if (!config.is_object()) invalid("config must be a JSON object");
  if (!config.contains("experiment") || !config["experiment"].is_string()) invalid("\"experiment\" is required");
  const auto name = config["experiment"].get<std::string>();
  if (!kExperiments.count(name)) invalid("unknown experiment: " + name);
  if (config.contains("seed") && !config["seed"].is_number_unsigned()) invalid("\"seed\" must be a non-negative integer");
  output_format(config);
  output_path(config);
  static const Json kEmpty = Json::object();
  const Params params(config.contains("params") ? config["params"] : kEmpty);

  Report rep;
  if (name == "count") rep = run_count(config, params, false);
  else if (name == "discrepancy") rep = run_count(config, params, true);
  else if (name == "mixed-norm") rep = run_mixed_norm(config, params);
  else if (name == "parseval-check") rep = run_parseval(config, params);
  else if (name == "sandwich") rep = run_sandwich(config, params);
  else if (name == "gfunction") rep = run_gfunction(config, params);
  else if (name == "cramer") rep = run_cramer(params);
  else if (name == "divergence") rep = run_divergence(params);
  else rep = run_verify(config);
  rep.experiment = name;
  rep.config_hash = config_hash(config);
  return rep;
}

std::string render_report(const Report& report, const std::string& format) {
  if (format == "json") {
    Json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["config_hash"] = report.config_hash;
    j["experiment"] = report.experiment;
    for (const auto& [key, value] : report.extra.items()) j[key] = value;
    j["results"] = report.results;
    return j.dump(2) + "\n";
  }
  if (format != "csv") throw Error(ErrorCode::invalid_argument, "format must be csv or json");
  std::ostringstream out;
  out << "# tool=" << kToolName << " version=" << kToolVersion << " config_hash=" << report.config_hash
      << " experiment=" << report.experiment << "\n";
  for (std::size_t i = 0; i < report.columns.size(); ++i) out << (i ? "," : "") << report.columns[i];
  out << "\n";
  for (const auto& row : report.results) {
    for (std::size_t i = 0; i < report.columns.size(); ++i) {
      const auto& key = report.columns[i];
      out << (i ? "," : "") << (row.contains(key) ? csv_cell(row[key]) : std::string());
    }
    out << "\n";
  }
  return out.str();
}

void emit_report(const Report& report, const std::string& format, const std::string& path) {
  if (report.results.empty()) throw Error(ErrorCode::io_error, "no results to write");
  if (path.empty()) throw Error(ErrorCode::io_error, "no output path");
  const std::string text = render_report(report, format);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::io_error, "cannot open " + path);
  f << text;
  f.close();
  if (!f) throw Error(ErrorCode::io_error, "failed writing " + path);
}

}  // namespace latdisc
