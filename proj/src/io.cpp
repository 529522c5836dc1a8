#include "latdisc/io.hpp"

#include <charconv>
#include <cmath>

#include "latdisc/error.hpp"

namespace latdisc {

namespace {

std::vector<double> numbers(const Json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::config_invalid, std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw Error(ErrorCode::config_invalid, std::string(what) + " must contain numbers only");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Json to_json(const ConvexBody& body) {
  const int d = body.dim();
  Json j;
  j["kind"] = to_string(body.kind());
  j["dim"] = d;
  Json m = Json::array();
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m.push_back(body.matrix()(r, c));
  j["matrix"] = m;
  Json p = Json::array();
  for (int i = 0; i < d; ++i) p.push_back(body.center()(i));
  j["center"] = p;
  return j;
}

ConvexBody body_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw Error(ErrorCode::config_invalid, "body needs a string \"kind\"");
  }
  const auto kind = j["kind"].get<std::string>();
  if (!j.contains("dim") || !j["dim"].is_number_integer()) throw Error(ErrorCode::config_invalid, "body needs an integer \"dim\"");
  const int d = j["dim"].get<int>();
  try {
    if (kind == "ball") return ConvexBody::ball(d);
    if (kind != "ellipsoid") throw Error(ErrorCode::config_invalid, "body kind must be ball or ellipsoid");
    const auto m = numbers(j.value("matrix", Json::array()), "matrix");
    if (static_cast<int>(m.size()) != d * d) throw Error(ErrorCode::config_invalid, "matrix must have dim*dim entries");
    std::vector<double> p(d, 0.0);
    if (j.contains("center")) p = numbers(j["center"], "center");
    if (static_cast<int>(p.size()) != d) throw Error(ErrorCode::config_invalid, "center must have dim entries");
    Eigen::MatrixXd M(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) M(r, c) = m[r * d + c];
    return ConvexBody::ellipsoid(M, Eigen::Map<const Eigen::VectorXd>(p.data(), d));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config_invalid) throw;
    throw Error(ErrorCode::config_invalid, e.what());
  }
}

Json to_json(const DilationMeasure& measure) {
  Json j;
  j["kind"] = to_string(measure.kind());
  if (measure.kind() == MeasureKind::power_law) j["alpha"] = measure.alpha();
  j["support"] = Json::array({measure.support_lo(), measure.support_hi()});
  return j;
}

DilationMeasure measure_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw Error(ErrorCode::config_invalid, "measure needs a string \"kind\"");
  }
  const auto kind = j["kind"].get<std::string>();
  std::vector<double> support;
  if (j.contains("support")) {
    support = numbers(j["support"], "support");
    if (support.size() != 2) throw Error(ErrorCode::config_invalid, "support must be [lo, hi]");
  }
  try {
    if (kind == "dirac") return DilationMeasure::dirac(support.empty() ? 0.0 : support[0]);
    if (kind == "uniform01") return support.empty() ? DilationMeasure::uniform01() : DilationMeasure::uniform01(support[0], support[1]);
    if (kind == "power_law") {
      if (!j.contains("alpha") || !j["alpha"].is_number()) throw Error(ErrorCode::config_invalid, "power_law needs \"alpha\"");
      return DilationMeasure::power_law(j["alpha"].get<double>());
    }
    if (kind == "smooth_bump") return DilationMeasure::smooth_bump();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config_invalid) throw;
    throw Error(ErrorCode::config_invalid, e.what());
  }
  throw Error(ErrorCode::config_invalid, "unknown measure kind: " + kind);
}

Json to_json(const SpectralSum& sum) {
  Json j;
  j["value"] = Json::array({sum.value.real(), sum.value.imag()});
  j["N"] = sum.truncation_radius;
  j["tail"] = sum.tail_bound;
  if (sum.suspected) j["suspected"] = true;
  return j;
}

Json to_json(const RadialProfile& profile) {
  Json j;
  j["translation"] = profile.translation;
  j["R"] = profile.R;
  j["H"] = profile.H;
  j["base_count"] = profile.base_count;
  Json bps = Json::array();
  for (const auto& b : profile.breakpoints) bps.push_back(Json::array({b.radius, b.multiplicity}));
  j["breakpoints"] = bps;
  return j;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

const std::vector<std::string>& norm_csv_columns() {
  static const std::vector<std::string> cols = {"d", "body", "measure", "beta", "p", "H", "R",
                                                "G", "radial_mode", "value", "meta_tail"};
  return cols;
}

std::vector<std::string> to_cells(const NormRow& row) {
  return {std::to_string(row.d), row.body,           row.measure,          format_double(row.beta),
          format_double(row.p),  format_double(row.H), format_double(row.R), std::to_string(row.G),
          row.radial_mode,       format_double(row.value), format_double(row.meta_tail)};
}

}  // namespace latdisc
