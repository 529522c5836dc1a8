#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "latdisc/bodies.hpp"
#include "latdisc/counting.hpp"
#include "latdisc/measures.hpp"
#include "latdisc/spectral.hpp"

namespace latdisc {

using Json = nlohmann::ordered_json;

Json to_json(const ConvexBody& body);
ConvexBody body_from_json(const Json& j);

Json to_json(const DilationMeasure& measure);
DilationMeasure measure_from_json(const Json& j);

Json to_json(const SpectralSum& sum);
Json to_json(const RadialProfile& profile);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// One row of the norms CSV schema.
struct NormRow {
  int d = 2;
  std::string body;
  std::string measure;
  double beta = 0.0;
  double p = 2.0;
  double H = 1.0;
  double R = 1.0;
  int G = 0;
  std::string radial_mode;
  double value = 0.0;
  double meta_tail = 0.0;
};

const std::vector<std::string>& norm_csv_columns();
std::vector<std::string> to_cells(const NormRow& row);

}  // namespace latdisc
