#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "latdisc/bodies.hpp"
#include "latdisc/measures.hpp"

namespace latdisc {

enum class RadialMode { exact_sweep, node_quadrature };

const char* to_string(RadialMode mode);

struct NormRequest {
  ConvexBody body;
  DilationMeasure measure;
  double p = 2.0;
  double H = 1.0;
  double R = 1.0;
  int grid = 64;  // points per torus axis
  RadialMode radial_mode = RadialMode::node_quadrature;
  int nodes = 64;  // radial nodes for node_quadrature
  bool normalized = true;
  std::vector<double> grid_offset{};  // per-axis shift of the midpoint grid; empty = 0
  double budget = 1e9;              // cap on grid cells x radial events
};

/// Midpoint-rule value of {int_T (int r^w D(r body - x)^2 dmu_{H,R})^{p/2} dx}^{1/p},
/// w = -(d-1) when normalized.
double mixed_norm(const NormRequest& req);

/// Same for several exponents, sharing the inner radial integrals.
std::vector<double> mixed_norms(const NormRequest& req, const std::vector<double>& ps);

/// Inner radial integrals on the torus grid, in grid order.
std::vector<double> inner_radial_values(const NormRequest& req);

/// Rough cost of a request in radial events; compared against req.budget.
double estimate_cost(const NormRequest& req);

struct ParsevalValue {
  double value = 0.0;
  double tail_bound = 0.0;     // bound on the omitted squared mass
  double decay_constant = 0.0; // C in |chi_hat(xi)| <= C |xi|^{-(d+1)/2}
  long truncation = 0;
};

/// The p = 2 norm through Parseval: sqrt(int sum_{0<|n|<=N} r^{2d} |chi_hat(r n)|^2 r^w dmu_{H,R}).
ParsevalValue mixed_norm_parseval_p2(const ConvexBody& body, const DilationMeasure& measure, double H, double R,
                                     long N, bool normalized = true);

struct CriticalIndex {
  double A = 0.0;  // +inf when every p is admissible
  double alpha = 0.0;
};

CriticalIndex critical_index(int d, double beta);

struct ScalingFit {
  double slope = 0.0;
  double standard_error = 0.0;
};

/// Least-squares slope of log(value) against log(R).
ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& samples);

struct BlowupTable {
  CriticalIndex prediction;
  std::vector<double> R_list;
  std::vector<double> p_list;
  std::vector<std::vector<double>> values;  // values[i][j] at R_list[i], p_list[j]
};

BlowupTable blowup_probe(const NormRequest& base, const std::vector<double>& R_list, const std::vector<double>& p_list);

}  // namespace latdisc
