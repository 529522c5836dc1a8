#pragma once

#include <vector>

namespace latdisc {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rules are computed once per order and shared; the reference stays valid
/// for the life of the process.
const GaussLegendreRule& gauss_legendre(int n);

}  // namespace latdisc
