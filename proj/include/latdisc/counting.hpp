#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "latdisc/bodies.hpp"

namespace latdisc {

/// Largest dimension the counting routines enumerate.
inline constexpr int kMaxCountDim = 5;

/// #{k in Z^d : gauge(k + x) <= r}. Boundary points count as inside.
/// One quadratic solve per fiber along the first axis.
std::int64_t count_lattice_points(const ConvexBody& body, double r, std::span<const double> x);

/// Same count by testing every point of the bounding box. Slow; kept as an
/// independent route for cross-checks.
std::int64_t count_by_gauge_scan(const ConvexBody& body, double r, std::span<const double> x);

/// count - r^d |body|, times r^{-(d-1)/2} when normalized.
double discrepancy(const ConvexBody& body, double r, std::span<const double> x, bool normalized);

struct Breakpoint {
  double radius = 0.0;
  std::int64_t multiplicity = 0;
};

/// Entry radii of lattice points in (R, R+H], merged and sorted, plus the
/// number of points already inside at R.
struct RadialProfile {
  std::vector<double> translation;
  double R = 0.0;
  double H = 0.0;
  std::vector<Breakpoint> breakpoints;
  std::int64_t base_count = 0;

  /// Count at radius r in [R, R+H].
  std::int64_t count_at(double r) const;
};

RadialProfile radial_breakpoints(const ConvexBody& body, std::span<const double> x, double R, double H);

/// (1/H) int_R^{R+H} w(r) D(r)^2 dr with w = r^{-(d-1)} (normalized) or 1.
/// Each segment between breakpoints is integrated in closed form. The
/// normalized weight needs R > 0.
double radial_l2_exact(const ConvexBody& body, std::span<const double> x, double R, double H,
                       bool normalized = true);

/// Same integral from a precomputed profile.
double radial_l2_from_profile(const RadialProfile& profile, int dim, double volume, bool normalized);

}  // namespace latdisc
