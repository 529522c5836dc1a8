#include "latdisc/norms.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "latdisc/counting.hpp"
#include "latdisc/error.hpp"
#include "latdisc/parallel.hpp"
#include "latdisc/spectral.hpp"

namespace latdisc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const NormRequest& req) {
  if (!(req.p >= 2.0) || !std::isfinite(req.p)) throw Error(ErrorCode::invalid_argument, "p must lie in [2, inf)");
  if (req.grid < 2) throw Error(ErrorCode::invalid_argument, "grid must be >= 2");
  if (!(req.H > 0.0) || !(req.R >= 0.0)) throw Error(ErrorCode::invalid_argument, "need H > 0 and R >= 0");
  if (req.radial_mode == RadialMode::exact_sweep && req.measure.kind() != MeasureKind::uniform01) {
    throw Error(ErrorCode::invalid_argument, "exact_sweep needs a uniform measure");
  }
  if (req.radial_mode == RadialMode::node_quadrature && req.nodes < 1) {
    throw Error(ErrorCode::bad_node_count, "node count must be >= 1");
  }
  if (!req.grid_offset.empty() && static_cast<int>(req.grid_offset.size()) != req.body.dim()) {
    throw Error(ErrorCode::invalid_argument, "grid offset has the wrong dimension");
  }
  if (req.body.dim() > kMaxCountDim) throw Error(ErrorCode::dimension_too_large, "counting supports d <= 5");
}

double power_mean(const std::vector<double>& inner, double p) {
  std::vector<double> powered(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) powered[i] = std::pow(inner[i], 0.5 * p);
  return std::pow(pairwise_sum(powered) / static_cast<double>(inner.size()), 1.0 / p);
}

}  // namespace

const char* to_string(RadialMode mode) {
  return mode == RadialMode::exact_sweep ? "exact_sweep" : "node_quadrature";
}

double estimate_cost(const NormRequest& req) {
  const int d = req.body.dim();
  const double cells = std::pow(static_cast<double>(req.grid), d);
  const double top = req.R + req.H * req.measure.support_hi();
  const double fibers = std::pow(4.0 * top / req.body.sigma_min() + 3.0, d - 1);
  double events;
  if (req.radial_mode == RadialMode::exact_sweep) {
    const double bottom = req.R + req.H * req.measure.support_lo();
    events = fibers + volume(req.body) * (std::pow(top, d) - std::pow(bottom, d));
  } else {
    const int n = req.measure.kind() == MeasureKind::dirac ? 1 : req.nodes;
    events = n * fibers;
  }
  return cells * std::max(1.0, events);
}

std::vector<double> inner_radial_values(const NormRequest& req) {
  validate(req);
  if (estimate_cost(req) > req.budget) {
    throw Error(ErrorCode::budget_exceeded, "estimated work exceeds the configured budget");
  }
  const int d = req.body.dim();
  const int G = req.grid;
  std::array<double, kMaxCountDim> shift{};
  for (int i = 0; i < d && !req.grid_offset.empty(); ++i) {
    // Integer shifts are periods of D; drop them so the grid is identical.
    shift[i] = req.grid_offset[i] - std::floor(req.grid_offset[i]);
  }
  std::size_t cells = 1;
  for (int i = 0; i < d; ++i) cells *= static_cast<std::size_t>(G);
  const double vol = volume(req.body);
  std::vector<QuadratureNode> nodes;
  if (req.radial_mode == RadialMode::node_quadrature) {
    nodes = quadrature_nodes(req.measure, req.H, req.R, req.nodes);
    for (const auto& q : nodes) {
      if (req.normalized && !(q.node > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "normalized norm needs radial nodes > 0");
      }
    }
  }
  const double lo = req.R + req.H * req.measure.support_lo();
  const double width = req.H * (req.measure.support_hi() - req.measure.support_lo());
  std::vector<double> inner(cells, 0.0);
  parallel_for(cells, [&](std::size_t cell) {
    std::array<double, kMaxCountDim> x{};
    std::size_t rest = cell;
    for (int i = 0; i < d; ++i) {
      x[i] = (static_cast<double>(rest % G) + 0.5) / G + shift[i];
      rest /= G;
    }
    const std::span<const double> xs(x.data(), d);
    if (req.radial_mode == RadialMode::exact_sweep) {
      inner[cell] = radial_l2_exact(req.body, xs, lo, width, req.normalized);
      return;
    }
    double acc = 0.0;
    for (const auto& q : nodes) {
      const double D = static_cast<double>(count_lattice_points(req.body, q.node, xs)) - std::pow(q.node, d) * vol;
      const double w = req.normalized ? std::pow(q.node, -(d - 1.0)) : 1.0;
      acc += q.weight * w * D * D;
    }
    inner[cell] = acc;
  });
  return inner;
}

std::vector<double> mixed_norms(const NormRequest& req, const std::vector<double>& ps) {
  for (double p : ps) {
    if (!(p >= 2.0) || !std::isfinite(p)) throw Error(ErrorCode::invalid_argument, "p must lie in [2, inf)");
  }
  const auto inner = inner_radial_values(req);
  std::vector<double> out;
  out.reserve(ps.size());
  for (double p : ps) out.push_back(power_mean(inner, p));
  return out;
}

double mixed_norm(const NormRequest& req) { return mixed_norms(req, {req.p}).front(); }

ParsevalValue mixed_norm_parseval_p2(const ConvexBody& body, const DilationMeasure& measure, double H, double R,
                                     long N, bool normalized) {
  const int d = body.dim();
  if (N < 2) throw Error(ErrorCode::invalid_argument, "truncation must be >= 2");
  const double w = normalized ? -(d - 1.0) : 0.0;
  const double top = R + H * measure.support_hi();
  if (normalized && !(R + H * measure.support_lo() > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "normalized norm needs radii > 0");
  }
  const long N2 = N * N;
  const bool dirac = measure.kind() == MeasureKind::dirac;
  const double r_dirac = R + H * measure.support_lo();

  // Squared transform at r n, weighted by r^{2d+w} and averaged over mu.
  auto radial_mass = [&](double rho, double scale) {
    auto f = [&](double r) {
      const double F = scale * ft_ball_radial(d, r * rho);
      return std::pow(r, 2.0 * d + w) * F * F;
    };
    if (dirac) return f(r_dirac);
    const int n = std::min(1 << 14, 32 + static_cast<int>(std::ceil(8.0 * rho * H)));
    double acc = 0.0;
    for (const auto& q : quadrature_nodes(measure, H, R, n)) acc += q.weight * f(q.node);
    return acc;
  };

  std::vector<double> terms;
  if (body.kind() == BodyKind::ball) {
    // Radial: group lattice points by |n|^2.
    std::vector<std::int64_t> shell(static_cast<std::size_t>(N2) + 1, 0);
    for_each_lattice_point(d, N2, [&](std::span<const long> n) {
      long s = 0;
      for (long c : n) s += c * c;
      ++shell[static_cast<std::size_t>(s)];
    });
    std::vector<std::size_t> present;
    for (std::size_t s = 1; s < shell.size(); ++s)
      if (shell[s] > 0) present.push_back(s);
    terms.assign(present.size(), 0.0);
    parallel_for(present.size(), [&](std::size_t i) {
      const std::size_t s = present[i];
      terms[i] = static_cast<double>(shell[s]) * radial_mass(std::sqrt(static_cast<double>(s)), 1.0);
    });
  } else {
    std::vector<IntVec> pts;
    for_each_lattice_point(d, N2, [&](std::span<const long> n) { pts.emplace_back(n.begin(), n.end()); });
    terms.assign(pts.size(), 0.0);
    parallel_for(pts.size(), [&](std::size_t i) {
      double n2 = 0.0;
      std::array<double, kMaxBodyDim> eta{};
      for (int a = 0; a < d; ++a) {
        double row = 0.0;
        for (int b = 0; b < d; ++b) row += body.inv_t(a, b) * static_cast<double>(pts[i][b]);
        eta[a] = row;
        n2 += static_cast<double>(pts[i][a] * pts[i][a]);
      }
      if (n2 == 0.0) return;
      double rho2 = 0.0;
      for (int a = 0; a < d; ++a) rho2 += eta[a] * eta[a];
      terms[i] = radial_mass(std::sqrt(rho2), 1.0 / body.abs_det());
    });
  }
  ParsevalValue out;
  out.truncation = N;
  out.decay_constant = ft_decay_constant(body);
  // r^{2d+w} C^2 (r |n|)^{-(d+1)} summed over |n| > N, worst case over the support.
  const double rmax = top;
  const double rmin = R + H * measure.support_lo();
  const double rfactor = std::max(std::pow(rmax, d - 1.0 + w), rmin > 0.0 ? std::pow(rmin, d - 1.0 + w) : 0.0);
  out.tail_bound = out.decay_constant * out.decay_constant * rfactor *
                   lattice_tail_sum(d, d + 1.0, static_cast<double>(N));
  out.value = std::sqrt(pairwise_sum(terms));
  return out;
}

CriticalIndex critical_index(int d, double beta) {
  if (d < 2) throw Error(ErrorCode::invalid_argument, "d must be >= 2");
  if (!(beta >= 0.0)) throw Error(ErrorCode::invalid_argument, "beta must be >= 0");
  const double b = beta;
  if (d == 2) {
    if (b < 1.0) return {4.0 / (1.0 - b), (1.0 + b) / 4.0};
    if (b == 1.0) return {kInf, 1.0};
    return {kInf, 0.5};
  }
  if (d == 3) {
    if (b <= 0.5) return {(3.0 - 2.0 * b) / (1.0 - b), (1.0 - b) / (3.0 - 2.0 * b)};
    if (b < 1.0) return {6.0 / (2.0 - b), (1.0 + b) / 6.0};
    if (b == 1.0) return {6.0, 5.0 / 6.0};
    return {6.0, 1.0 / 3.0};
  }
  const double dd = d;
  if (b < 1.0) return {(2.0 * dd - 4.0 * b) / (dd - 1.0 - 2.0 * b), (dd - 1.0 - 2.0 * b) / (2.0 * dd - 4.0 * b)};
  if (b == 1.0) return {(2.0 * dd - 4.0) / (dd - 3.0), (dd - 1.0) / (2.0 * dd - 4.0)};
  return {(2.0 * dd - 4.0) / (dd - 3.0), (dd - 3.0) / (2.0 * dd - 4.0)};
}

ScalingFit scaling_fit(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 4) throw Error(ErrorCode::invalid_argument, "scaling fit needs at least 4 samples");
  const double n = static_cast<double>(samples.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [R, v] : samples) {
    if (!(R > 0.0) || !(v > 0.0)) throw Error(ErrorCode::invalid_argument, "samples must be positive");
    mx += std::log(R);
    my += std::log(v);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [R, v] : samples) {
    const double dx = std::log(R) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(v) - my);
  }
  if (!(sxx > 1e-300)) throw Error(ErrorCode::degenerate_fit, "all R values are equal");
  ScalingFit fit;
  fit.slope = sxy / sxx;
  double rss = 0.0;
  for (const auto& [R, v] : samples) {
    const double e = std::log(v) - my - fit.slope * (std::log(R) - mx);
    rss += e * e;
  }
  fit.standard_error = std::sqrt(rss / (n - 2.0) / sxx);
  return fit;
}

BlowupTable blowup_probe(const NormRequest& base, const std::vector<double>& R_list, const std::vector<double>& p_list) {
  BlowupTable table;
  table.prediction = critical_index(base.body.dim(), base.measure.beta_finite());
  table.R_list = R_list;
  table.p_list = p_list;
  for (double p : p_list) {
    if (p > table.prediction.A) throw Error(ErrorCode::invalid_argument, "probe exponents must not exceed the critical index");
  }
  for (double R : R_list) {
    NormRequest req = base;
    req.R = R;
    table.values.push_back(mixed_norms(req, p_list));
  }
  return table;
}

}  // namespace latdisc
