#include "latdisc/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "latdisc/error.hpp"
#include "latdisc/quadrature.hpp"

namespace latdisc {

using std::numbers::pi;

/// Real envelope E(zeta) of the bump transform, mu_hat = exp(-pi i zeta) E(zeta),
/// tabulated on a uniform grid and read through 6-point Lagrange interpolation.
class BumpTransformTable {
 public:
  static constexpr double kStep = 0.01;
  static constexpr double kMaxZeta = 1e4;

  BumpTransformTable() {
    const auto& rule = gauss_legendre(kNodes);
    double mass = 0.0;
    for (int i = 0; i < kNodes; ++i) {
      const double u = rule.nodes[i];
      const double psi = u * u < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0;
      mass += rule.weights[i] * psi;
    }
    // Positive half of the symmetric rule, pre-weighted.
    for (int i = kNodes / 2; i < kNodes; ++i) {
      const double u = rule.nodes[i];
      const double psi = std::exp(-1.0 / (1.0 - u * u));
      half_nodes_.push_back(u);
      half_weights_.push_back(2.0 * rule.weights[i] * psi / mass);
    }
    // Find where the envelope has decayed below double resolution.
    cutoff_ = kMaxZeta;
    int quiet = 0;
    for (double z = 20.0; z <= kMaxZeta; z += 5.0) {
      if (std::abs(direct(z)) < 1e-15) {
        if (++quiet == 3) {
          cutoff_ = z;
          break;
        }
      } else {
        quiet = 0;
      }
    }
    const auto count = static_cast<std::size_t>(std::ceil(cutoff_ / kStep)) + 4;
    values_.resize(count);
    for (std::size_t i = 0; i < count; ++i) values_[i] = direct(static_cast<double>(i) * kStep);
  }

  double direct(double zeta) const {
    double s = 0.0;
    for (std::size_t i = 0; i < half_nodes_.size(); ++i) s += half_weights_[i] * std::cos(pi * zeta * half_nodes_[i]);
    return s;
  }

  double eval(double zeta) const {
    const double z = std::abs(zeta);
    if (z >= cutoff_) return 0.0;
    const double t = z / kStep;
    const auto base = static_cast<long>(std::floor(t));
    const double frac = t - static_cast<double>(base);
    double result = 0.0;
    for (int a = -2; a <= 3; ++a) {
      double basis = 1.0;
      for (int b = -2; b <= 3; ++b) {
        if (b != a) basis *= (frac - b) / static_cast<double>(a - b);
      }
      result += basis * value_at(base + a);
    }
    return result;
  }

  double cutoff() const { return cutoff_; }

 private:
  static constexpr int kNodes = 2048;

  double value_at(long i) const {
    const auto idx = static_cast<std::size_t>(std::labs(i));
    return idx < values_.size() ? values_[idx] : 0.0;
  }

  std::vector<double> half_nodes_;
  std::vector<double> half_weights_;
  std::vector<double> values_;
  double cutoff_ = 0.0;
};

namespace {

std::shared_ptr<const BumpTransformTable> shared_bump_table() {
  static const auto table = std::make_shared<const BumpTransformTable>();
  return table;
}

double bump_density(double r) {
  if (r <= 0.0 || r >= 1.0) return 0.0;
  const double u = 2.0 * r - 1.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

double sinc(double t) {
  if (std::abs(t) < 1e-8) return 1.0 - (pi * t) * (pi * t) / 6.0;
  return std::sin(pi * t) / (pi * t);
}

// int_0^1 exp(-2 pi i zeta s^q) ds with q = 1 / (1 - alpha): composite
// Gauss-Legendre with at most half a turn of phase per panel, plus dyadic
// grading of the first panel toward the algebraic point s = 0.
std::complex<double> power_law_transform(double alpha, double zeta) {
  const double q = 1.0 / (1.0 - alpha);
  const auto& rule = gauss_legendre(16);
  const double omega = 2.0 * pi * zeta;
  auto panel = [&](double a, double b) {
    std::complex<double> s = 0.0;
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = mid + half * rule.nodes[i];
      s += rule.weights[i] * std::polar(1.0, -omega * std::pow(x, q));
    }
    return s * half;
  };
  const int panels = static_cast<int>(std::ceil(2.0 * std::abs(zeta) * q)) + 4;
  const double width = 1.0 / panels;
  std::complex<double> total = 0.0;
  double hi = width;
  for (int level = 0; level < 40; ++level) {
    total += panel(0.5 * hi, hi);
    hi *= 0.5;
  }
  total += panel(0.0, hi);
  for (int p = 1; p < panels; ++p) total += panel(p * width, (p + 1) * width);
  return total;
}

}  // namespace

const char* to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::dirac: return "dirac";
    case MeasureKind::uniform01: return "uniform01";
    case MeasureKind::power_law: return "power_law";
    case MeasureKind::smooth_bump: return "smooth_bump";
  }
  return "unknown";
}

DilationMeasure DilationMeasure::dirac(double atom) {
  if (!(atom >= 0.0) || !std::isfinite(atom)) throw Error(ErrorCode::invalid_argument, "dirac atom must be finite and >= 0");
  DilationMeasure m;
  m.kind_ = MeasureKind::dirac;
  m.lo_ = m.hi_ = atom;
  m.beta_ = 0.0;
  m.decay_constant_ = 1.0;
  return m;
}

DilationMeasure DilationMeasure::uniform01(double lo, double hi) {
  if (!(lo >= 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::invalid_argument, "uniform support must satisfy 0 <= lo < hi");
  }
  DilationMeasure m;
  m.kind_ = MeasureKind::uniform01;
  m.lo_ = lo;
  m.hi_ = hi;
  m.beta_ = 1.0;
  m.fit_decay_constant();
  return m;
}

DilationMeasure DilationMeasure::power_law(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::invalid_argument, "power_law alpha must lie in (0, 1)");
  DilationMeasure m;
  m.kind_ = MeasureKind::power_law;
  m.alpha_ = alpha;
  m.lo_ = 0.0;
  m.hi_ = 1.0;
  m.beta_ = 1.0 - alpha;
  m.fit_decay_constant();
  return m;
}

DilationMeasure DilationMeasure::smooth_bump() {
  DilationMeasure m;
  m.kind_ = MeasureKind::smooth_bump;
  m.lo_ = 0.0;
  m.hi_ = 1.0;
  m.beta_ = std::numeric_limits<double>::infinity();
  m.bump_ = shared_bump_table();
  m.fit_decay_constant();
  return m;
}

double DilationMeasure::beta_finite() const { return std::isinf(beta_) ? 2.0 : beta_; }

void DilationMeasure::fit_decay_constant() {
  const double b = beta_finite();
  double best = 0.0;
  auto probe = [&](double z) { best = std::max(best, std::abs(transform(z)) * std::pow(1.0 + z, b)); };
  for (int i = 0; i <= 200; ++i) probe(0.05 * i);
  for (int i = 1; i <= 300; ++i) probe(10.0 * std::pow(100.0, i / 300.0));
  decay_constant_ = best;
}

std::complex<double> DilationMeasure::transform(double zeta) const {
  switch (kind_) {
    case MeasureKind::dirac:
      if (lo_ == 0.0) return {1.0, 0.0};
      return std::polar(1.0, -2.0 * pi * zeta * lo_);
    case MeasureKind::uniform01:
      return std::polar(1.0, -pi * zeta * (lo_ + hi_)) * sinc(zeta * (hi_ - lo_));
    case MeasureKind::power_law:
      return power_law_transform(alpha_, zeta);
    case MeasureKind::smooth_bump:
      return std::polar(1.0, -pi * zeta) * bump_->eval(zeta);
  }
  return {};
}

std::complex<double> mu_hat(const DilationMeasure& measure, double zeta) { return measure.transform(zeta); }

std::complex<double> mu_hat_scaled(const DilationMeasure& measure, double H, double R, double zeta) {
  if (zeta == 0.0) return {1.0, 0.0};
  return std::polar(1.0, -2.0 * pi * R * zeta) * measure.transform(H * zeta);
}

std::vector<QuadratureNode> quadrature_nodes(const DilationMeasure& measure, double H, double R, int n) {
  if (n < 1) throw Error(ErrorCode::bad_node_count, "quadrature needs at least one node");
  std::vector<QuadratureNode> out;
  if (measure.kind() == MeasureKind::dirac) {
    out.push_back({R + H * measure.support_lo(), 1.0});
    return out;
  }
  const auto& rule = gauss_legendre(n);
  out.reserve(n);
  switch (measure.kind()) {
    case MeasureKind::uniform01: {
      const double lo = measure.support_lo();
      const double hi = measure.support_hi();
      for (int i = 0; i < n; ++i) {
        const double r = lo + 0.5 * (hi - lo) * (rule.nodes[i] + 1.0);
        out.push_back({R + H * r, 0.5 * rule.weights[i]});
      }
      break;
    }
    case MeasureKind::power_law: {
      // r = s^{1/(1-alpha)} turns (1-alpha) r^{-alpha} dr into ds on [0, 1].
      const double q = 1.0 / (1.0 - measure.alpha());
      for (int i = 0; i < n; ++i) {
        const double s = 0.5 * (rule.nodes[i] + 1.0);
        out.push_back({R + H * std::pow(s, q), 0.5 * rule.weights[i]});
      }
      break;
    }
    case MeasureKind::smooth_bump: {
      double mass = 0.0;
      for (int i = 0; i < n; ++i) {
        const double r = 0.5 * (rule.nodes[i] + 1.0);
        const double w = rule.weights[i] * bump_density(r);
        out.push_back({R + H * r, w});
        mass += w;
      }
      for (auto& node : out) node.weight /= mass;
      break;
    }
    case MeasureKind::dirac:
      break;
  }
  return out;
}

double integrate_against(const DilationMeasure& measure, double H, double R,
                         const std::function<double(double)>& f, int n0, double rel_tol, int max_nodes) {
  const auto c = integrate_against_complex(
      measure, H, R, [&](double r) { return std::complex<double>(f(r), 0.0); }, n0, rel_tol, max_nodes);
  return c.real();
}

std::complex<double> integrate_against_complex(const DilationMeasure& measure, double H, double R,
                                               const std::function<std::complex<double>(double)>& f,
                                               int n0, double rel_tol, int max_nodes) {
  auto apply = [&](int n) {
    std::complex<double> s = 0.0;
    for (const auto& q : quadrature_nodes(measure, H, R, n)) s += q.weight * f(q.node);
    return s;
  };
  if (measure.kind() == MeasureKind::dirac) return apply(1);
  int n = std::max(1, n0);
  auto prev = apply(n);
  while (2 * n <= max_nodes) {
    n *= 2;
    const auto cur = apply(n);
    if (std::abs(cur - prev) <= rel_tol * std::max(std::abs(cur), 1e-300)) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace latdisc
