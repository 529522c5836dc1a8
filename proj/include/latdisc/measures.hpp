#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

namespace latdisc {

enum class MeasureKind { dirac, uniform01, power_law, smooth_bump };

const char* to_string(MeasureKind kind);

struct QuadratureNode {
  double node = 0.0;
  double weight = 0.0;
};

class BumpTransformTable;

/// Probability measure dmu(r) on a compact interval [lo, hi] of [0, inf).
///
///   dirac        unit mass at `atom` (lo = hi = atom); mu_hat = exp(-2 pi i zeta atom)
///   uniform01    uniform on [lo, hi], default [0, 1]
///   power_law    (1 - alpha) r^{-alpha} dr on (0, 1), 0 < alpha < 1
///   smooth_bump  c exp(-1 / (1 - (2r - 1)^2)) on (0, 1)
///
/// `beta` is the Fourier decay exponent (+inf for the bump); `decay_constant`
/// is the fitted B in |mu_hat(zeta)| <= B (1 + |zeta|)^{-beta}.
class DilationMeasure {
 public:
  static DilationMeasure dirac(double atom = 0.0);
  static DilationMeasure uniform01(double lo = 0.0, double hi = 1.0);
  static DilationMeasure power_law(double alpha);
  static DilationMeasure smooth_bump();

  MeasureKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  double beta() const { return beta_; }
  /// beta, with the bump's +inf replaced by 2 for use in index formulas.
  double beta_finite() const;
  double decay_constant() const { return decay_constant_; }

  std::complex<double> transform(double zeta) const;

 private:
  DilationMeasure() = default;
  void fit_decay_constant();

  MeasureKind kind_ = MeasureKind::dirac;
  double alpha_ = 0.0;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double beta_ = 0.0;
  double decay_constant_ = 1.0;
  std::shared_ptr<const BumpTransformTable> bump_;
};

/// mu_hat(zeta) = int exp(-2 pi i zeta r) dmu(r).
std::complex<double> mu_hat(const DilationMeasure& measure, double zeta);

/// Transform of the pushed-forward measure mu_{H,R}: exp(-2 pi i R zeta) mu_hat(H zeta).
std::complex<double> mu_hat_scaled(const DilationMeasure& measure, double H, double R, double zeta);

/// n-point rule for int f(r) dmu_{H,R}(r) = int f(R + H r) dmu(r).
std::vector<QuadratureNode> quadrature_nodes(const DilationMeasure& measure, double H, double R, int n);

/// Integrates f against mu_{H,R}, doubling the node count from n0 until the
/// relative change drops below rel_tol (or max_nodes is reached).
double integrate_against(const DilationMeasure& measure, double H, double R,
                         const std::function<double(double)>& f, int n0 = 64,
                         double rel_tol = 1e-9, int max_nodes = 1 << 16);

/// Complex variant of integrate_against.
std::complex<double> integrate_against_complex(const DilationMeasure& measure, double H, double R,
                                               const std::function<std::complex<double>(double)>& f,
                                               int n0 = 64, double rel_tol = 1e-9, int max_nodes = 1 << 16);

}  // namespace latdisc
