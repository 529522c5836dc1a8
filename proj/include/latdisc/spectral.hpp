#pragma once

#include <complex>
#include <span>
#include <vector>

#include "latdisc/bodies.hpp"
#include "latdisc/measures.hpp"

namespace latdisc {

/// Truncated lattice or Fourier sum. tail_bound bounds everything omitted by
/// the truncation at radius N (see each producer for the decay it assumes).
struct SpectralSum {
  std::complex<double> value;
  double truncation_radius = 0.0;
  double tail_bound = 0.0;
  bool suspected = false;  // some terms were admitted by tolerance, not exactly
};

/// Fourier transform of the unit ball at |xi| = rho: rho^{-d/2} J_{d/2}(2 pi rho).
double ft_ball_radial(int dim, double rho);

/// Exact transform of the indicator of the body, via the ball and the affine map.
std::complex<double> ft_body_exact(const ConvexBody& body, std::span<const double> xi);

/// One- or two-term large-frequency expansion. Throws TooSmallFrequency for |xi| < 1.
std::complex<double> ft_body_asymptotic(const ConvexBody& body, std::span<const double> xi, int terms);

/// Upper bound for |chi_hat(xi)| of the form C |xi|^{-(d+1)/2}; returns C.
double ft_decay_constant(const ConvexBody& body);

/// Bounds sum_{n in Z^d, |n| > N} |n|^{-s}, s > d, N > sqrt(d).
double lattice_tail_sum(int dim, double s, double N);

/// Same sum restricted to an affine integer hyperplane (d-1 dimensional
/// lattice whose points project injectively onto a coordinate plane).
double hyperplane_tail_sum(int dim, double s, double N);

/// Radial mollifier phi = c (1 - |x|^2/eps^2)^lambda on |x| <= eps with
/// integral 1. Its transform is closed form,
///   phi_hat(zeta) = Gamma(nu+1) (pi eps |zeta|)^{-nu} J_nu(2 pi eps |zeta|),  nu = d/2 + lambda.
class Mollifier {
 public:
  Mollifier(int dim, double epsilon, double lambda = 8.0);

  int dim() const { return dim_; }
  double epsilon() const { return epsilon_; }
  double lambda() const { return lambda_; }
  double order() const { return nu_; }

  /// phi_hat at |zeta| = t.
  double transform(double t) const;
  /// Bound for |phi_hat| at |zeta| = t > 0, decaying like t^{-nu-1/2}.
  double transform_bound(double t) const;
  /// A with |phi_hat(t)| <= A t^{-nu-1/2} for all t > 0.
  double decay_coefficient() const;

 private:
  int dim_;
  double epsilon_;
  double lambda_;
  double nu_;
  double gamma_factor_;
  double envelope_;
};

struct Sandwich {
  double lower = 0.0;
  double upper = 0.0;
  double tail = 0.0;  // combined tail bound folded into [lower, upper]
  long truncation = 0;
};

/// Lower and upper bounds for the discrepancy of r*body - x built from the
/// mollified Fourier series at radii r -+ delta. N = 0 picks the truncation
/// automatically; an explicit N whose tail exceeds 10% of the width throws
/// TruncationTooCoarse. The mollifier support must fit inside the body.
Sandwich mollified_discrepancy(const ConvexBody& body, double r, std::span<const double> x, double delta,
                               const Mollifier& mollifier, long N = 0);

/// Leading-term coefficient of the radial average of |D|^2 at frequency k,
///   sum_{n != 0,k, |n| <= N} c(n) conj(c(n-k)) |n|^{-z} |n-k|^{-z}
///       exp(2 pi i (g(n-k) - g(n)) R) mu_hat(H (g(n) - g(n-k))),   z = (d+1)/2.
SpectralSum f0_coefficient(const ConvexBody& body, const DilationMeasure& measure, double H, double R,
                           std::span<const long> k, long N);

/// Coefficient of the limit function G at k: 2 sum over n != 0, k with
/// g(n-k) = g(n) and max(|n|, |n-k|) <= N of a0(n) b0(k-n) |n|^{-z} |k-n|^{-z}.
/// Exact collision test for bodies with a rational form, else |diff| < tol.
SpectralSum g_limit_coefficient(const ConvexBody& body, std::span<const long> k, long N, double tol = 1e-12);

struct GValue {
  double value = 0.0;
  double tail_bound = 0.0;  // sum of the coefficient tail bounds
  bool suspected = false;
};

/// sum_{|k| <= K} G_hat(k) exp(2 pi i k.x). Throws SymmetryViolation if the
/// imaginary part is not below 1e-8.
GValue g_limit_eval(const ConvexBody& body, std::span<const double> x, long K, long N, double tol = 1e-12);

}  // namespace latdisc
