#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace latdisc {

using IntVec = std::vector<long>;

/// Largest dimension a body can be built in. Counting further limits d to 5.
inline constexpr int kMaxBodyDim = 8;

enum class BodyKind { ball, ellipsoid };

const char* to_string(BodyKind kind);

/// Integer Gram form q(n) = n^t Q n with Q = L * (M^t M)^{-1}, available when
/// the body is centered and (M^t M)^{-1} is rational with small denominators.
/// Then g(n)^2 = q(n) / L and support-function ties can be decided exactly.
struct RationalForm {
  std::vector<std::int64_t> q;  // row-major d x d
  std::int64_t scale = 1;       // L

  __int128 eval(std::span<const long> n) const;
};

/// The closed unit ball, or the ellipsoid {y : |M (y - p)| <= 1} with the
/// origin in its interior. Immutable; all queries are const and thread-safe.
class ConvexBody {
 public:
  static ConvexBody ball(int dim);
  static ConvexBody ellipsoid(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& center);

  int dim() const { return dim_; }
  BodyKind kind() const { return kind_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const Eigen::VectorXd& center() const { return center_; }
  bool centered() const { return centered_; }
  double abs_det() const { return abs_det_; }

  /// Row-major (M^t)^{-1}, so that g(x) = |(M^t)^{-1} x| + x.p.
  double inv_t(int i, int j) const { return inv_t_[i * dim_ + j]; }
  double m(int i, int j) const { return m_[i * dim_ + j]; }
  /// Entry i of M p.
  double mp(int i) const { return mp_[i]; }
  double mp_norm2() const { return mp_norm2_; }
  double p(int i) const { return p_[i]; }

  /// Largest and smallest singular values of M.
  double sigma_max() const { return sigma_max_; }
  double sigma_min() const { return sigma_min_; }

  const std::optional<RationalForm>& rational_form() const { return rational_; }

 private:
  ConvexBody() = default;
  void finalize();

  int dim_ = 0;
  BodyKind kind_ = BodyKind::ball;
  Eigen::MatrixXd matrix_;
  Eigen::VectorXd center_;
  bool centered_ = true;
  double abs_det_ = 1.0;
  double mp_norm2_ = 0.0;
  double sigma_max_ = 1.0;
  double sigma_min_ = 1.0;
  std::array<double, kMaxBodyDim * kMaxBodyDim> m_{};
  std::array<double, kMaxBodyDim * kMaxBodyDim> inv_t_{};
  std::array<double, kMaxBodyDim> mp_{};
  std::array<double, kMaxBodyDim> p_{};
  std::optional<RationalForm> rational_;
};

/// Support function g(x) = sup_{y in body} x.y.
double support(const ConvexBody& body, std::span<const double> x);
double support(const ConvexBody& body, std::span<const long> n);

/// Minkowski gauge: the smallest rho >= 0 with v in rho * body.
double gauge(const ConvexBody& body, std::span<const double> v);

/// Membership v in r * body, evaluated as |M v - r M p|^2 <= r^2.
bool contains_scaled(const ConvexBody& body, std::span<const double> v, double r);

double volume(const ConvexBody& body);
double unit_ball_volume(int dim);

/// Radius of a ball about the origin guaranteed to lie inside the body.
double inradius_about_origin(const ConvexBody& body);

struct CurvatureData {
  Eigen::VectorXd direction;
  double gauss_curvature = 1.0;
  double a0b0_product = 0.0;
};

/// Gaussian curvature at the boundary point with outward normal along
/// `direction` (any nonzero vector; only its direction matters).
double gauss_curvature(const ConvexBody& body, std::span<const double> direction);

/// Curvature data at a unit direction. The support-function Hessian is
/// checked for d-1 nonvanishing eigenvalues (tolerance 1e-10 of its trace).
CurvatureData curvature_coeffs(const ConvexBody& body, std::span<const double> direction);

/// Smallest curvature over all directions (closed form for ellipsoids).
double min_gauss_curvature(const ConvexBody& body);

struct CollisionPair {
  IntVec m;
  IntVec n;
  bool suspected = false;  // true when decided by tolerance, not exactly
};

/// Unordered pairs m != n with |m|, |n| <= K and g(m) = g(n). Exact when the
/// body has a rational form; otherwise pairs with |g(m)-g(n)| < tol max(1,g)
/// are reported as suspected.
std::vector<CollisionPair> lattice_collisions(const ConvexBody& body, long K, double tol);

/// Visits every n in Z^d with |n|^2 <= radius2.
void for_each_lattice_point(int dim, long radius2, const std::function<void(std::span<const long>)>& fn);

}  // namespace latdisc
