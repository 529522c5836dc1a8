#include "latdisc/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "latdisc/error.hpp"

namespace latdisc {

namespace {

constexpr long kMaxDenominator = 1'000'000;

struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

// Best rational approximation with bounded denominator (continued fractions).
std::optional<Fraction> rationalize(double value) {
  const double tol = 1e-12 * std::max(1.0, std::abs(value));
  const double sign = value < 0 ? -1.0 : 1.0;
  double x = std::abs(value);
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(x);
    if (a > 1e15) break;
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t h2 = ai * h1 + h0;
    const std::int64_t k2 = ai * k1 + k0;
    if (k2 > kMaxDenominator) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::abs(sign * static_cast<double>(h1) / static_cast<double>(k1) - value) <= tol) {
      return Fraction{static_cast<std::int64_t>(sign) * h1, k1};
    }
    const double frac = x - a;
    if (frac < 1e-300) break;
    x = 1.0 / frac;
  }
  return std::nullopt;
}

std::optional<RationalForm> detect_rational_form(const Eigen::MatrixXd& gram_inverse) {
  const auto d = gram_inverse.rows();
  std::vector<Fraction> fracs;
  std::int64_t lcm = 1;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      auto f = rationalize(gram_inverse(i, j));
      if (!f) return std::nullopt;
      lcm = std::lcm(lcm, f->den);
      if (lcm > 1'000'000'000'000LL) return std::nullopt;
      fracs.push_back(*f);
    }
  }
  RationalForm form;
  form.scale = lcm;
  form.q.reserve(fracs.size());
  for (const auto& f : fracs) form.q.push_back(f.num * (lcm / f.den));
  return form;
}

}  // namespace

const char* to_string(BodyKind kind) {
  return kind == BodyKind::ball ? "ball" : "ellipsoid";
}

__int128 RationalForm::eval(std::span<const long> n) const {
  const std::size_t d = n.size();
  __int128 acc = 0;
  for (std::size_t i = 0; i < d; ++i) {
    __int128 row = 0;
    for (std::size_t j = 0; j < d; ++j) row += static_cast<__int128>(q[i * d + j]) * n[j];
    acc += row * n[i];
  }
  return acc;
}

ConvexBody ConvexBody::ball(int dim) {
  if (dim < 2 || dim > kMaxBodyDim) {
    throw Error(ErrorCode::invalid_argument, "ball dimension must be in [2, 8]");
  }
  ConvexBody body;
  body.dim_ = dim;
  body.kind_ = BodyKind::ball;
  body.matrix_ = Eigen::MatrixXd::Identity(dim, dim);
  body.center_ = Eigen::VectorXd::Zero(dim);
  body.finalize();
  return body;
}

ConvexBody ConvexBody::ellipsoid(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& center) {
  const auto d = matrix.rows();
  if (d < 2 || d > kMaxBodyDim || matrix.cols() != d || center.size() != d) {
    throw Error(ErrorCode::invalid_argument, "ellipsoid needs a square d x d matrix, 2 <= d <= 8, and a d-vector center");
  }
  if (!matrix.allFinite() || !center.allFinite()) {
    throw Error(ErrorCode::invalid_argument, "ellipsoid entries must be finite");
  }
  Eigen::MatrixXd scaled = matrix;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double s = scaled.row(i).cwiseAbs().maxCoeff();
    if (s == 0.0) throw Error(ErrorCode::invalid_argument, "ellipsoid matrix is singular");
    scaled.row(i) /= s;
  }
  if (std::abs(scaled.determinant()) <= 1e-12) {
    throw Error(ErrorCode::invalid_argument, "ellipsoid matrix is singular");
  }
  if ((matrix * center).norm() >= 1.0) {
    throw Error(ErrorCode::invalid_argument, "origin must be interior: |M p| < 1");
  }
  ConvexBody body;
  body.dim_ = static_cast<int>(d);
  body.kind_ = BodyKind::ellipsoid;
  body.matrix_ = matrix;
  body.center_ = center;
  body.finalize();
  return body;
}

void ConvexBody::finalize() {
  const int d = dim_;
  const Eigen::MatrixXd inv_t = matrix_.transpose().inverse();
  const Eigen::VectorXd mp = matrix_ * center_;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      m_[i * d + j] = matrix_(i, j);
      inv_t_[i * d + j] = inv_t(i, j);
    }
    mp_[i] = mp(i);
    p_[i] = center_(i);
  }
  mp_norm2_ = mp.squaredNorm();
  centered_ = center_.isZero(0.0);
  abs_det_ = std::abs(matrix_.determinant());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix_);
  sigma_max_ = svd.singularValues().maxCoeff();
  sigma_min_ = svd.singularValues().minCoeff();
  if (kind_ == BodyKind::ball) {
    abs_det_ = 1.0;
    sigma_max_ = sigma_min_ = 1.0;
  }
  if (centered_) {
    rational_ = detect_rational_form((matrix_.transpose() * matrix_).inverse());
  }
}

double support(const ConvexBody& body, std::span<const double> x) {
  const int d = body.dim();
  if (body.kind() == BodyKind::ball) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += x[i] * x[i];
    return std::sqrt(s);
  }
  double norm2 = 0.0;
  double dot = 0.0;
  for (int i = 0; i < d; ++i) {
    double row = 0.0;
    for (int j = 0; j < d; ++j) row += body.inv_t(i, j) * x[j];
    norm2 += row * row;
    dot += x[i] * body.p(i);
  }
  return std::sqrt(norm2) + dot;
}

double support(const ConvexBody& body, std::span<const long> n) {
  std::array<double, kMaxBodyDim> x{};
  for (int i = 0; i < body.dim(); ++i) x[i] = static_cast<double>(n[i]);
  return support(body, std::span<const double>(x.data(), body.dim()));
}

double gauge(const ConvexBody& body, std::span<const double> v) {
  const int d = body.dim();
  if (body.kind() == BodyKind::ball) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += v[i] * v[i];
    return std::sqrt(s);
  }
  // Positive root of a rho^2 + 2 b rho - c = 0 with a = 1 - |Mp|^2,
  // b = Mv.Mp, c = |Mv|^2.
  double b = 0.0;
  double c = 0.0;
  for (int i = 0; i < d; ++i) {
    double row = 0.0;
    for (int j = 0; j < d; ++j) row += body.m(i, j) * v[j];
    b += row * body.mp(i);
    c += row * row;
  }
  if (c == 0.0) return 0.0;
  const double a = 1.0 - body.mp_norm2();
  if (a <= 0.0) throw Error(ErrorCode::no_positive_root, "origin is not interior to the body");
  const double disc = std::sqrt(b * b + a * c);
  return b >= 0.0 ? c / (b + disc) : (disc - b) / a;
}

bool contains_scaled(const ConvexBody& body, std::span<const double> v, double r) {
  const int d = body.dim();
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    double row = -r * body.mp(i);
    for (int j = 0; j < d; ++j) row += body.m(i, j) * v[j];
    s += row * row;
  }
  return s <= r * r;
}

double unit_ball_volume(int dim) {
  return std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

double volume(const ConvexBody& body) { return unit_ball_volume(body.dim()) / body.abs_det(); }

double inradius_about_origin(const ConvexBody& body) {
  if (body.kind() == BodyKind::ball) return 1.0;
  return (1.0 - std::sqrt(body.mp_norm2())) / body.sigma_max();
}

double gauss_curvature(const ConvexBody& body, std::span<const double> direction) {
  if (body.kind() == BodyKind::ball) return 1.0;
  const int d = body.dim();
  double len2 = 0.0;
  double img2 = 0.0;
  for (int i = 0; i < d; ++i) {
    len2 += direction[i] * direction[i];
    double row = 0.0;
    for (int j = 0; j < d; ++j) row += body.inv_t(i, j) * direction[j];
    img2 += row * row;
  }
  // K(u) = det(M)^2 |(M^t)^{-1} u|^{d+1} for unit u.
  const double ratio = std::sqrt(img2 / len2);
  return body.abs_det() * body.abs_det() * std::pow(ratio, d + 1);
}

double min_gauss_curvature(const ConvexBody& body) {
  if (body.kind() == BodyKind::ball) return 1.0;
  return body.abs_det() * body.abs_det() * std::pow(1.0 / body.sigma_max(), body.dim() + 1);
}

CurvatureData curvature_coeffs(const ConvexBody& body, std::span<const double> direction) {
  const int d = body.dim();
  if (static_cast<int>(direction.size()) != d) {
    throw Error(ErrorCode::invalid_argument, "direction has the wrong dimension");
  }
  Eigen::VectorXd u(d);
  for (int i = 0; i < d; ++i) u(i) = direction[i];
  if (std::abs(u.norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::invalid_argument, "direction must be a unit vector");
  }
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = body.inv_t(i, j);
  const Eigen::VectorXd au = a * u;
  const double len = au.norm();
  const Eigen::VectorXd hat = au / len;
  const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(d, d) - hat * hat.transpose();
  const Eigen::MatrixXd hessian = a.transpose() * proj * a / len;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hessian);
  Eigen::VectorXd ev = eig.eigenvalues();  // ascending; ev(0) is the radial null direction
  const double trace = hessian.trace();
  for (int i = 1; i < d; ++i) {
    if (ev(i) <= 1e-10 * trace) {
      throw Error(ErrorCode::degenerate_hessian, "support-function Hessian has a vanishing curvature radius");
    }
  }
  CurvatureData out;
  out.direction = u;
  out.gauss_curvature = gauss_curvature(body, direction);
  const Eigen::VectorXd minus_u = -u;
  const double k_minus = gauss_curvature(body, std::span<const double>(minus_u.data(), d));
  out.a0b0_product = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi) /
                     std::sqrt(out.gauss_curvature * k_minus);
  return out;
}

void for_each_lattice_point(int dim, long radius2, const std::function<void(std::span<const long>)>& fn) {
  if (radius2 < 0) return;
  IntVec n(dim, 0);
  // Iterative odometer over nested shells: coordinate i ranges over
  // |n_i|^2 <= radius2 - sum_{j<i} n_j^2.
  std::vector<long> rem(dim + 1, 0);
  rem[0] = radius2;
  auto isqrt = [](long v) {
    long s = static_cast<long>(std::sqrt(static_cast<double>(v)));
    while (s * s > v) --s;
    while ((s + 1) * (s + 1) <= v) ++s;
    return s;
  };
  int level = 0;
  std::vector<long> hi(dim, 0);
  hi[0] = isqrt(rem[0]);
  n[0] = -hi[0];
  while (level >= 0) {
    if (n[level] > hi[level]) {
      --level;
      if (level >= 0) ++n[level];
      continue;
    }
    rem[level + 1] = rem[level] - n[level] * n[level];
    if (level + 1 == dim) {
      fn(n);
      ++n[level];
    } else {
      ++level;
      hi[level] = isqrt(rem[level]);
      n[level] = -hi[level];
    }
  }
}

std::vector<CollisionPair> lattice_collisions(const ConvexBody& body, long K, double tol) {
  if (K < 1) throw Error(ErrorCode::invalid_argument, "K must be >= 1");
  const int d = body.dim();
  std::vector<CollisionPair> out;
  const auto& form = body.rational_form();
  if (form) {
    std::vector<std::pair<__int128, IntVec>> keyed;
    for_each_lattice_point(d, K * K, [&](std::span<const long> n) {
      keyed.emplace_back(form->eval(n), IntVec(n.begin(), n.end()));
    });
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t i = 0; i < keyed.size();) {
      std::size_t j = i;
      while (j < keyed.size() && keyed[j].first == keyed[i].first) ++j;
      for (std::size_t a = i; a < j; ++a)
        for (std::size_t b = a + 1; b < j; ++b) out.push_back({keyed[a].second, keyed[b].second, false});
      i = j;
    }
    return out;
  }
  std::vector<std::pair<long double, IntVec>> keyed;
  for_each_lattice_point(d, K * K, [&](std::span<const long> n) {
    long double norm2 = 0.0L;
    long double dot = 0.0L;
    for (int i = 0; i < d; ++i) {
      long double row = 0.0L;
      for (int j = 0; j < d; ++j) row += static_cast<long double>(body.inv_t(i, j)) * n[j];
      norm2 += row * row;
      dot += static_cast<long double>(n[i]) * body.p(i);
    }
    keyed.emplace_back(std::sqrt(norm2) + dot, IntVec(n.begin(), n.end()));
  });
  std::sort(keyed.begin(), keyed.end());
  for (std::size_t a = 0; a < keyed.size(); ++a) {
    const long double bound = tol * std::max<long double>(1.0L, std::abs(keyed[a].first));
    for (std::size_t b = a + 1; b < keyed.size() && keyed[b].first - keyed[a].first < bound; ++b) {
      out.push_back({keyed[a].second, keyed[b].second, true});
    }
  }
  return out;
}

}  // namespace latdisc
