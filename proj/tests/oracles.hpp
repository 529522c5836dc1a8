#pragma once

// Independent reference computations shared by the unit tests. Nothing here
// calls into the library's numerical kernels.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// Power series for J_nu; fine in long double for x below about 20.
inline double bessel_series(double nu, double x) {
  const long double h = 0.5L * x;
  long double term = std::pow(h, static_cast<long double>(nu)) / std::tgamma(static_cast<long double>(nu) + 1.0L);
  long double sum = term;
  for (int m = 1; m < 200; ++m) {
    term *= -h * h / (static_cast<long double>(m) * (m + nu));
    sum += term;
    if (std::abs(term) < 1e-22L * std::abs(sum)) break;
  }
  return static_cast<double>(sum);
}

// #{k : |M(k + x) - r M p| <= r}, i.e. k + x in r * {y : |M(y - p)| <= 1}.
inline std::int64_t count_ellipsoid(const Eigen::MatrixXd& M, const Eigen::VectorXd& p, double r,
                                    const std::vector<double>& x) {
  const int d = static_cast<int>(M.rows());
  const Eigen::MatrixXd Minv = M.inverse();
  double reach = 0.0;
  for (int i = 0; i < d; ++i) reach = std::max(reach, Minv.row(i).norm() + std::abs(p(i)));
  const long B = static_cast<long>(std::ceil(r * reach)) + 2;
  std::vector<long> k(d, -B);
  std::int64_t c = 0;
  const Eigen::VectorXd shift = r * (M * p);
  while (true) {
    Eigen::VectorXd y(d);
    for (int i = 0; i < d; ++i) y(i) = static_cast<double>(k[i]) + x[i];
    if ((M * y - shift).squaredNorm() <= r * r) ++c;
    int i = 0;
    while (i < d && ++k[i] > B) k[i++] = -B;
    if (i == d) break;
  }
  return c;
}

inline std::int64_t count_ball(int d, double r, const std::vector<double>& x) {
  return count_ellipsoid(Eigen::MatrixXd::Identity(d, d), Eigen::VectorXd::Zero(d), r, x);
}

inline long gcd(long a, long b) {
  a = std::abs(a);
  b = std::abs(b);
  while (b) {
    const long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Simpson's rule with n (even) panels.
template <typename F>
double simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// Ordinary least squares slope of y on x.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace oracle
