#include "latdisc/bessel.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "latdisc/error.hpp"

namespace latdisc {

namespace {

constexpr double kSeriesLimit = 12.0;

double series(double nu, double x) {
  const long double half = 0.5L * x;
  const long double q = -half * half;
  long double term = std::pow(half, static_cast<long double>(nu)) / std::tgamma(static_cast<long double>(nu) + 1.0L);
  long double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * (k + nu));
    sum += term;
    if (std::abs(term) < 1e-21L * std::abs(sum) && k > 2) break;
  }
  return static_cast<double>(sum);
}

bool half_integer(double nu) {
  const double twice = 2.0 * nu;
  return twice == std::floor(twice) && std::fmod(twice, 2.0) == 1.0;
}

// J_{1/2}, J_{-1/2} in closed form, then upward recurrence (stable for x > nu).
double half_integer_closed(double nu, double x) {
  const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
  double prev = amp * std::cos(x);
  double cur = amp * std::sin(x);
  for (double order = 0.5; order < nu; order += 1.0) {
    const double next = (2.0 * order / x) * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double hankel(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 100; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    if (term == 0.0) break;
    if (std::abs(term) > last) break;
    last = std::abs(term);
    // k odd feeds Q with signs +,-,...; k even feeds P with signs -,+,...
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      case 0: p += term; break;
    }
    if (last < 1e-17) break;
  }
  const double omega = x - (0.5 * nu + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(omega) - q * std::sin(omega));
}

}  // namespace

double bessel_j(double nu, double x) {
  if (!(nu >= 0.0 && nu <= 4.0) || !(x >= 0.0)) {
    throw Error(ErrorCode::invalid_argument, "bessel_j needs 0 <= nu <= 4 and x >= 0");
  }
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  if (x < kSeriesLimit) return series(nu, x);
  if (half_integer(nu)) return half_integer_closed(nu, x);
  return hankel(nu, x);
}

double bessel_envelope(double nu) {
  static std::mutex lock;
  static std::map<double, double> cache;
  std::lock_guard guard(lock);
  if (auto it = cache.find(nu); it != cache.end()) return it->second;
  constexpr double kStep = 0.01;
  constexpr double kRange = 200.0;
  double peak = 0.0;
  for (double t = kStep; t <= kRange; t += kStep) peak = std::max(peak, std::sqrt(t) * std::abs(std::cyl_bessel_j(nu, t)));
  // Between samples sqrt(t) J_nu(t) moves by at most ~step * sup|d/dt| <= step.
  peak += kStep;
  const double j = std::cyl_bessel_j(nu, kRange);
  const double y = std::cyl_neumann(nu, kRange);
  const double far = std::sqrt(kRange * (j * j + y * y)) * (1.0 + 1e-9);
  const double value = std::max(peak, far);
  cache.emplace(nu, value);
  return value;
}

}  // namespace latdisc
