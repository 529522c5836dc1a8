#include "latdisc/counting.hpp"

#include <algorithm>
#include <cmath>

#include "latdisc/error.hpp"
#include "latdisc/parallel.hpp"

namespace latdisc {

namespace {

struct Box {
  std::array<long, kMaxCountDim> lo{};
  std::array<long, kMaxCountDim> hi{};
};

void check_inputs(const ConvexBody& body, double r, std::span<const double> x) {
  if (body.dim() > kMaxCountDim) throw Error(ErrorCode::dimension_too_large, "counting supports d <= 5");
  if (static_cast<int>(x.size()) != body.dim()) throw Error(ErrorCode::invalid_argument, "x has the wrong dimension");
  if (!(r >= 0.0) || !std::isfinite(r)) throw Error(ErrorCode::invalid_argument, "radius must be finite and >= 0");
}

Box bounding_box(const ConvexBody& body, double r, std::span<const double> x) {
  const int d = body.dim();
  Box box;
  std::array<double, kMaxCountDim> e{};
  for (int i = 0; i < d; ++i) {
    e.fill(0.0);
    e[i] = 1.0;
    const double up = support(body, std::span<const double>(e.data(), d));
    e[i] = -1.0;
    const double down = support(body, std::span<const double>(e.data(), d));
    box.lo[i] = static_cast<long>(std::ceil(-r * down - x[i])) - 1;
    box.hi[i] = static_cast<long>(std::floor(r * up - x[i])) + 1;
  }
  return box;
}

class FiberSolver {
 public:
  FiberSolver(const ConvexBody& body, double r, std::span<const double> x) : body_(body), r_(r), x_(x) {
    const int d = body.dim();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) s += body.m(l, i) * body.m(l, j);
        gram_[i * d + j] = s;
      }
  }

  double entry_radius(long k0, std::span<const long> rest) const {
    std::array<double, kMaxCountDim> v{};
    v[0] = static_cast<double>(k0) + x_[0];
    for (std::size_t j = 0; j < rest.size(); ++j) v[j + 1] = static_cast<double>(rest[j]) + x_[j + 1];
    return gauge(body_, std::span<const double>(v.data(), body_.dim()));
  }

  bool inside(long k0, std::span<const long> rest) const { return entry_radius(k0, rest) <= r_; }

  /// Range [lo, hi] of k0 inside the body on this fiber; lo > hi when empty.
  std::pair<long, long> range(std::span<const long> rest) const {
    const int d = body_.dim();
    std::array<double, kMaxCountDim> u{};
    for (int j = 1; j < d; ++j) u[j] = static_cast<double>(rest[j - 1]) + x_[j] - r_ * body_.p(j);
    double beta = 0.0;
    double gamma = -r_ * r_;
    for (int i = 1; i < d; ++i) {
      beta += gram_[i] * u[i];
      for (int j = 1; j < d; ++j) gamma += gram_[i * d + j] * u[i] * u[j];
    }
    const double a = gram_[0];
    const double c = x_[0] - r_ * body_.p(0);
    const double disc = beta * beta - a * gamma;
    long lo;
    long hi;
    if (disc >= 0.0) {
      const double root = std::sqrt(disc);
      lo = static_cast<long>(std::ceil((-beta - root) / a - c));
      hi = static_cast<long>(std::floor((-beta + root) / a - c));
      if (lo > hi) lo = hi = static_cast<long>(std::lround(-beta / a - c));
    } else {
      lo = hi = static_cast<long>(std::lround(-beta / a - c));
    }
    // Settle the endpoints with the gauge itself so both routes share one
    // boundary convention.
    while (lo <= hi && !inside(lo, rest)) ++lo;
    while (hi >= lo && !inside(hi, rest)) --hi;
    if (lo > hi) return {1, 0};
    while (inside(lo - 1, rest)) --lo;
    while (inside(hi + 1, rest)) ++hi;
    return {lo, hi};
  }

 private:
  const ConvexBody& body_;
  double r_;
  std::span<const double> x_;
  std::array<double, kMaxCountDim * kMaxCountDim> gram_{};
};

// Calls fn(slot, rest) for every fiber, where rest = (k_1, ..., k_{d-1}) and
// slot indexes the value of the last coordinate. Slots run in parallel.
template <typename Fn>
void for_each_fiber(const Box& box, int d, Fn&& fn) {
  const long outer_lo = box.lo[d - 1];
  const std::size_t slots = static_cast<std::size_t>(box.hi[d - 1] - outer_lo + 1);
  parallel_for(slots, [&](std::size_t slot) {
    std::array<long, kMaxCountDim> rest{};
    const int m = d - 1;  // fiber coordinates k_1..k_{d-1}
    rest[m - 1] = outer_lo + static_cast<long>(slot);
    for (int j = 0; j < m - 1; ++j) rest[j] = box.lo[j + 1];
    while (true) {
      fn(slot, std::span<const long>(rest.data(), m));
      int j = 0;
      while (j < m - 1) {
        if (++rest[j] <= box.hi[j + 1]) break;
        rest[j] = box.lo[j + 1];
        ++j;
      }
      if (j == m - 1) break;
    }
  });
}

long double binom_general(long double w, int i) {
  long double c = 1.0L;
  for (int j = 0; j < i; ++j) c *= (w - j) / (j + 1);
  return c;
}

long double ipow(long double x, int n) {
  long double r = 1.0L;
  for (int i = 0; i < std::abs(n); ++i) r *= x;
  return n < 0 ? 1.0L / r : r;
}

// int_a^b r^w (C - V r^d)^2 dr.
long double segment_integral(long double a, long double b, long double C, long double V, int d, int w) {
  const long double h = b - a;
  if (h <= 0.0L) return 0.0L;
  if (a > 0.0L && h <= 0.5L * a) {
    // Expand about a: D(a+t) = sum e_j t^j exactly, and (a+t)^w by the binomial
    // series, which converges geometrically since t/a <= 1/2.
    std::array<long double, kMaxCountDim + 1> e{};
    e[0] = C - V * ipow(a, d);
    for (int j = 1; j <= d; ++j) e[j] = -V * binom_general(d, j) * ipow(a, d - j);
    std::array<long double, 2 * kMaxCountDim + 1> p{};
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j <= d; ++j) p[i + j] += e[i] * e[j];
    std::array<long double, 2 * kMaxCountDim + 1> hm{};  // p[m] h^m
    hm[0] = 1.0L;
    for (int m = 1; m <= 2 * d; ++m) hm[m] = hm[m - 1] * h;
    for (int m = 0; m <= 2 * d; ++m) hm[m] *= p[m];
    long double coef = ipow(a, w);  // binom(w, i) a^{w-i}
    long double hi1 = h;                                        // h^{i+1}
    long double total = 0.0L;
    int quiet = 0;
    for (int i = 0; i < 400 && coef != 0.0L; ++i) {
      long double piece = 0.0L;
      for (int m = 0; m <= 2 * d; ++m) piece += hm[m] / (m + i + 1);
      piece *= coef * hi1;
      total += piece;
      if (std::abs(piece) <= 1e-22L * std::abs(total)) {
        if (++quiet == 2) break;
      } else {
        quiet = 0;
      }
      coef *= (w - i) / ((i + 1) * a);
      hi1 *= h;
    }
    return total;
  }
  auto antideriv = [](long double r, int e) -> long double {
    if (e == -1) return std::log(r);
    return std::pow(r, static_cast<long double>(e + 1)) / (e + 1);
  };
  auto prim = [&](long double r) {
    return C * C * antideriv(r, w) - 2.0L * C * V * antideriv(r, w + d) + V * V * antideriv(r, w + 2 * d);
  };
  return prim(b) - prim(a);
}

}  // namespace

std::int64_t count_lattice_points(const ConvexBody& body, double r, std::span<const double> x) {
  check_inputs(body, r, x);
  const int d = body.dim();
  const Box box = bounding_box(body, r, x);
  const FiberSolver solver(body, r, x);
  std::vector<std::int64_t> per_slot(static_cast<std::size_t>(box.hi[d - 1] - box.lo[d - 1] + 1), 0);
  for_each_fiber(box, d, [&](std::size_t slot, std::span<const long> rest) {
    const auto [lo, hi] = solver.range(rest);
    if (hi >= lo) per_slot[slot] += hi - lo + 1;
  });
  std::int64_t total = 0;
  for (auto c : per_slot) total += c;
  return total;
}

std::int64_t count_by_gauge_scan(const ConvexBody& body, double r, std::span<const double> x) {
  check_inputs(body, r, x);
  const int d = body.dim();
  const Box box = bounding_box(body, r, x);
  std::int64_t total = 0;
  std::array<long, kMaxCountDim> k{};
  for (int i = 0; i < d; ++i) k[i] = box.lo[i];
  std::array<double, kMaxCountDim> v{};
  while (true) {
    for (int i = 0; i < d; ++i) v[i] = static_cast<double>(k[i]) + x[i];
    if (gauge(body, std::span<const double>(v.data(), d)) <= r) ++total;
    int i = 0;
    while (i < d) {
      if (++k[i] <= box.hi[i]) break;
      k[i] = box.lo[i];
      ++i;
    }
    if (i == d) break;
  }
  return total;
}

double discrepancy(const ConvexBody& body, double r, std::span<const double> x, bool normalized) {
  if (!(r > 0.0)) throw Error(ErrorCode::invalid_argument, "radius must be > 0");
  const int d = body.dim();
  const double D = static_cast<double>(count_lattice_points(body, r, x)) - std::pow(r, d) * volume(body);
  return normalized ? D * std::pow(r, -0.5 * (d - 1)) : D;
}

std::int64_t RadialProfile::count_at(double r) const {
  std::int64_t c = base_count;
  for (const auto& b : breakpoints) {
    if (b.radius > r) break;
    c += b.multiplicity;
  }
  return c;
}

RadialProfile radial_breakpoints(const ConvexBody& body, std::span<const double> x, double R, double H) {
  if (!(R >= 0.0) || !(H > 0.0)) throw Error(ErrorCode::invalid_argument, "need R >= 0 and H > 0");
  const double top = R + H;
  check_inputs(body, top, x);
  const int d = body.dim();
  const Box box = bounding_box(body, top, x);
  const FiberSolver solver(body, top, x);
  const std::size_t slots = static_cast<std::size_t>(box.hi[d - 1] - box.lo[d - 1] + 1);
  std::vector<std::vector<double>> radii(slots);
  std::vector<std::int64_t> base(slots, 0);
  for_each_fiber(box, d, [&](std::size_t slot, std::span<const long> rest) {
    const auto [lo, hi] = solver.range(rest);
    for (long k0 = lo; k0 <= hi; ++k0) {
      const double g = solver.entry_radius(k0, rest);
      if (g <= R) {
        ++base[slot];
      } else {
        radii[slot].push_back(g);
      }
    }
  });
  RadialProfile profile;
  profile.translation.assign(x.begin(), x.end());
  profile.R = R;
  profile.H = H;
  std::vector<double> all;
  for (std::size_t s = 0; s < slots; ++s) {
    profile.base_count += base[s];
    all.insert(all.end(), radii[s].begin(), radii[s].end());
  }
  std::sort(all.begin(), all.end());
  const bool exact = body.rational_form().has_value() && std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
  const double tol = exact ? 0.0 : 1e-12;
  for (double g : all) {
    if (!profile.breakpoints.empty() && g - profile.breakpoints.back().radius <= tol * g) {
      ++profile.breakpoints.back().multiplicity;
    } else {
      profile.breakpoints.push_back({g, 1});
    }
  }
  return profile;
}

double radial_l2_from_profile(const RadialProfile& profile, int dim, double volume, bool normalized) {
  const double R = profile.R;
  const double H = profile.H;
  if (normalized && !(R > 0.0)) throw Error(ErrorCode::invalid_argument, "normalized radial average needs R > 0");
  const int w = normalized ? -(dim - 1) : 0;
  const long double V = volume;
  std::vector<long double> pieces;
  pieces.reserve(profile.breakpoints.size() + 1);
  long double left = R;
  std::int64_t count = profile.base_count;
  for (const auto& b : profile.breakpoints) {
    pieces.push_back(segment_integral(left, b.radius, static_cast<long double>(count), V, dim, w));
    left = b.radius;
    count += b.multiplicity;
  }
  pieces.push_back(segment_integral(left, static_cast<long double>(R) + H, static_cast<long double>(count), V, dim, w));
  const long double total = pairwise_sum(std::span<const long double>(pieces));
  return static_cast<double>(std::max(0.0L, total) / H);
}

double radial_l2_exact(const ConvexBody& body, std::span<const double> x, double R, double H, bool normalized) {
  if (normalized && !(R > 0.0)) throw Error(ErrorCode::invalid_argument, "normalized radial average needs R > 0");
  const auto profile = radial_breakpoints(body, x, R, H);
  return radial_l2_from_profile(profile, body.dim(), volume(body), normalized);
}

}  // namespace latdisc
