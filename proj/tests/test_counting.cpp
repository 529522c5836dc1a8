#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "latdisc/counting.hpp"
#include "latdisc/error.hpp"
#include "latdisc/parallel.hpp"
#include "oracles.hpp"

using namespace latdisc;
using oracle::pi;

namespace {

ConvexBody diag12() {
  Eigen::MatrixXd M(2, 2);
  M << 1, 0, 0, 2;
  return ConvexBody::ellipsoid(M, Eigen::VectorXd::Zero(2));
}

ConvexBody random_ellipsoid(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> off(-0.3, 0.3), diag(0.7, 1.5);
  Eigen::MatrixXd M(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) M(i, j) = i == j ? diag(rng) : off(rng);
  Eigen::VectorXd p(d);
  for (int i = 0; i < d; ++i) p(i) = 0.3 * off(rng);
  return ConvexBody::ellipsoid(M, p);
}

}  // namespace

TEST_CASE("Gauss circle counts") {
  const auto ball = ConvexBody::ball(2);
  const std::vector<double> zero{0, 0};
  CHECK(count_lattice_points(ball, 1, zero) == 5);
  CHECK(count_lattice_points(ball, 10, zero) == 317);
  CHECK(count_lattice_points(ball, 5, zero) == 81);
  CHECK(count_lattice_points(ball, 10, zero) == oracle::count_ball(2, 10, {0, 0}));
  CHECK(count_by_gauge_scan(ball, 10, zero) == 317);
}

TEST_CASE("counts against brute force") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0, 1);
  for (int d = 2; d <= 5; ++d) {
    for (int t = 0; t < 6; ++t) {
      const auto body = random_ellipsoid(rng, d);
      std::vector<double> x(d);
      for (auto& v : x) v = u(rng);
      const double r = d <= 3 ? 2 + 10 * u(rng) : 1 + 3 * u(rng);
      const auto expect = oracle::count_ellipsoid(body.matrix(), body.center(), r, x);
      CHECK(count_lattice_points(body, r, x) == expect);
      CHECK(count_by_gauge_scan(body, r, x) == expect);
    }
  }
}

TEST_CASE("counting does not depend on the thread count") {
  const auto ball = ConvexBody::ball(3);
  const std::vector<double> x{0.1, 0.2, 0.3};
  const auto one = count_lattice_points(ball, 25.5, x);
  set_thread_count(3);
  const auto three = count_lattice_points(ball, 25.5, x);
  set_thread_count(1);
  CHECK(one == three);
}

TEST_CASE("counting preconditions") {
  const std::vector<double> x(6, 0.0);
  CHECK_THROWS_AS(count_lattice_points(ConvexBody::ball(6), 2, x), Error);
  const std::vector<double> zero{0, 0};
  CHECK_THROWS_AS(count_lattice_points(ConvexBody::ball(2), -1, zero), Error);
}

TEST_CASE("discrepancy values") {
  const auto ball = ConvexBody::ball(2);
  const std::vector<double> zero{0, 0};
  CHECK(discrepancy(ball, 1, zero, false) == doctest::Approx(5 - pi));
  CHECK(discrepancy(ball, 1, zero, true) == doctest::Approx(5 - pi));
  CHECK(discrepancy(ball, 0.5, zero, false) == doctest::Approx(1 - pi / 4));
  CHECK(discrepancy(ball, 10, zero, true) == doctest::Approx((317 - 100 * pi) / std::sqrt(10.0)));
}

TEST_CASE("breakpoints") {
  const auto ball = ConvexBody::ball(2);
  const std::vector<double> zero{0, 0};
  const auto p = radial_breakpoints(ball, zero, 0.9, 0.6);
  CHECK(p.base_count == 1);
  REQUIRE(p.breakpoints.size() == 2);
  CHECK(p.breakpoints[0].radius == doctest::Approx(1.0));
  CHECK(p.breakpoints[0].multiplicity == 4);
  CHECK(p.breakpoints[1].radius == doctest::Approx(std::sqrt(2.0)));
  CHECK(p.breakpoints[1].multiplicity == 4);

  const auto q = radial_breakpoints(ball, zero, 0.5, 0.4);
  CHECK(q.base_count == 1);
  CHECK(q.breakpoints.empty());

  const auto e = radial_breakpoints(diag12(), zero, 0.0, 2.1);
  const bool has_two = std::any_of(e.breakpoints.begin(), e.breakpoints.end(),
                                   [](const Breakpoint& b) { return std::abs(b.radius - 2.0) < 1e-12; });
  CHECK(has_two);
}

TEST_CASE("profile counts match direct counts") {
  std::mt19937_64 rng(5);
  const auto body = random_ellipsoid(rng, 3);
  const std::vector<double> x{0.4, 0.1, 0.8};
  const auto p = radial_breakpoints(body, x, 3.0, 2.0);
  std::int64_t total = p.base_count;
  for (const auto& b : p.breakpoints) total += b.multiplicity;
  CHECK(total == count_lattice_points(body, 5.0, x));
  for (double r : {3.0, 3.37, 4.01, 4.99, 5.0}) CHECK(p.count_at(r) == count_lattice_points(body, r, x));
}

TEST_CASE("radial average on a breakpoint-free segment") {
  const auto ball = ConvexBody::ball(2);
  const std::vector<double> zero{0, 0};
  auto F = [](double r) { return std::log(r) - pi * r * r + pi * pi * std::pow(r, 4) / 4; };
  CHECK(radial_l2_exact(ball, zero, 0.5, 0.4) == doctest::Approx((F(0.9) - F(0.5)) / 0.4).epsilon(1e-13));
}

TEST_CASE("short windows recover the pointwise value") {
  std::mt19937_64 rng(17);
  const auto body = random_ellipsoid(rng, 2);
  const std::vector<double> x{0.3, 0.45};
  for (double r : {2.345, 6.789}) {
    const double D = discrepancy(body, r, x, false);
    CHECK(radial_l2_exact(body, x, r, 1e-6) == doctest::Approx(D * D / r).epsilon(1e-5));
    const auto ball3 = ConvexBody::ball(3);
    const std::vector<double> y{0.1, 0.2, 0.3};
    const double D3 = discrepancy(ball3, r, y, false);
    CHECK(radial_l2_exact(ball3, y, r, 1e-6) == doctest::Approx(D3 * D3 / (r * r)).epsilon(1e-5));
  }
}

TEST_CASE("radial average against piecewise quadrature") {
  const auto ball = ConvexBody::ball(2);
  const std::vector<double> x{0.5, 0.5};
  // Jumps are the distances |k + x| in (1, 2]; enumerate them independently.
  std::vector<double> cuts{1.0, 2.0};
  for (long a = -4; a <= 4; ++a)
    for (long b = -4; b <= 4; ++b) {
      const double r = std::hypot(a + 0.5, b + 0.5);
      if (r > 1 && r < 2) cuts.push_back(r);
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    // Evaluate D just inside the piece so the count is the one valid on (a, b).
    const int n = 10000 / static_cast<int>(cuts.size()) * 2;
    total += oracle::simpson(
        [&](double r) {
          const double rr = std::clamp(r, a + 1e-12 * b, b - 1e-12 * b);
          const double c = static_cast<double>(oracle::count_ball(2, rr, x));
          const double D = c - pi * r * r;
          return D * D / r;
        },
        a, b, n);
  }
  CHECK(radial_l2_exact(ball, x, 1.0, 1.0) == doctest::Approx(total).epsilon(1e-6));
}

TEST_CASE("radial average is additive over splits") {
  std::mt19937_64 rng(23);
  const auto body = random_ellipsoid(rng, 2);
  const std::vector<double> x{0.77, 0.05};
  const double whole = 3.0 * radial_l2_exact(body, x, 2.0, 3.0);
  const double parts = 1.2 * radial_l2_exact(body, x, 2.0, 1.2) + 1.8 * radial_l2_exact(body, x, 3.2, 1.8);
  CHECK(std::abs(whole - parts) <= 1e-12 * whole);
  const double raw = radial_l2_exact(body, x, 0.0, 1.5, false);
  CHECK(std::isfinite(raw));
  CHECK_THROWS_AS(radial_l2_exact(body, x, 0.0, 1.5, true), Error);
}

TEST_CASE("profile route equals the direct route") {
  const auto ball = ConvexBody::ball(3);
  const std::vector<double> x{0.25, 0.5, 0.75};
  const auto prof = radial_breakpoints(ball, x, 4.0, 1.5);
  CHECK(radial_l2_from_profile(prof, 3, volume(ball), true) == radial_l2_exact(ball, x, 4.0, 1.5));
}
