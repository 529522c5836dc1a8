#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "latdisc/bodies.hpp"
#include "latdisc/error.hpp"
#include "oracles.hpp"

using namespace latdisc;
using oracle::pi;

namespace {

ConvexBody diag12() {
  Eigen::MatrixXd M(2, 2);
  M << 1, 0, 0, 2;
  return ConvexBody::ellipsoid(M, Eigen::VectorXd::Zero(2));
}

ConvexBody shifted_unit(double px) {
  Eigen::VectorXd p(2);
  p << px, 0;
  return ConvexBody::ellipsoid(Eigen::MatrixXd::Identity(2, 2), p);
}

ConvexBody irrational(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  Eigen::MatrixXd M(2, 2);
  M << 1.1 + u(rng), u(rng), u(rng), 0.9 + u(rng);
  Eigen::VectorXd p(2);
  p << 0.5 * u(rng), 0.5 * u(rng);
  return ConvexBody::ellipsoid(M, p);
}

bool has_pair(const std::vector<CollisionPair>& list, IntVec a, IntVec b) {
  return std::any_of(list.begin(), list.end(), [&](const CollisionPair& c) {
    return (c.m == a && c.n == b) || (c.m == b && c.n == a);
  });
}

}  // namespace

TEST_CASE("support function values") {
  const std::vector<double> x{3, 4};
  CHECK(support(ConvexBody::ball(2), x) == doctest::Approx(5.0));
  const std::vector<double> e2{0, 1};
  CHECK(support(diag12(), e2) == doctest::Approx(0.5));
  const std::vector<double> e1{1, 0};
  CHECK(support(shifted_unit(0.2), e1) == doctest::Approx(1.2));
}

TEST_CASE("support function matches a boundary sweep") {
  const auto body = irrational(7);
  const Eigen::MatrixXd Minv = body.matrix().inverse();
  for (double angle : {0.3, 1.7, 2.9, 4.4, 5.8}) {
    const std::vector<double> x{3 * std::cos(angle), 3 * std::sin(angle)};
    double best = -1e300;
    for (int i = 0; i < 200000; ++i) {
      const double t = 2 * pi * i / 200000;
      const Eigen::Vector2d y = body.center() + Minv * Eigen::Vector2d(std::cos(t), std::sin(t));
      best = std::max(best, x[0] * y(0) + x[1] * y(1));
    }
    CHECK(support(body, x) == doctest::Approx(best).epsilon(1e-8));
  }
}

TEST_CASE("gauge values") {
  const std::vector<double> v{0, -2};
  CHECK(gauge(ConvexBody::ball(2), v) == doctest::Approx(2.0));
  const std::vector<double> w{0, 1};
  CHECK(gauge(diag12(), w) == doctest::Approx(2.0));
  const std::vector<double> zero{0, 0};
  CHECK(gauge(diag12(), zero) == 0.0);
  CHECK(gauge(irrational(3), zero) == 0.0);
}

TEST_CASE("gauge agrees with bisection on membership") {
  const auto body = irrational(11);
  const auto& M = body.matrix();
  for (double angle : {0.1, 1.2, 2.5, 3.9, 5.1}) {
    const Eigen::Vector2d v(2.5 * std::cos(angle), 2.5 * std::sin(angle));
    double lo = 1e-6, hi = 100;
    for (int i = 0; i < 200; ++i) {
      const double t = 0.5 * (lo + hi);
      ((M * (v / t - body.center())).norm() <= 1.0 ? hi : lo) = t;
    }
    const std::vector<double> vv{v(0), v(1)};
    CHECK(gauge(body, vv) == doctest::Approx(hi).epsilon(1e-10));
  }
}

TEST_CASE("volumes") {
  CHECK(volume(ConvexBody::ball(3)) == doctest::Approx(4 * pi / 3));
  CHECK(volume(diag12()) == doctest::Approx(pi / 2));
  CHECK(volume(ConvexBody::ball(2)) == doctest::Approx(pi));
}

TEST_CASE("curvature") {
  const std::vector<double> e1{1, 0};
  const std::vector<double> odd{0.3, -0.8};
  CHECK(gauss_curvature(ConvexBody::ball(2), odd) == doctest::Approx(1.0));
  CHECK(gauss_curvature(diag12(), e1) == doctest::Approx(4.0));
  // Semi-axes 1 and 1/2: curvature a/b^2 at (1,0), b/a^2 at (0,1/2).
  const std::vector<double> e2{0, 1};
  CHECK(gauss_curvature(diag12(), e2) == doctest::Approx(0.5));
  CHECK(min_gauss_curvature(diag12()) == doctest::Approx(0.5));
  CHECK(curvature_coeffs(ConvexBody::ball(2), e1).a0b0_product == doctest::Approx(1.0 / (4 * pi * pi)));
}

TEST_CASE("collision search") {
  CHECK(has_pair(lattice_collisions(ConvexBody::ball(2), 5, 1e-9), {3, 4}, {5, 0}));
  CHECK(has_pair(lattice_collisions(diag12(), 2, 1e-9), {1, 0}, {0, 2}));
  CHECK(lattice_collisions(irrational(5), 50, 1e-9).empty());
  CHECK_THROWS_AS(lattice_collisions(ConvexBody::ball(2), 0, 1e-9), Error);
}

TEST_CASE("rational form detection") {
  CHECK(ConvexBody::ball(3).rational_form().has_value());
  CHECK(diag12().rational_form().has_value());
  CHECK_FALSE(irrational(1).rational_form().has_value());
}

TEST_CASE("lattice point enumeration visits the closed ball") {
  std::int64_t n = 0;
  for_each_lattice_point(2, 100, [&](std::span<const long>) { ++n; });
  CHECK(n == 317);
}
