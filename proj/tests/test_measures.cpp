#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include "latdisc/error.hpp"
#include "latdisc/measures.hpp"
#include "oracles.hpp"

using namespace latdisc;
using oracle::pi;
using cd = std::complex<double>;

namespace {

cd expi(double t) { return {std::cos(t), std::sin(t)}; }

// int_0^1 e^{-2 pi i zeta r} dmu(r) for the power law via r = s^{1/(1-alpha)}.
cd power_law_oracle(double alpha, double zeta, double H = 1, double R = 0) {
  const double e = 1.0 / (1.0 - alpha);
  auto re = [&](double s) { return std::cos(-2 * pi * zeta * (R + H * std::pow(s, e))); };
  auto im = [&](double s) { return std::sin(-2 * pi * zeta * (R + H * std::pow(s, e))); };
  return {oracle::simpson(re, 0, 1, 200000), oracle::simpson(im, 0, 1, 200000)};
}

double bump(double r) {
  const double u = 2 * r - 1;
  return std::abs(u) < 1 ? std::exp(-1 / (1 - u * u)) : 0.0;
}

cd bump_oracle(double zeta) {
  const double mass = oracle::simpson(bump, 0, 1, 20000);
  auto re = [&](double r) { return bump(r) * std::cos(2 * pi * zeta * r); };
  auto im = [&](double r) { return -bump(r) * std::sin(2 * pi * zeta * r); };
  return cd(oracle::simpson(re, 0, 1, 20000), oracle::simpson(im, 0, 1, 20000)) / mass;
}

}  // namespace

TEST_CASE("closed-form transforms") {
  CHECK(std::abs(mu_hat(DilationMeasure::dirac(), 7.3) - cd(1, 0)) < 1e-15);
  CHECK(std::abs(mu_hat(DilationMeasure::uniform01(), 1.0)) < 1e-15);
  CHECK(std::abs(mu_hat(DilationMeasure::uniform01(), 0.0) - cd(1, 0)) < 1e-15);
  const auto u = DilationMeasure::uniform01();
  for (double z : {0.3, 2.5, -4.1}) {
    const cd expect = expi(-pi * z) * std::sin(pi * z) / (pi * z);
    CHECK(std::abs(mu_hat(u, z) - expect) < 1e-14);
  }
  CHECK(std::abs(mu_hat(DilationMeasure::dirac(0.25), 3.0) - expi(-2 * pi * 0.75)) < 1e-14);
}

TEST_CASE("power-law transform against direct quadrature") {
  for (double alpha : {0.3, 0.5, 0.8}) {
    const auto m = DilationMeasure::power_law(alpha);
    for (double z : {0.0, 0.7, 5.3, 40.0}) {
      CHECK(std::abs(mu_hat(m, z) - power_law_oracle(alpha, z)) < 1e-10);
    }
  }
}

TEST_CASE("smooth bump transform against direct quadrature") {
  const auto m = DilationMeasure::smooth_bump();
  for (double z : {0.0, 0.5, 3.7, 12.0, 31.4}) CHECK(std::abs(mu_hat(m, z) - bump_oracle(z)) < 1e-10);
  CHECK(std::isinf(m.beta()));
}

TEST_CASE("scaled transform") {
  CHECK(std::abs(mu_hat_scaled(DilationMeasure::dirac(), 5, 2, 0.25) - cd(-1, 0)) < 1e-14);
  const auto u = DilationMeasure::uniform01();
  auto re = [](double r) { return std::cos(-2 * pi * 0.25 * (3 + 2 * r)); };
  auto im = [](double r) { return std::sin(-2 * pi * 0.25 * (3 + 2 * r)); };
  const cd direct(oracle::simpson(re, 0, 1, 2000), oracle::simpson(im, 0, 1, 2000));
  CHECK(std::abs(mu_hat_scaled(u, 2, 3, 0.25) - direct) < 1e-10);
  for (const auto& m : {DilationMeasure::dirac(), u, DilationMeasure::power_law(0.4), DilationMeasure::smooth_bump()})
    CHECK(mu_hat_scaled(m, 3, 7, 0.0) == cd(1, 0));
}

TEST_CASE("scaled transform agrees with quadrature on random inputs") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> H(1, 5), R(1, 20), Z(-3, 3);
  const auto u = DilationMeasure::uniform01();
  const auto pl = DilationMeasure::power_law(0.5);
  for (int t = 0; t < 100; ++t) {
    const double h = H(rng), r = R(rng), z = Z(rng);
    auto re = [&](double s) { return std::cos(-2 * pi * z * (r + h * s)); };
    auto im = [&](double s) { return std::sin(-2 * pi * z * (r + h * s)); };
    const cd direct(oracle::simpson(re, 0, 1, 4000), oracle::simpson(im, 0, 1, 4000));
    CHECK(std::abs(mu_hat_scaled(u, h, r, z) - direct) < 1e-8);
    // r = s^2 turns the power law with alpha = 1/2 into a uniform variable s.
    auto re2 = [&](double s) { return std::cos(-2 * pi * z * (r + h * s * s)); };
    auto im2 = [&](double s) { return std::sin(-2 * pi * z * (r + h * s * s)); };
    const cd direct2(oracle::simpson(re2, 0, 1, 4000), oracle::simpson(im2, 0, 1, 4000));
    CHECK(std::abs(mu_hat_scaled(pl, h, r, z) - direct2) < 1e-8);
  }
}

TEST_CASE("quadrature nodes") {
  const auto d = quadrature_nodes(DilationMeasure::dirac(1.0), 3, 10, 5);
  REQUIRE(d.size() == 1);
  CHECK(d[0].node == 13.0);
  CHECK(d[0].weight == 1.0);

  double s = 0;
  for (const auto& q : quadrature_nodes(DilationMeasure::uniform01(), 1, 0, 8)) s += q.weight * q.node * q.node;
  CHECK(std::abs(s - 1.0 / 3.0) < 1e-14);

  for (const auto& m : {DilationMeasure::dirac(), DilationMeasure::uniform01(), DilationMeasure::power_law(0.5),
                        DilationMeasure::power_law(0.2), DilationMeasure::smooth_bump()}) {
    for (int n : {1, 7, 32}) {
      const double H = 2.5, R = 4;
      const auto nodes = quadrature_nodes(m, H, R, n);
      double w = 0;
      for (const auto& q : nodes) {
        CHECK(q.weight >= 0);
        CHECK(q.node >= R + H * m.support_lo() - 1e-12);
        CHECK(q.node <= R + H * m.support_hi() + 1e-12);
        w += q.weight;
      }
      CHECK(std::abs(w - 1.0) < 1e-12);
    }
  }
  CHECK_THROWS_AS(quadrature_nodes(DilationMeasure::uniform01(), 1, 1, 0), Error);
}

TEST_CASE("power-law rule integrates smooth functions of r") {
  // int_0^1 r (1 - alpha) r^{-alpha} dr = (1 - alpha) / (2 - alpha).
  const double alpha = 0.5;
  double s = 0;
  for (const auto& q : quadrature_nodes(DilationMeasure::power_law(alpha), 1, 0, 32)) s += q.weight * q.node;
  CHECK(std::abs(s - (1 - alpha) / (2 - alpha)) < 1e-12);
}

TEST_CASE("adaptive integration") {
  const auto u = DilationMeasure::uniform01();
  const double v = integrate_against(u, 2, 3, [](double r) { return std::exp(r); });
  CHECK(v == doctest::Approx((std::exp(5.0) - std::exp(3.0)) / 2).epsilon(1e-10));
}

TEST_CASE("decay classes") {
  const auto u = DilationMeasure::uniform01();
  double sup = 0;
  for (int z = 1; z <= 1000; ++z) sup = std::max(sup, std::abs(mu_hat(u, z + 0.5)) * (1.5 + z));
  CHECK(sup <= 2.0);
  CHECK(u.beta() == 1.0);
  CHECK(DilationMeasure::dirac().beta() == 0.0);
  for (double alpha : {0.25, 0.5}) {
    const auto m = DilationMeasure::power_law(alpha);
    CHECK(m.beta() == doctest::Approx(1 - alpha));
    double worst = 0;
    for (int z = 1; z <= 1000; z += 7) {
      const double zeta = z + 0.37;
      worst = std::max(worst, std::abs(mu_hat(m, zeta)) * std::pow(1 + zeta, 1 - alpha));
    }
    CHECK(worst <= m.decay_constant() * (1 + 1e-9));
    CHECK(std::isfinite(worst));
  }
}

TEST_CASE("invalid measures") {
  CHECK_THROWS_AS(DilationMeasure::power_law(0.0), Error);
  CHECK_THROWS_AS(DilationMeasure::power_law(1.0), Error);
  CHECK_THROWS_AS(DilationMeasure::uniform01(0.5, 0.2), Error);
}
