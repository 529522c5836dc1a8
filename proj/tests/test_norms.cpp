#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "latdisc/error.hpp"
#include "latdisc/norms.hpp"
#include "latdisc/parallel.hpp"
#include "oracles.hpp"

using namespace latdisc;
using oracle::pi;

namespace {

NormRequest ball_request(const DilationMeasure& m) {
  NormRequest req{ConvexBody::ball(2), m};
  return req;
}

}  // namespace

TEST_CASE("Parseval value against a direct Bessel sum") {
  const auto v = mixed_norm_parseval_p2(ConvexBody::ball(2), DilationMeasure::dirac(), 1, 10, 400, true);
  // r^{2d} |chi_hat(r n)|^2 = 10^4 J_1(20 pi |n|)^2 / (100 |n|^2).
  double s = 0;
  for (long a = -400; a <= 400; ++a)
    for (long b = -400; b <= 400; ++b) {
      const long n2 = a * a + b * b;
      if (n2 == 0 || n2 > 160000) continue;
      const double j = std::cyl_bessel_j(1.0, 20 * pi * std::sqrt(double(n2)));
      s += 100 * j * j / double(n2);
    }
  const double expect = std::sqrt(s) / std::sqrt(10.0);
  CHECK(v.value == doctest::Approx(expect).epsilon(1e-10));
  CHECK(v.tail_bound > 0);
  CHECK(v.truncation == 400);
  // The omitted squared mass is covered by the recorded bound.
  const auto w = mixed_norm_parseval_p2(ConvexBody::ball(2), DilationMeasure::dirac(), 1, 10, 1200, true);
  CHECK(w.value * w.value - v.value * v.value <= v.tail_bound);
}

TEST_CASE("grid route matches the Parseval route") {
  auto req = ball_request(DilationMeasure::dirac());
  req.R = 10;
  req.grid = 512;
  const double grid = mixed_norm(req);
  const double parseval = mixed_norm_parseval_p2(req.body, req.measure, 1, 10, 400, true).value;
  CHECK(std::abs(grid - parseval) <= 0.02 * parseval);
}

TEST_CASE("power-mean monotonicity") {
  auto req = ball_request(DilationMeasure::uniform01());
  req.R = 6;
  req.H = 2;
  req.grid = 48;
  req.radial_mode = RadialMode::exact_sweep;
  const auto v = mixed_norms(req, {2, 3, 4, 6});
  for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i - 1] <= v[i]);
  req.p = 4;
  CHECK(mixed_norm(req) == v[2]);
}

TEST_CASE("self-convergence in the grid size") {
  auto req = ball_request(DilationMeasure::uniform01());
  req.R = 10;
  req.H = 10;
  req.p = 4;
  req.grid = 256;
  req.radial_mode = RadialMode::exact_sweep;
  const double coarse = mixed_norm(req);
  req.grid = 512;
  const double fine = mixed_norm(req);
  CHECK(coarse > 0);
  CHECK(std::isfinite(coarse));
  CHECK(std::abs(fine - coarse) <= 0.03 * fine);
}

TEST_CASE("radial modes agree for the uniform measure") {
  auto req = ball_request(DilationMeasure::uniform01());
  req.R = 5;
  req.H = 1;
  req.grid = 32;
  req.radial_mode = RadialMode::exact_sweep;
  const double exact = mixed_norm(req);
  req.radial_mode = RadialMode::node_quadrature;
  req.nodes = 512;
  CHECK(mixed_norm(req) == doctest::Approx(exact).epsilon(0.01));
}

TEST_CASE("lattice shifts of the grid change nothing") {
  auto req = ball_request(DilationMeasure::dirac());
  req.R = 7;
  req.grid = 40;
  req.p = 3;
  const double base = mixed_norm(req);
  req.grid_offset = {3.0, -2.0};
  CHECK(mixed_norm(req) == base);
}

TEST_CASE("thread count does not change the result") {
  auto req = ball_request(DilationMeasure::power_law(0.5));
  req.R = 4;
  req.grid = 24;
  req.nodes = 16;
  req.p = 3;
  const double one = mixed_norm(req);
  set_thread_count(4);
  const double four = mixed_norm(req);
  set_thread_count(1);
  CHECK(one == four);
}

TEST_CASE("request validation and budget") {
  auto req = ball_request(DilationMeasure::dirac());
  req.p = 1.5;
  CHECK_THROWS_AS(mixed_norm(req), Error);
  req.p = 2;
  req.grid = 1;
  CHECK_THROWS_AS(mixed_norm(req), Error);
  req.grid = 64;
  req.radial_mode = RadialMode::exact_sweep;
  CHECK_THROWS_AS(mixed_norm(req), Error);
  req.radial_mode = RadialMode::node_quadrature;
  req.R = 50;
  req.budget = 1e3;
  try {
    mixed_norm(req);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::budget_exceeded);
  }
}

TEST_CASE("critical index table") {
  struct Row {
    int d;
    double beta, A, alpha;
  };
  const double inf = std::numeric_limits<double>::infinity();
  const Row rows[] = {
      {2, 0.0, 4.0, 0.25},          {2, 0.5, 8.0, 0.375},        {2, 1.0, inf, 1.0},
      {2, 3.0, inf, 0.5},           {3, 0.0, 3.0, 1.0 / 3.0},    {3, 0.5, 4.0, 0.25},
      {3, 0.75, 4.8, 1.75 / 6.0},   {3, 1.0, 6.0, 5.0 / 6.0},    {3, 2.0, 6.0, 1.0 / 3.0},
      {4, 0.0, 8.0 / 3.0, 0.375},   {4, 0.5, 3.0, 1.0 / 3.0},    {4, 1.0, 4.0, 0.75},
      {4, 2.0, 4.0, 0.25},          {5, 1.0, 3.0, 4.0 / 6.0},    {5, inf, 3.0, 1.0 / 3.0},
  };
  for (const auto& r : rows) {
    const auto c = critical_index(r.d, r.beta);
    if (std::isinf(r.A)) {
      CHECK(std::isinf(c.A));
    } else {
      CHECK(c.A == doctest::Approx(r.A));
    }
    CHECK(c.alpha == doctest::Approx(r.alpha));
  }
}

TEST_CASE("scaling fit") {
  std::vector<std::pair<double, double>> power, flat;
  for (double R : {10.0, 20.0, 40.0, 80.0}) {
    power.emplace_back(R, std::sqrt(R));
    flat.emplace_back(R, 3.0);
  }
  CHECK(std::abs(scaling_fit(power).slope - 0.5) < 1e-12);
  CHECK(std::abs(scaling_fit(flat).slope) < 1e-12);
  std::vector<std::pair<double, double>> same(4, {5.0, 1.0});
  try {
    scaling_fit(same);
    FAIL("expected DegenerateFit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_fit);
  }
}

TEST_CASE("Kendall exponent from the Parseval route") {
  std::vector<std::pair<double, double>> samples;
  for (double R : {10.0, 20.0, 40.0, 80.0})
    samples.emplace_back(R, mixed_norm_parseval_p2(ConvexBody::ball(2), DilationMeasure::dirac(), 1, R, 400, false).value);
  CHECK(std::abs(scaling_fit(samples).slope - 0.5) <= 0.15);
}

TEST_CASE("blowup probe") {
  auto req = ball_request(DilationMeasure::dirac());
  req.grid = 32;
  const auto empty = blowup_probe(req, {}, {2.0, 3.0});
  CHECK(empty.values.empty());
  CHECK(empty.prediction.A == 4.0);
  const auto t = blowup_probe(req, {5.0, 9.0}, {2.0, 4.0});
  REQUIRE(t.values.size() == 2);
  CHECK(t.values[0][0] <= t.values[0][1]);
  CHECK_THROWS_AS(blowup_probe(req, {5.0}, {5.0}), Error);
}
