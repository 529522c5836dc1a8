#include "latdisc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "latdisc/bessel.hpp"
#include "latdisc/error.hpp"
#include "latdisc/parallel.hpp"

namespace latdisc {

using std::numbers::pi;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return s;
}

long norm2(std::span<const long> v) {
  long s = 0;
  for (long c : v) s += c * c;
  return s;
}

// eta = (M^t)^{-1} xi
std::array<double, kMaxBodyDim> dual_image(const ConvexBody& body, std::span<const double> xi) {
  std::array<double, kMaxBodyDim> eta{};
  const int d = body.dim();
  for (int i = 0; i < d; ++i) {
    double row = 0.0;
    for (int j = 0; j < d; ++j) row += body.inv_t(i, j) * xi[j];
    eta[i] = row;
  }
  return eta;
}

double ball_asymptotic(int d, double rho, int terms) {
  const double phase = 2.0 * pi * rho - (d + 1) * pi / 4.0;
  double value = std::pow(rho, -0.5 * (d + 1)) * std::cos(phase) / pi;
  if (terms == 2) value -= (d * d - 1.0) / (16.0 * pi * pi) * std::pow(rho, -0.5 * (d + 3)) * std::sin(phase);
  return value;
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

double sphere_area(int d) { return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d); }

// (2 pi)^{-2} (K(n) K(n-k))^{-1/2}, the modulus of c(n) conj(c(n-k)).
double amplitude_product(const ConvexBody& body, std::span<const long> n, std::span<const long> nk) {
  constexpr double kPrefactor = 1.0 / (4.0 * pi * pi);
  if (body.kind() == BodyKind::ball) return kPrefactor;
  const int d = body.dim();
  std::array<double, kMaxBodyDim> a{}, b{};
  for (int i = 0; i < d; ++i) {
    a[i] = static_cast<double>(n[i]);
    b[i] = static_cast<double>(nk[i]);
  }
  const double ka = gauss_curvature(body, std::span<const double>(a.data(), d));
  const double kb = gauss_curvature(body, std::span<const double>(b.data(), d));
  return kPrefactor / std::sqrt(ka * kb);
}

std::complex<double> pairwise_complex(const std::vector<std::complex<double>>& terms) {
  std::vector<double> re(terms.size()), im(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    re[i] = terms[i].real();
    im[i] = terms[i].imag();
  }
  return {pairwise_sum(re), pairwise_sum(im)};
}

std::vector<IntVec> lattice_points(int d, long N) {
  std::vector<IntVec> pts;
  for_each_lattice_point(d, N * N, [&](std::span<const long> n) { pts.emplace_back(n.begin(), n.end()); });
  return pts;
}

}  // namespace

double ft_ball_radial(int dim, double rho) {
  if (rho < 1e-8) return unit_ball_volume(dim);
  return std::pow(rho, -0.5 * dim) * bessel_j(0.5 * dim, 2.0 * pi * rho);
}

std::complex<double> ft_body_exact(const ConvexBody& body, std::span<const double> xi) {
  const int d = body.dim();
  if (body.kind() == BodyKind::ball) return ft_ball_radial(d, std::sqrt(norm2(xi)));
  const auto eta = dual_image(body, xi);
  const double rho = std::sqrt(norm2(std::span<const double>(eta.data(), d)));
  double shift = 0.0;
  for (int i = 0; i < d; ++i) shift += xi[i] * body.p(i);
  return std::polar(ft_ball_radial(d, rho) / body.abs_det(), -2.0 * pi * shift);
}

std::complex<double> ft_body_asymptotic(const ConvexBody& body, std::span<const double> xi, int terms) {
  if (terms != 1 && terms != 2) throw Error(ErrorCode::invalid_argument, "terms must be 1 or 2");
  const int d = body.dim();
  if (std::sqrt(norm2(xi)) < 1.0) throw Error(ErrorCode::too_small_frequency, "expansion needs |xi| >= 1");
  if (body.kind() == BodyKind::ball) return ball_asymptotic(d, std::sqrt(norm2(xi)), terms);
  // Phases exp(-2 pi i g(xi)) and exp(2 pi i g(-xi)) with K^{-1/2} amplitudes
  // are exactly the ball expansion pulled back through the affine map.
  const auto eta = dual_image(body, xi);
  const double rho = std::sqrt(norm2(std::span<const double>(eta.data(), d)));
  double shift = 0.0;
  for (int i = 0; i < d; ++i) shift += xi[i] * body.p(i);
  return std::polar(ball_asymptotic(d, rho, terms) / body.abs_det(), -2.0 * pi * shift);
}

double ft_decay_constant(const ConvexBody& body) {
  const int d = body.dim();
  const double c = bessel_envelope(0.5 * d) / std::sqrt(2.0 * pi);
  if (body.kind() == BodyKind::ball) return c;
  return c * std::pow(body.sigma_max(), 0.5 * (d + 1)) / body.abs_det();
}

double lattice_tail_sum(int dim, double s, double N) {
  const double h = 0.5 * std::sqrt(static_cast<double>(dim));
  if (!(s > dim) || !(N > 2.0 * h)) return kInf;
  // Each point owns its unit cube; |n| >= |y| - h on the cube.
  const double base = N - 2.0 * h;
  double sum = 0.0;
  for (int j = 0; j <= dim - 1; ++j) {
    sum += binomial(dim - 1, j) * std::pow(h, dim - 1 - j) * std::pow(base, j - s + 1.0) / (s - j - 1.0);
  }
  return sphere_area(dim) * sum;
}

double hyperplane_tail_sum(int dim, double s, double N) {
  if (!(s > dim - 1) || !(N > 0.0)) return kInf;
  // Counting function A(rho) <= (2 rho + 1)^{d-1}, then partial summation.
  double sum = 0.0;
  for (int j = 0; j <= dim - 1; ++j) sum += binomial(dim - 1, j) * std::pow(2.0, j) * std::pow(N, j - s) / (s - j);
  return s * sum;
}

Mollifier::Mollifier(int dim, double epsilon, double lambda)
    : dim_(dim), epsilon_(epsilon), lambda_(lambda), nu_(0.5 * dim + lambda) {
  if (dim < 2 || !(epsilon > 0.0) || !(lambda >= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "mollifier needs d >= 2, eps > 0, lambda >= 1");
  }
  gamma_factor_ = std::tgamma(nu_ + 1.0);
  envelope_ = bessel_envelope(nu_);
}

double Mollifier::transform(double t) const {
  const double u = pi * epsilon_ * std::abs(t);
  if (u < 1e-6) return 1.0 - u * u / (nu_ + 1.0);
  return gamma_factor_ * std::pow(u, -nu_) * std::cyl_bessel_j(nu_, 2.0 * u);
}

double Mollifier::transform_bound(double t) const {
  if (t == 0.0) return 1.0;
  return std::min(1.0, decay_coefficient() * std::pow(std::abs(t), -nu_ - 0.5));
}

double Mollifier::decay_coefficient() const {
  return gamma_factor_ * std::pow(pi * epsilon_, -nu_) * envelope_ / std::sqrt(2.0 * pi * epsilon_);
}

Sandwich mollified_discrepancy(const ConvexBody& body, double r, std::span<const double> x, double delta,
                               const Mollifier& mollifier, long N) {
  const int d = body.dim();
  if (!(r >= 1.0)) throw Error(ErrorCode::invalid_argument, "sandwich needs r >= 1");
  if (!(delta > 0.0 && delta <= 1.0)) throw Error(ErrorCode::invalid_argument, "delta must lie in (0, 1]");
  if (static_cast<int>(x.size()) != d || mollifier.dim() != d) {
    throw Error(ErrorCode::invalid_argument, "dimension mismatch");
  }
  if (mollifier.epsilon() > inradius_about_origin(body) * (1.0 + 1e-12)) {
    throw Error(ErrorCode::invalid_argument, "mollifier support does not fit inside the body");
  }
  if (N < 0) throw Error(ErrorCode::invalid_argument, "truncation must be >= 0");

  const double vol = volume(body);
  const double s_lo = r - delta;
  const double s_hi = r + delta;
  const double ft_c = ft_decay_constant(body);
  const double nu = mollifier.order();
  // |phi_hat(delta n)| <= A (delta |n|)^{-nu-1/2} for the mollifier bound.
  const double a_moll = mollifier.decay_coefficient();
  const double decay = nu + 0.5 + 0.5 * (d + 1);

  auto tail_for = [&](double s, long n) {
    return std::pow(s, d) * a_moll * std::pow(delta, -(nu + 0.5)) * ft_c * std::pow(s, -0.5 * (d + 1)) *
           lattice_tail_sum(d, decay, static_cast<double>(n));
  };

  auto evaluate = [&](long trunc) {
    const auto pts = lattice_points(d, trunc);
    std::vector<double> lo(pts.size()), hi(pts.size()), mag(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
      const auto& n = pts[i];
      if (norm2(std::span<const long>(n)) == 0) return;
      std::array<double, kMaxBodyDim> nd{};
      double dot_x = 0.0;
      double dot_p = 0.0;
      for (int j = 0; j < d; ++j) {
        nd[j] = static_cast<double>(n[j]);
        dot_x += nd[j] * x[j];
        dot_p += nd[j] * body.p(j);
      }
      const std::span<const double> nv(nd.data(), d);
      const double phi = mollifier.transform(delta * std::sqrt(norm2(nv)));
      double rho = std::sqrt(norm2(nv));
      double scale = 1.0;
      if (body.kind() == BodyKind::ellipsoid) {
        const auto eta = dual_image(body, nv);
        rho = std::sqrt(norm2(std::span<const double>(eta.data(), d)));
        scale = 1.0 / body.abs_det();
      }
      // Real part of chi_hat(s n) exp(2 pi i n.x); the imaginary parts cancel over +-n.
      const double f_lo = phi * scale * ft_ball_radial(d, s_lo * rho) * std::cos(2.0 * pi * (dot_x - s_lo * dot_p));
      const double f_hi = phi * scale * ft_ball_radial(d, s_hi * rho) * std::cos(2.0 * pi * (dot_x - s_hi * dot_p));
      lo[i] = f_lo;
      hi[i] = f_hi;
      mag[i] = std::abs(f_lo) + std::abs(f_hi);
    });
    const double sum_lo = pairwise_sum(lo);
    const double sum_hi = pairwise_sum(hi);
    const double abs_sum = pairwise_sum(mag);
    Sandwich out;
    out.truncation = trunc;
    const double tail_lo = tail_for(s_lo, trunc);
    const double tail_hi = tail_for(s_hi, trunc);
    const double rounding = 1e-12 * (std::pow(s_hi, d) * (abs_sum + vol) + 1.0);
    out.lower = vol * (std::pow(s_lo, d) - std::pow(r, d)) + std::pow(s_lo, d) * sum_lo - tail_lo - rounding;
    out.upper = vol * (std::pow(s_hi, d) - std::pow(r, d)) + std::pow(s_hi, d) * sum_hi + tail_hi + rounding;
    out.tail = tail_lo + tail_hi;
    return out;
  };

  if (N > 0) {
    auto out = evaluate(N);
    if (!(out.tail <= 0.1 * (out.upper - out.lower))) {
      throw Error(ErrorCode::truncation_too_coarse, "tail bound exceeds 10% of the sandwich width");
    }
    return out;
  }
  // Smallest power-of-two truncation whose tail is under 1% of the width.
  long trunc = 8;
  while (true) {
    auto out = evaluate(trunc);
    if (out.tail <= 0.01 * (out.upper - out.lower)) return out;
    if (std::pow(2.0 * trunc, d) > 1e8) {
      if (out.tail <= 0.1 * (out.upper - out.lower)) return out;
      throw Error(ErrorCode::truncation_too_coarse, "no affordable truncation meets the tail target");
    }
    trunc *= 2;
  }
}

SpectralSum f0_coefficient(const ConvexBody& body, const DilationMeasure& measure, double H, double R,
                           std::span<const long> k, long N) {
  const int d = body.dim();
  if (static_cast<int>(k.size()) != d) throw Error(ErrorCode::invalid_argument, "k has the wrong dimension");
  if (N < 1) throw Error(ErrorCode::invalid_argument, "truncation must be >= 1");
  const double z = 0.5 * (d + 1);
  const auto pts = lattice_points(d, N);
  std::vector<std::complex<double>> terms(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const auto& n = pts[i];
    IntVec nk(d);
    for (int j = 0; j < d; ++j) nk[j] = n[j] - k[j];
    const long a2 = norm2(std::span<const long>(n));
    const long b2 = norm2(std::span<const long>(nk));
    if (a2 == 0 || b2 == 0) return;
    const double gn = support(body, std::span<const long>(n));
    const double gnk = support(body, std::span<const long>(nk));
    const double amp = amplitude_product(body, n, nk) * std::pow(static_cast<double>(a2), -0.5 * z) *
                       std::pow(static_cast<double>(b2), -0.5 * z);
    terms[i] = amp * std::polar(1.0, 2.0 * pi * (gnk - gn) * R) * mu_hat(measure, H * (gn - gnk));
  });
  SpectralSum out;
  out.value = pairwise_complex(terms);
  out.truncation_radius = static_cast<double>(N);
  const double kn = std::sqrt(static_cast<double>(norm2(k)));
  const double kmin = min_gauss_curvature(body);
  if (kn < N) {
    out.tail_bound = 1.0 / (4.0 * pi * pi * kmin) * std::pow(1.0 - kn / N, -z) *
                     lattice_tail_sum(d, d + 1.0, static_cast<double>(N));
  } else {
    out.tail_bound = kInf;
  }
  return out;
}

SpectralSum g_limit_coefficient(const ConvexBody& body, std::span<const long> k, long N, double tol) {
  const int d = body.dim();
  if (static_cast<int>(k.size()) != d) throw Error(ErrorCode::invalid_argument, "k has the wrong dimension");
  if (N < 1) throw Error(ErrorCode::invalid_argument, "truncation must be >= 1");
  const double z = 0.5 * (d + 1);
  const long k2 = norm2(k);
  const long N2 = N * N;
  const double kmin = min_gauss_curvature(body);
  const double pref = 1.0 / (4.0 * pi * pi * kmin);
  const auto& form = body.rational_form();

  auto term = [&](std::span<const long> n, std::span<const long> nk) {
    return 2.0 * amplitude_product(body, n, nk) * std::pow(static_cast<double>(norm2(n)), -0.5 * z) *
           std::pow(static_cast<double>(norm2(nk)), -0.5 * z);
  };

  SpectralSum out;
  out.truncation_radius = static_cast<double>(N);
  if (k2 == 0) {
    // Every n collides with itself.
    const auto pts = lattice_points(d, N);
    std::vector<double> terms(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
      if (norm2(std::span<const long>(pts[i])) != 0) terms[i] = term(pts[i], pts[i]);
    });
    out.value = pairwise_sum(terms);
    out.tail_bound = 2.0 * pref * lattice_tail_sum(d, d + 1.0, static_cast<double>(N));
    return out;
  }

  const double kn = std::sqrt(static_cast<double>(k2));
  const double shrink = kn < N ? std::pow(1.0 - kn / N, -z) : kInf;
  std::vector<double> terms;
  if (form) {
    // q(n-k) = q(n) reduces to the hyperplane a.n = b with a = 2 Q k, b = q(k).
    std::vector<std::int64_t> a(d, 0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a[i] += 2 * form->q[i * d + j] * k[j];
    const __int128 b = form->eval(k);
    int pivot = 0;
    for (int i = 1; i < d; ++i)
      if (std::llabs(a[i]) > std::llabs(a[pivot])) pivot = i;
    IntVec n(d), nk(d);
    for_each_lattice_point(d - 1, N2, [&](std::span<const long> rest) {
      __int128 acc = b;
      for (int i = 0, r = 0; i < d; ++i) {
        if (i == pivot) continue;
        n[i] = rest[r++];
        acc -= static_cast<__int128>(a[i]) * n[i];
      }
      if (acc % a[pivot] != 0) return;
      n[pivot] = static_cast<long>(acc / a[pivot]);
      for (int i = 0; i < d; ++i) nk[i] = n[i] - k[i];
      const long n2 = norm2(std::span<const long>(n));
      const long nk2 = norm2(std::span<const long>(nk));
      if (n2 == 0 || nk2 == 0 || n2 > N2 || nk2 > N2) return;
      terms.push_back(term(n, nk));
    });
    out.tail_bound = 2.0 * 2.0 * pref * shrink * hyperplane_tail_sum(d, d + 1.0, static_cast<double>(N));
  } else {
    const auto pts = lattice_points(d, N);
    std::vector<double> slot(pts.size(), 0.0);
    std::vector<char> hit(pts.size(), 0);
    parallel_for(pts.size(), [&](std::size_t i) {
      const auto& n = pts[i];
      IntVec nk(d);
      for (int j = 0; j < d; ++j) nk[j] = n[j] - k[j];
      const long n2 = norm2(std::span<const long>(n));
      const long nk2 = norm2(std::span<const long>(nk));
      if (n2 == 0 || nk2 == 0 || nk2 > N2) return;
      const double gn = support(body, std::span<const long>(n));
      const double gnk = support(body, std::span<const long>(nk));
      if (std::abs(gn - gnk) < tol * std::max(1.0, gn)) {
        slot[i] = term(n, nk);
        hit[i] = 1;
      }
    });
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (hit[i]) {
        terms.push_back(slot[i]);
        out.suspected = true;
      }
    }
    out.tail_bound = 2.0 * 2.0 * pref * shrink * lattice_tail_sum(d, d + 1.0, static_cast<double>(N));
  }
  out.value = pairwise_sum(terms);
  return out;
}

GValue g_limit_eval(const ConvexBody& body, std::span<const double> x, long K, long N, double tol) {
  const int d = body.dim();
  if (K < 0) throw Error(ErrorCode::invalid_argument, "K must be >= 0");
  if (static_cast<int>(x.size()) != d) throw Error(ErrorCode::invalid_argument, "x has the wrong dimension");
  const auto ks = lattice_points(d, K);
  std::vector<SpectralSum> coeffs(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) { coeffs[i] = g_limit_coefficient(body, ks[i], N, tol); });
  std::vector<std::complex<double>> terms(ks.size());
  std::vector<double> tails(ks.size());
  GValue out;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    double phase = 0.0;
    for (int j = 0; j < d; ++j) phase += ks[i][j] * x[j];
    terms[i] = coeffs[i].value * std::polar(1.0, 2.0 * pi * phase);
    tails[i] = coeffs[i].tail_bound;
    out.suspected = out.suspected || coeffs[i].suspected;
  }
  const auto total = pairwise_complex(terms);
  if (!(std::abs(total.imag()) < 1e-8)) {
    throw Error(ErrorCode::symmetry_violation, "limit function has a non-negligible imaginary part");
  }
  out.value = total.real();
  out.tail_bound = pairwise_sum(tails);
  return out;
}

}  // namespace latdisc
