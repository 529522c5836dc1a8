#include "latdisc/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>

#include "latdisc/error.hpp"
#include "latdisc/parallel.hpp"

namespace latdisc {

using std::numbers::pi;

namespace {

// |n|^2 <= radius^2, with slack for radii given as square roots of integers.
bool within(std::int64_t n2, double radius) {
  return static_cast<long double>(n2) <= static_cast<long double>(radius) * radius * (1.0L + 1e-12L);
}

std::int64_t norm2(std::span<const long> v) {
  std::int64_t s = 0;
  for (long c : v) s += static_cast<std::int64_t>(c) * c;
  return s;
}

struct Bezout {
  long g;
  long u;
  long v;
};

Bezout ext_gcd(long a, long b) {
  if (b == 0) return {a, 1, 0};
  const auto inner = ext_gcd(b, a % b);
  return {inner.g, inner.v, inner.u - (a / b) * inner.v};
}

// Lenstra-Lenstra-Lovasz reduction (delta = 3/4) of small integer bases.
void lll_reduce(std::vector<IntVec>& basis) {
  const std::size_t m = basis.size();
  if (m < 2) return;
  const std::size_t d = basis[0].size();
  auto gram_schmidt = [&](std::vector<std::vector<long double>>& mu, std::vector<long double>& bn) {
    std::vector<std::vector<long double>> star(m, std::vector<long double>(d));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t c = 0; c < d; ++c) star[i][c] = basis[i][c];
      for (std::size_t j = 0; j < i; ++j) {
        long double dot = 0.0L;
        for (std::size_t c = 0; c < d; ++c) dot += basis[i][c] * star[j][c];
        mu[i][j] = dot / bn[j];
        for (std::size_t c = 0; c < d; ++c) star[i][c] -= mu[i][j] * star[j][c];
      }
      bn[i] = 0.0L;
      for (std::size_t c = 0; c < d; ++c) bn[i] += star[i][c] * star[i][c];
    }
  };
  std::vector<std::vector<long double>> mu(m, std::vector<long double>(m, 0.0L));
  std::vector<long double> bn(m, 0.0L);
  gram_schmidt(mu, bn);
  std::size_t k = 1;
  int guard = 0;
  while (k < m && guard++ < 100000) {
    for (std::size_t j = k; j-- > 0;) {
      const long q = std::lround(static_cast<double>(mu[k][j]));
      if (q != 0) {
        for (std::size_t c = 0; c < d; ++c) basis[k][c] -= q * basis[j][c];
        gram_schmidt(mu, bn);
      }
    }
    if (bn[k] >= (0.75L - mu[k][k - 1] * mu[k][k - 1]) * bn[k - 1]) {
      ++k;
    } else {
      std::swap(basis[k], basis[k - 1]);
      gram_schmidt(mu, bn);
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
}

// Fincke-Pohst enumeration of sum c_i b_i with norm at most radius.
std::int64_t enumerate_short(const std::vector<IntVec>& basis, double radius) {
  const std::size_t m = basis.size();
  const std::size_t d = basis[0].size();
  std::vector<std::vector<long double>> mu(m, std::vector<long double>(m, 0.0L));
  std::vector<long double> bn(m);
  std::vector<std::vector<long double>> star(m, std::vector<long double>(d));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t c = 0; c < d; ++c) star[i][c] = basis[i][c];
    for (std::size_t j = 0; j < i; ++j) {
      long double dot = 0.0L;
      for (std::size_t c = 0; c < d; ++c) dot += basis[i][c] * star[j][c];
      mu[i][j] = dot / bn[j];
      for (std::size_t c = 0; c < d; ++c) star[i][c] -= mu[i][j] * star[j][c];
    }
    bn[i] = 0.0L;
    for (std::size_t c = 0; c < d; ++c) bn[i] += star[i][c] * star[i][c];
  }
  const long double bound = static_cast<long double>(radius) * radius * (1.0L + 1e-9L) + 1e-9L;
  std::vector<long> coef(m, 0);
  std::int64_t count = 0;
  IntVec n(d);
  auto recurse = [&](auto&& self, std::size_t level, long double used) -> void {
    long double center = 0.0L;
    for (std::size_t j = level + 1; j < m; ++j) center -= mu[j][level] * coef[j];
    const long double room = bound - used;
    if (room < 0.0L) return;
    const long double half = std::sqrt(room / bn[level]);
    const long lo = static_cast<long>(std::ceil(center - half));
    const long hi = static_cast<long>(std::floor(center + half));
    for (long c = lo; c <= hi; ++c) {
      coef[level] = c;
      const long double step = (c - center) * (c - center) * bn[level];
      if (level == 0) {
        std::fill(n.begin(), n.end(), 0);
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t t = 0; t < d; ++t) n[t] += coef[i] * basis[i][t];
        if (within(norm2(n), radius)) ++count;
      } else {
        self(self, level - 1, used + step);
      }
    }
    coef[level] = 0;
  };
  recurse(recurse, m - 1, 0.0L);
  return count;
}

}  // namespace

std::vector<std::int64_t> r2_counts(std::int64_t n_max) {
  if (n_max < 0) throw Error(ErrorCode::invalid_argument, "n_max must be >= 0");
  std::vector<std::int64_t> r(static_cast<std::size_t>(n_max) + 1, 0);
  const auto h_max = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n_max))) + 1;
  for (std::int64_t h = -h_max; h <= h_max; ++h) {
    const std::int64_t rem = n_max - h * h;
    if (rem < 0) continue;
    auto k_max = static_cast<std::int64_t>(std::sqrt(static_cast<double>(rem)));
    while (k_max * k_max > rem) --k_max;
    while ((k_max + 1) * (k_max + 1) <= rem) ++k_max;
    for (std::int64_t k = -k_max; k <= k_max; ++k) ++r[static_cast<std::size_t>(h * h + k * k)];
  }
  return r;
}

CramerSeries cramer_constant(std::int64_t n_max) {
  if (n_max < 1) throw Error(ErrorCode::invalid_argument, "n_max must be >= 1");
  const auto r = r2_counts(n_max);
  std::vector<long double> terms;
  terms.reserve(static_cast<std::size_t>(n_max));
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const long double rn = static_cast<long double>(r[n]);
    terms.push_back(rn * rn / std::pow(static_cast<long double>(n), 1.5L));
  }
  const long double scale = 1.0L / (3.0L * pi * pi);
  CramerSeries out;
  out.partial = static_cast<double>(scale * pairwise_sum(std::span<const long double>(terms)));
  out.root = std::sqrt(out.partial);
  // Mean of r(n)^2 is 4 log n + b; b from the top half of the range.
  const std::int64_t lo = n_max / 2 + 1;
  long double mean_sq = 0.0L;
  long double mean_log = 0.0L;
  for (std::int64_t n = lo; n <= n_max; ++n) {
    mean_sq += static_cast<long double>(r[n]) * r[n];
    mean_log += std::log(static_cast<long double>(n));
  }
  const auto cnt = static_cast<long double>(n_max - lo + 1);
  const long double b = mean_sq / cnt - 4.0L * mean_log / cnt;
  const long double N = static_cast<long double>(n_max);
  // int_N^inf (4 log t + b) t^{-3/2} dt
  const long double tail = 2.0L / std::sqrt(N) * (4.0L * std::log(N) + 8.0L + b);
  out.tail_estimate = static_cast<double>(std::max(0.0L, scale * tail));
  return out;
}

long double cramer_integral_raw(double t0, double t1) {
  if (!(t0 >= 0.0) || !(t1 >= t0)) throw Error(ErrorCode::invalid_argument, "need 0 <= t0 <= t1");
  const auto top = static_cast<std::int64_t>(std::floor(t1));
  const auto r = r2_counts(top);
  const long double pil = pi;
  auto cube = [&](long double t, long double A) {
    const long double v = pil * t - A;
    return v * v * v / (3.0L * pil);
  };
  std::vector<long double> pieces;
  long double S = 0.0L;
  const auto first = static_cast<std::int64_t>(std::floor(t0));
  for (std::int64_t m = 0; m < first; ++m) S += r[m];
  for (std::int64_t m = first; m <= top; ++m) {
    S += r[m];
    const long double a = std::max<long double>(t0, static_cast<long double>(m));
    const long double b = std::min<long double>(t1, static_cast<long double>(m + 1));
    if (b > a) pieces.push_back(cube(b, S) - cube(a, S));
  }
  return pairwise_sum(std::span<const long double>(pieces));
}

double cramer_integral(double T) {
  if (!(T >= 1.0)) throw Error(ErrorCode::invalid_argument, "T must be >= 1");
  return static_cast<double>(cramer_integral_raw(0.0, T) / std::pow(static_cast<long double>(T), 1.5L));
}

double coprime_density(std::int64_t n_max) {
  if (n_max < 1) throw Error(ErrorCode::invalid_argument, "n_max must be >= 1");
  std::vector<std::int64_t> rows(static_cast<std::size_t>(n_max), 0);
  parallel_for(rows.size(), [&](std::size_t i) {
    const auto a = static_cast<std::int64_t>(i) + 1;
    std::int64_t c = 0;
    for (std::int64_t b = 1; b <= n_max; ++b) c += std::gcd(a, b) == 1;
    rows[i] = c;
  });
  const std::int64_t total = std::accumulate(rows.begin(), rows.end(), std::int64_t{0});
  return static_cast<double>(total) / (static_cast<double>(n_max) * static_cast<double>(n_max));
}

bool has_coprime_pair(std::span<const long> k) {
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = i + 1; j < k.size(); ++j)
      if (std::gcd(k[i], k[j]) == 1) return true;
  return false;
}

LatticeBasis orthogonal_lattice_basis(std::span<const long> k) {
  const std::size_t d = k.size();
  if (d < 2) throw Error(ErrorCode::invalid_argument, "k needs at least two entries");
  std::size_t ia = d, ib = d;
  for (std::size_t i = 0; i < d && ia == d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (std::gcd(k[i], k[j]) == 1) {
        ia = i;
        ib = j;
        break;
      }
  if (ia == d) throw Error(ErrorCode::no_coprime_pair, "no pair of entries of k is coprime");
  const long A = k[ia];
  const long B = k[ib];
  const auto bz = ext_gcd(std::labs(A), std::labs(B));
  const long u = A < 0 ? -bz.u : bz.u;
  const long v = B < 0 ? -bz.v : bz.v;
  LatticeBasis out;
  IntVec first(d, 0);
  first[ia] = B;
  first[ib] = -A;
  out.vectors.push_back(first);
  for (std::size_t c = 0; c < d; ++c) {
    if (c == ia || c == ib) continue;
    IntVec vec(d, 0);
    vec[ia] = u * k[c];
    vec[ib] = v * k[c];
    vec[c] = -1;
    out.vectors.push_back(vec);
  }
  Eigen::MatrixXd V(static_cast<Eigen::Index>(d - 1), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i + 1 < d; ++i)
    for (std::size_t c = 0; c < d; ++c) V(i, c) = static_cast<double>(out.vectors[i][c]);
  out.covolume = std::sqrt((V * V.transpose()).determinant());
  return out;
}

std::int64_t sublattice_count(std::span<const long> k, double radius) {
  if (norm2(k) == 0) throw Error(ErrorCode::invalid_argument, "k must be nonzero");
  if (!(radius >= 0.0)) throw Error(ErrorCode::invalid_argument, "radius must be >= 0");
  if (!has_coprime_pair(k)) return sublattice_count_scan(k, radius);
  auto basis = orthogonal_lattice_basis(k).vectors;
  lll_reduce(basis);
  return enumerate_short(basis, radius);
}

std::int64_t sublattice_count_scan(std::span<const long> k, double radius) {
  const int d = static_cast<int>(k.size());
  if (norm2(k) == 0) throw Error(ErrorCode::invalid_argument, "k must be nonzero");
  int pivot = 0;
  for (int i = 1; i < d; ++i)
    if (std::labs(k[i]) > std::labs(k[pivot])) pivot = i;
  const auto r2 = static_cast<long>(std::floor(static_cast<long double>(radius) * radius * (1.0L + 1e-12L)));
  std::int64_t count = 0;
  IntVec n(d);
  for_each_lattice_point(d - 1, r2, [&](std::span<const long> rest) {
    std::int64_t acc = 0;
    for (int i = 0, j = 0; i < d; ++i) {
      if (i == pivot) continue;
      n[i] = rest[j++];
      acc -= static_cast<std::int64_t>(k[i]) * n[i];
    }
    if (acc % k[pivot] != 0) return;
    n[pivot] = static_cast<long>(acc / k[pivot]);
    if (within(norm2(n), radius)) ++count;
  });
  return count;
}

std::vector<double> divergence_probe(int d, double alpha, std::span<const long> K_list) {
  if (d < 4) throw Error(ErrorCode::invalid_argument, "divergence probe needs d >= 4");
  if (!(alpha <= d - 3)) throw Error(ErrorCode::invalid_argument, "alpha must be <= d - 3");
  if (K_list.empty()) return {};
  const long K_max = *std::max_element(K_list.begin(), K_list.end());
  if (K_max < 0) throw Error(ErrorCode::invalid_argument, "K must be >= 0");
  const std::int64_t cap = static_cast<std::int64_t>(K_max) * K_max;
  // Sorted tuples 0 <= a_1 <= ... <= a_d stand for all sign/permutation images.
  std::vector<std::pair<std::int64_t, long double>> weighted;
  IntVec a(d, 0);
  std::vector<long double> factorial(d + 1, 1.0L);
  for (int i = 1; i <= d; ++i) factorial[i] = factorial[i - 1] * i;
  auto visit = [&](auto&& self, int pos, long start, std::int64_t used) -> void {
    if (pos == d) {
      if (used == 0 || !has_coprime_pair(a)) return;
      long double perms = factorial[d];
      int nonzero = 0;
      for (int i = 0; i < d;) {
        int j = i;
        while (j < d && a[j] == a[i]) ++j;
        perms /= factorial[j - i];
        i = j;
      }
      for (long v : a) nonzero += v != 0;
      const long double mult = perms * std::pow(2.0L, nonzero);
      weighted.emplace_back(used, mult * std::pow(static_cast<long double>(used), -0.5L * (alpha + 3.0)));
      return;
    }
    for (long v = start; used + static_cast<std::int64_t>(v) * v * (d - pos) <= cap; ++v) {
      a[pos] = v;
      self(self, pos + 1, v, used + static_cast<std::int64_t>(v) * v);
    }
  };
  visit(visit, 0, 0, 0);
  std::stable_sort(weighted.begin(), weighted.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<double> out;
  out.reserve(K_list.size());
  for (long K : K_list) {
    const std::int64_t k2 = static_cast<std::int64_t>(K) * K;
    std::vector<long double> terms;
    for (const auto& [n2, w] : weighted) {
      if (n2 > k2) break;
      terms.push_back(w);
    }
    out.push_back(static_cast<double>(pairwise_sum(std::span<const long double>(terms))));
  }
  return out;
}

}  // namespace latdisc
