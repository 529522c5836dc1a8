#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "latdisc/bodies.hpp"

namespace latdisc {

/// r(n) = #{(h, k) in Z^2 : h^2 + k^2 = n} for n = 0..n_max.
std::vector<std::int64_t> r2_counts(std::int64_t n_max);

struct CramerSeries {
  double partial = 0.0;        // (1/(3 pi^2)) sum_{1 <= n <= n_max} r(n)^2 / n^{3/2}
  double root = 0.0;           // sqrt(partial)
  double tail_estimate = 0.0;  // advisory: mean r(n)^2 ~ 4 log n + b fitted on (n_max/2, n_max]
};

CramerSeries cramer_constant(std::int64_t n_max);

/// int_{t0}^{t1} P(t)^2 dt with P(t) = sum_{0 <= n <= t} r(n) - pi t, summed
/// piece by piece in closed form (P is affine between integers).
long double cramer_integral_raw(double t0, double t1);

/// T^{-3/2} int_0^T P(t)^2 dt, T >= 1.
double cramer_integral(double T);

/// Fraction of pairs 1 <= a, b <= n_max with gcd(a, b) = 1.
double coprime_density(std::int64_t n_max);

/// Some pair of entries has gcd 1 (gcd(1, 0) = 1 counts).
bool has_coprime_pair(std::span<const long> k);

struct LatticeBasis {
  std::vector<IntVec> vectors;
  double covolume = 0.0;  // sqrt(det(V V^t))
};

/// Basis of {n in Z^d : k.n = 0}: with A, B a coprime pair of entries and
/// A u + B v = 1, the vectors (B, -A, 0, ...), (uC, vC, -1, 0, ...), ...
/// Throws NoCoprimePair when no pair of entries is coprime.
LatticeBasis orthogonal_lattice_basis(std::span<const long> k);

/// #{n in Z^d : k.n = 0, |n| <= radius}, by enumerating a reduced basis of
/// the orthogonal lattice. Falls back to the scan when k has no coprime pair.
std::int64_t sublattice_count(std::span<const long> k, double radius);

/// Same count by scanning n_1..n_{d-1} and solving for one coordinate.
std::int64_t sublattice_count_scan(std::span<const long> k, double radius);

/// S(K) = sum over k in Z^d with a coprime pair and 0 < |k| <= K of |k|^{-alpha-3},
/// for each K in the list.
std::vector<double> divergence_probe(int d, double alpha, std::span<const long> K_list);

}  // namespace latdisc
