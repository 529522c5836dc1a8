#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace latdisc {

/// Worker count used by every parallel loop in the library (default 1).
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs fn(i) for i in [0, n). Items are split into contiguous blocks, one per
/// worker; callers write results into per-item slots so the outcome never
/// depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Pairwise (cascade) summation in index order; bit-identical for a fixed input.
double pairwise_sum(std::span<const double> values);
long double pairwise_sum(std::span<const long double> values);

template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn) {
  std::vector<T> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace latdisc
