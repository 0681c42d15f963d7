#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <omp.h>

#include "jcir/rng.hpp"

namespace jcir::mc {

/// Parallel Monte Carlo kernel. out[i] = draw(i, stream) where stream is
/// RandomStream(seed, stream_base + i). Each work item owns its stream, so
/// the result is a pure function of (seed, stream_base, n) and identical for
/// every thread count; merging is just reading the array in index order.
template <class Draw>
std::vector<double> fill_indexed(std::size_t n, std::uint64_t seed,
                                 std::uint64_t stream_base, Draw&& draw,
                                 int threads = 0) {
  std::vector<double> out(n);
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for num_threads(threads) schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    RandomStream rs(seed, stream_base + static_cast<std::uint64_t>(i));
    out[static_cast<std::size_t>(i)] = draw(static_cast<std::size_t>(i), rs);
  }
  return out;
}

/// Serial reference for fill_indexed; must produce a bit-identical vector.
template <class Draw>
std::vector<double> fill_indexed_serial(std::size_t n, std::uint64_t seed,
                                        std::uint64_t stream_base,
                                        Draw&& draw) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream rs(seed, stream_base + i);
    out[i] = draw(i, rs);
  }
  return out;
}

/// Parallel transform of an index range into a preallocated buffer; entry i
/// depends only on i. Used for deterministic grid evaluations (densities,
/// drift scans, chf coefficient tables).
template <class Fn>
void transform_indexed(std::size_t n, double* out, Fn&& fn, int threads = 0) {
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for num_threads(threads) schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
    out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
}

template <class Fn>
void transform_indexed_serial(std::size_t n, double* out, Fn&& fn) {
  for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
}

}  // namespace jcir::mc
