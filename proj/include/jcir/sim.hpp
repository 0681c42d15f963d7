#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "jcir/chf.hpp"
#include "jcir/rng.hpp"

namespace jcir::sim {

using chf::ModelParams;

/// Exact transition of the continuous part over elapsed time t:
/// c * Gamma(2a/sigma^2 + N, scale 2) with N ~ Poisson(x0 e^(-bt) / (2c)),
/// c = sigma^2 (1 - e^(-bt)) / (4b). Handles a = 0 (atom at 0) and t = 0.
double cir_exact(double t, double x0, double a, double b, double sigma,
                 RandomStream& rs);

/// Exact draw of X_t given X_0 = x0 in one shot: continuous part plus one
/// Bessel-distributed descendant per jump of the (finite-activity)
/// subordinator. Pre: the jump measure has finite total mass.
double jcir_exact_oneshot(const ModelParams& p, double t, double x0,
                          RandomStream& rs);

struct Path {
  std::vector<double> t;
  std::vector<double> x;
};

/// Exact skeleton at the given sorted positive times: continuous-part
/// transitions between events, jump sizes added at exact Poisson epochs.
/// Pre: finite-activity jump measure.
Path jcir_exact_path(const ModelParams& p, std::span<const double> grid_times,
                     double x0, RandomStream& rs);

struct EulerConfig {
  double dt = 1e-3;
  /// Jumps below eps are dropped for infinite-activity measures (finite
  /// activity keeps every jump regardless).
  double eps = 1e-3;
  /// Add the mean of the dropped small jumps back into the drift.
  bool compensate = false;
};

/// Full-truncation scheme: X <- max(0, X + (a - bX) h + sigma sqrt(X)
/// sqrt(h) G + jump increment). Jump epochs above the cutoff are exact and
/// drawn before the diffusion noise, so refining dt keeps the jump stream.
Path euler_path(const ModelParams& p, std::span<const double> grid_times,
                double x0, const EulerConfig& cfg, RandomStream& rs);

/// n independent one-shot draws of X_t; sample i uses stream_base + i, so
/// the output is identical for every thread count.
std::vector<double> sample_marginal_exact(const ModelParams& p, double t,
                                          double x0, std::size_t n,
                                          std::uint64_t seed,
                                          std::uint64_t stream_base,
                                          int threads = 0);

/// Serial reference for sample_marginal_exact (must match bit for bit).
std::vector<double> sample_marginal_exact_serial(const ModelParams& p,
                                                 double t, double x0,
                                                 std::size_t n,
                                                 std::uint64_t seed,
                                                 std::uint64_t stream_base);

std::vector<double> sample_marginal_euler(const ModelParams& p, double t,
                                          double x0, const EulerConfig& cfg,
                                          std::size_t n, std::uint64_t seed,
                                          std::uint64_t stream_base,
                                          int threads = 0);

}  // namespace jcir::sim
