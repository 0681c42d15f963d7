#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "jcir/chf.hpp"
#include "jcir/stats.hpp"

namespace jcir::ergo {

using chf::ModelParams;

/// Monte Carlo estimate of E[X_t^kappa] from n independent draws (exact
/// sampler for finite-activity jumps, fine-step compensated Euler
/// otherwise). Throws domain_error when the kappa-th tail moment of the
/// jump measure diverges: the moment is provably infinite for t > 0, so no
/// estimate is produced.
stats::MCEstimate moment_estimate(const ModelParams& p, double t, double x0,
                                  double kappa, std::size_t n,
                                  std::uint64_t seed, int threads = 0);

struct SupMomentScan {
  std::vector<double> ts;
  std::vector<stats::MCEstimate> estimates;
  double kappa = 1;
  /// Analytic uniform-in-time bound (kappa <= 1); +inf when kappa > 1.
  double bound = 0;
  bool within = false;  // every estimate <= bound + 3 standard errors
};

SupMomentScan sup_moment_scan(const ModelParams& p, double x0, double kappa,
                              std::span<const double> t_grid, std::size_t n,
                              std::uint64_t seed, int threads = 0);

/// Limit law of X_t as t -> infinity. Pre: finite log tail of the jump
/// measure (otherwise no stationary distribution exists and construction
/// throws). The transform is the Gamma factor of the continuous part times
/// the exponential of a time integral truncated at s_horizon, chosen so the
/// discarded tail is below 1e-12.
class StationaryLaw {
 public:
  explicit StationaryLaw(const ModelParams& p);

  std::complex<double> chf(std::complex<double> u) const;
  double laplace(double s) const;  // E[e^(-s X)], s >= 0

  std::vector<double> cdf(std::span<const double> ys,
                          double abs_tol = 1e-6) const;
  chf::DensityGrid density(std::span<const double> y_grid, double range,
                           const chf::InversionOptions& opts = {}) const;
  double default_range(double y_max) const;

  /// Mean (a + m1)/b when the first jump moment m1 is finite, else +inf.
  double mean() const;

  const ModelParams& params() const { return params_; }
  double s_horizon() const { return s_horizon_; }

 private:
  ModelParams params_;
  double s_horizon_;
};

struct TimeAverage {
  stats::MCEstimate est;  // batch-mean estimate with batch standard error
  double horizon = 0;
  double burn_in = 0;
  std::size_t batches = 0;
  std::size_t n_obs = 0;
};

/// Time average of f along one trajectory observed every dt_obs, after
/// discarding burn_in (default 5/b); uncertainty from batch means.
TimeAverage time_average(const ModelParams& p, double x0,
                         const std::function<double(double)>& f, double horizon,
                         double dt_obs, std::uint64_t seed, double burn_in = -1,
                         std::size_t n_batches = 20);

struct DecayFit {
  std::vector<std::string> names;  // dictionary labels
  std::vector<double> pi;         // stationary value per dictionary entry
  std::vector<double> ts;
  std::vector<double> d;        // max |E f(X_t) - pi(f)| over the dictionary
  std::vector<double> se;       // standard error of the entry attaining d
  std::vector<bool> used;       // point entered the regression (d > 5 se)
  double delta_hat = 0;         // fitted exponential rate
  double delta_se = 0;
  double log_intercept = 0;
  bool fitted = false;  // at least three usable points
};

/// Distance-to-stationarity proxy over a fixed dictionary (four Laplace
/// kernels e^(-s x), four indicators [0, y]) with a log-linear rate fit.
DecayFit decay_fit(const ModelParams& p, double x0,
                   std::span<const double> t_grid, std::size_t n,
                   std::uint64_t seed, int threads = 0);

}  // namespace jcir::ergo
