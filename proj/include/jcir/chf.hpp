#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "jcir/levy.hpp"

namespace jcir::chf {

/// Process parameters: dX = (a - b X) dt + sigma sqrt(X) dB + dJ, with J the
/// pure-jump subordinator whose measure is `jumps`.
struct ModelParams {
  double a;      // >= 0
  double b;      // > 0
  double sigma;  // > 0
  levy::LevyModel jumps;
};

void validate(const ModelParams& p);

/// psi(t, u) = u e^(-bt) / (1 - (sigma^2 u / 2b)(1 - e^(-bt))).
/// For Re u <= 0 the denominator has real part >= 1, so the principal
/// branch is safe wherever psi gets composed; psi(0,u) = u and Re psi <= 0.
std::complex<double> psi(double t, std::complex<double> u, double b,
                         double sigma);

/// E[e^(u Y_t) | Y_0 = x0] for the continuous part (no jumps):
/// D^(-2a/sigma^2) exp(x0 psi(t,u)) with D the psi denominator.
std::complex<double> cir_chf(double t, std::complex<double> u, double x0,
                             double a, double b, double sigma);

/// int_0^t int_0^inf (e^(z psi(s,u)) - 1) nu(dz) ds; Re(result) <= 0.
std::complex<double> z_exponent(double t, std::complex<double> u,
                                const ModelParams& p);

/// E[e^(u X_t) | X_0 = x0] = cir_chf * exp(z_exponent). |value| <= 1 on
/// Re u <= 0.
std::complex<double> jcir_chf(double t, std::complex<double> u, double x0,
                              const ModelParams& p);

struct InversionOptions {
  double chf_tail_tol = 1e-8;        // stop adding terms once |chf| < this
  std::size_t max_terms = 1u << 21;  // hard cap; falling short sets a flag
  double range = 0.0;                // expansion interval [0, range); 0 = auto
  int threads = 0;
};

struct DensityGrid {
  std::vector<double> y;
  std::vector<double> f;
  double err_estimate = 0.0;  // truncation + tail + refinement diff
  double range = 0.0;
  std::size_t n_terms = 0;
  bool tail_tol_met = true;
};

/// Cosine-expansion inversion of a chf omega -> E e^(i omega X) for a law
/// supported on [0, inf), truncated to [0, range). Coefficients are chf
/// samples at k pi / range; evaluation is parallel over the grid.
DensityGrid density_from_chf(
    const std::function<std::complex<double>(double)>& phi,
    std::span<const double> y_grid, double range,
    const InversionOptions& opts = {});

/// Marginal density of X_t on y_grid. Pre: a > 0 (bounded density).
DensityGrid invert_density(const ModelParams& p, double t, double x0,
                           std::span<const double> y_grid,
                           const InversionOptions& opts = {});

/// P(X <= y) for each y, from F(y) = 1/2 - (1/pi) int_0^inf
/// Im(phi(w) e^(-i w y)) / w dw. One shared set of phi evaluations serves
/// all query points; blocks are appended until their contribution falls
/// below abs_tol.
std::vector<double> cdf_from_chf(
    const std::function<std::complex<double>(double)>& phi,
    std::span<const double> ys, double abs_tol = 1e-6);

/// Auto expansion range: capped-mean bound plus diffusion spread padding.
double default_range(const ModelParams& p, double t, double x0, double y_max);

/// Tabulates a smooth complex-valued function of omega > 0 on an adaptive
/// log-spaced grid and answers point queries by local cubic interpolation.
/// Built for transform exponents, which vary on a log frequency scale and
/// flatten out at both ends, so a few hundred exact evaluations stand in
/// for the millions a series inversion would otherwise make. Queries
/// outside [w_lo, w_hi] fall through to the exact function. The grid is
/// refined until the interpolant predicts each tested midpoint to abs_tol
/// (every tested point is kept as a node, so the final table is strictly
/// tighter than the test); `worst_probe` re-checks off-node points after
/// the build and construction falls back to exact evaluation everywhere
/// if that check misses 10 * abs_tol.
class LogInterpTable {
 public:
  LogInterpTable(std::function<std::complex<double>(double)> f, double w_lo,
                 double w_hi, double abs_tol);

  std::complex<double> operator()(double w) const;

  std::size_t node_count() const { return x_.size(); }
  double worst_probe() const { return worst_probe_; }
  bool interpolating() const { return interpolating_; }

 private:
  std::complex<double> interp(double x) const;

  std::function<std::complex<double>(double)> f_;
  double w_lo_ = 0.0, w_hi_ = 0.0;
  std::vector<double> x_;                 // log omega, ascending
  std::vector<std::complex<double>> z_;   // f at exp(x_)
  double worst_probe_ = 0.0;
  bool interpolating_ = true;
};

}  // namespace jcir::chf
