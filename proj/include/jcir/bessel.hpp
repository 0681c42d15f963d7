#pragma once

#include <complex>
#include <span>
#include <vector>

#include "jcir/rng.hpp"

namespace jcir::bessel {

/// Parameters of the Bessel law e^(-alpha) delta_0(dx) + density on (0,inf).
/// Equivalently: Gamma(N, rate beta) with N ~ Poisson(alpha), where
/// Gamma(0, .) is the unit mass at 0.
struct BesselParams {
  double alpha;  // >= 0
  double beta;   // > 0
};

void validate(const BesselParams& p);

/// Weight of the atom at 0: e^(-alpha).
double bessel_atom(const BesselParams& p);

/// Density of the absolutely continuous part at x > 0:
///   alpha beta e^(-alpha - beta x) S(alpha beta x),
/// S(w) = sum_k w^k / (k! (k+1)!). Evaluated in log space, so it stays
/// finite for large alpha beta x. Limit at 0+ is alpha beta e^(-alpha).
double bessel_pdf(const BesselParams& p, double x);

/// log S(w) for w >= 0; S(w) = I_1(2 sqrt(w)) / sqrt(w).
double log_series_s(double w);

/// Characteristic/Laplace functional exp(alpha u / (beta - u)), Re u <= 0.
std::complex<double> bessel_chf(const BesselParams& p,
                                std::complex<double> u);

/// E[X^kappa], kappa >= 0. Integer kappa sums the series
///   e^(-alpha) beta^-n sum_k alpha^(k+1) (n+k)! / (k! (k+1)!),
/// fractional kappa integrates x^kappa against the density.
double bessel_moment(const BesselParams& p, double kappa);

/// One draw: Gamma(Poisson(alpha), rate beta).
double bessel_sample(const BesselParams& p, RandomStream& rs);

/// Bessel parameters of the time-s descendant of a jump of size z under
/// (b, sigma): alpha = 2 b z / (sigma^2 (e^(bs) - 1)),
/// beta = 2 b e^(bs) / (sigma^2 (e^(bs) - 1)). Pre: z > 0, s > 0.
BesselParams from_jump(double z, double s, double b, double sigma);

/// One grid point of the moment-bound scan.
struct ScanPoint {
  double alpha;
  double beta;
  double moment;       // E[X^kappa]
  double upper_ratio;  // moment * beta^kappa / (1 + alpha^kappa)
  double lower_ratio;  // moment * beta^kappa / alpha^kappa
};

/// Empirical check of the two-sided moment bound
///   C2 alpha^k / beta^k <= E[X^k] <= C1 (1 + alpha^k) / beta^k  (alpha>=delta
/// for the lower half): the upper ratio must be bounded over the whole grid
/// and the lower ratio bounded away from 0 on alpha >= delta.
struct ScanReport {
  double kappa;
  double delta;
  std::vector<ScanPoint> points;
  double sup_upper;  // over the whole grid
  double inf_lower;  // over alpha >= delta
  bool bounded;
};

ScanReport moment_bound_scan(double kappa, double delta,
                             std::span<const double> alphas,
                             std::span<const double> betas);

}  // namespace jcir::bessel
