#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <variant>

#include "jcir/rng.hpp"

namespace jcir::levy {

// Jump-size laws for the compound-Poisson variant.
struct PointMass {
  double z0;  // > 0
};
struct ExponentialLaw {
  double mean;  // > 0
};
struct ParetoLaw {
  double a;          // tail index, > 0
  double z_min = 1;  // >= 1
};
using JumpLaw = std::variant<PointMass, ExponentialLaw, ParetoLaw>;

/// nu(dz) = rate * law(dz), finite activity.
struct CompoundPoisson {
  double rate;  // > 0
  JumpLaw law;
};

/// nu(dz) = c z^-1 e^(-lambda z) dz on (0,inf); infinite activity, finite
/// first moment c / lambda.
struct GammaDensity {
  double c;       // > 0
  double lambda;  // > 0
};

/// nu(dz) = a z^(-a-1) dz on (1,inf); total mass 1, moment of order kappa
/// finite iff kappa < a.
struct ParetoTail {
  double a;  // > 0
};

struct Zero {};

/// Jump measure of the process: a nonnegative measure nu on (0,inf) with
/// int (z & 1) nu(dz) < inf. Every variant here satisfies that by
/// construction once validate() passes.
using LevyModel = std::variant<Zero, CompoundPoisson, GammaDensity, ParetoTail>;

/// Throws std::invalid_argument when parameters are out of range.
void validate(const LevyModel& m);

bool is_finite_activity(const LevyModel& m);

/// Outcome of a tail functional; value is +inf when the integral diverges
/// (detected analytically, never by numerical blow-up).
struct TailReport {
  double kappa = 0.0;
  double value = 0.0;
  bool finite = true;
};

/// int_{z>1} z^kappa nu(dz). kappa >= 0.
TailReport tail_moment(const LevyModel& m, double kappa);

/// int_{z>1} log(z) nu(dz). Finite for every supported variant.
double log_tail(const LevyModel& m);

/// int_0^inf z nu(dz); +inf when divergent.
double first_moment(const LevyModel& m);

/// nu((eps, inf)). Finite for eps > 0; for eps == 0 equals the total mass
/// (+inf for GammaDensity).
double mass_above(const LevyModel& m, double eps);

/// int_{0 < z <= eps} z nu(dz); finite for all variants.
double small_mean(const LevyModel& m, double eps);

/// Density of nu at z for the absolutely continuous variants; 0 for Zero,
/// error for PointMass jumps (use atom()).
double density_at(const LevyModel& m, double z);

/// The single atom (z0, weight) when nu has one, otherwise nullopt.
std::optional<std::pair<double, double>> atom(const LevyModel& m);

/// Restriction of nu to (0,1] (small) or (1,inf) (big).
struct RestrictedMeasure {
  LevyModel base;
  bool above_one;
};

/// (small part, big part). The big part always has finite mass.
std::pair<RestrictedMeasure, RestrictedMeasure> split(const LevyModel& m);

double mass(const RestrictedMeasure& r);

/// One draw from the normalized big part nu|_(1,inf) / nu((1,inf)).
/// Pre: mass > 0.
double sample_jump(const RestrictedMeasure& big, RandomStream& rs);

/// One draw from nu restricted to (eps, inf), normalized. Exact per variant
/// (inverse cdf, or two-piece rejection for GammaDensity). Pre:
/// mass_above(m, eps) finite and > 0.
double sample_above(const LevyModel& m, double eps, RandomStream& rs);

/// int_0^inf (e^(z w) - 1) nu(dz) for Re w <= 0. Closed form except for the
/// Pareto variants, which integrate along the ray z = z_min - r conj(w)/|w|
/// where the exponential decays without oscillation.
std::complex<double> exp_integral(const LevyModel& m, std::complex<double> w);

}  // namespace jcir::levy
