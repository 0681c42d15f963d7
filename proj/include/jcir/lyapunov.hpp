#pragma once

#include <span>
#include <vector>

#include "jcir/chf.hpp"

namespace jcir::lyapunov {

using chf::ModelParams;

enum class FnKind { Log1p, PowerKappa, Identity };

/// Twice continuously differentiable nonnegative test functions:
///  - Log1p: V(x) = log(1 + x)
///  - PowerKappa: V(x) = x^p for x >= 1 (p = exponent in (0,1]), joined to 0
///    by a quintic on [0,1] matching value and two derivatives at x = 1
///  - Identity: V(x) = x
class LyapunovFn {
 public:
  static LyapunovFn log1p_fn();
  static LyapunovFn power(double exponent);
  static LyapunovFn identity();

  double value(double x) const;
  double deriv(double x) const;
  double second(double x) const;

  FnKind kind() const { return kind_; }
  double exponent() const { return p_; }

 private:
  FnKind kind_ = FnKind::Log1p;
  double p_ = 1.0;
  double c3_ = 0, c4_ = 0, c5_ = 0;  // bridge coefficients (PowerKappa)
};

/// (AV)(x) = (a - b x) V'(x) + sigma^2 x V''(x) / 2
///         + integral of (V(x+z) - V(x)) against the jump measure.
/// Pre: the jump integral converges (finite log tail for Log1p, finite
/// kappa-th tail moment for PowerKappa, finite first tail moment for
/// Identity). Deterministic: quadrature only, closed forms where available.
double apply_generator(const ModelParams& p, const LyapunovFn& fn, double x);

struct DriftReport {
  FnKind fn;
  double exponent;       // V exponent (1 for Log1p / Identity)
  double c;              // drift rate used
  double m;              // constant so that AV <= -c V + m on the grid
  double k_end;          // compact set is [0, k_end] (log form only)
  bool satisfied;
  double tail_value;     // AV at the largest grid point (log form: -> -b)
  double worst_margin;   // smallest slack of the claimed inequality
  std::vector<double> xs;
  std::vector<double> av;
};

/// Scans AV for V = log(1+x) over the grid and locates the smallest compact
/// set [0, k_end] outside of which AV <= -c holds; m bounds AV + c inside.
/// Default c = b/2.
DriftReport check_log_drift(const ModelParams& p, std::span<const double> xs,
                            double c = 0);

/// Scans AV for V = x^(kappa) (kappa < 1, bridged) or V = x (kappa >= 1)
/// and fits the smallest m with AV <= -c V + m on the grid; requires the
/// excess AV + c V to peak strictly inside the grid. Default c = b min(kappa,1)/2.
DriftReport check_power_drift(const ModelParams& p, double kappa,
                              std::span<const double> xs, double c = 0);

/// {0} followed by n_log log-spaced points from x_lo to x_hi.
std::vector<double> make_grid(double x_lo, double x_hi, std::size_t n_log);

}  // namespace jcir::lyapunov
