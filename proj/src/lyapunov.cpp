#include "jcir/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <variant>

#include "jcir/levy.hpp"
#include "jcir/quad.hpp"

namespace jcir::lyapunov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// e^w E1(w), stable for every w > 0.
double exp_e1(double w) {
  if (w < 35) return std::exp(w) * (-std::expint(-w));
  // Asymptotic series 1/w - 1/w^2 + 2/w^3 - ...; truncation error is below
  // the first omitted term, which at n ~ w is far under double precision.
  double term = 1 / w;
  double sum = term;
  for (int n = 1; n < 30; ++n) {
    term *= -static_cast<double>(n) / w;
    const double next = sum + term;
    if (next == sum) break;
    sum = next;
  }
  return sum;
}

}  // namespace

LyapunovFn LyapunovFn::log1p_fn() {
  LyapunovFn f;
  f.kind_ = FnKind::Log1p;
  return f;
}

LyapunovFn LyapunovFn::power(double exponent) {
  if (!(exponent > 0) || !(exponent <= 1))
    throw std::invalid_argument("power exponent must lie in (0, 1]");
  LyapunovFn f;
  f.kind_ = FnKind::PowerKappa;
  f.p_ = exponent;
  // Quintic x^3 (c3 + c4 x + c5 x^2) matching x^p at x = 1 up to the second
  // derivative; vanishes with two derivatives at 0, positive on (0, 1].
  f.c5_ = (exponent - 3) * (exponent - 4) / 2;
  f.c4_ = (exponent - 3) * (5 - exponent);
  f.c3_ = 1 - f.c4_ - f.c5_;
  return f;
}

LyapunovFn LyapunovFn::identity() {
  LyapunovFn f;
  f.kind_ = FnKind::Identity;
  return f;
}

double LyapunovFn::value(double x) const {
  switch (kind_) {
    case FnKind::Log1p:
      return std::log1p(x);
    case FnKind::Identity:
      return x;
    case FnKind::PowerKappa:
      if (x >= 1) return std::pow(x, p_);
      return x * x * x * (c3_ + c4_ * x + c5_ * x * x);
  }
  return 0;
}

double LyapunovFn::deriv(double x) const {
  switch (kind_) {
    case FnKind::Log1p:
      return 1 / (1 + x);
    case FnKind::Identity:
      return 1;
    case FnKind::PowerKappa:
      if (x >= 1) return p_ * std::pow(x, p_ - 1);
      return x * x * (3 * c3_ + 4 * c4_ * x + 5 * c5_ * x * x);
  }
  return 0;
}

double LyapunovFn::second(double x) const {
  switch (kind_) {
    case FnKind::Log1p:
      return -1 / ((1 + x) * (1 + x));
    case FnKind::Identity:
      return 0;
    case FnKind::PowerKappa:
      if (x >= 1) return p_ * (p_ - 1) * std::pow(x, p_ - 2);
      return x * (6 * c3_ + 12 * c4_ * x + 20 * c5_ * x * x);
  }
  return 0;
}

namespace {

void require_jump_integrable(const levy::LevyModel& jumps,
                             const LyapunovFn& fn) {
  bool ok = true;
  switch (fn.kind()) {
    case FnKind::Log1p:
      ok = std::isfinite(levy::log_tail(jumps));
      break;
    case FnKind::PowerKappa:
      ok = levy::tail_moment(jumps, fn.exponent()).finite;
      break;
    case FnKind::Identity:
      ok = levy::tail_moment(jumps, 1.0).finite;
      break;
  }
  if (!ok)
    throw std::domain_error(
        "generator is undefined: the jump integral of V diverges");
}

/// Mean of V(x+Z) - V(x) for Z with Pareto density a z_min^a z^(-a-1); the
/// substitution z = z_min u^(-1/a) makes u uniform on (0, 1).
double pareto_jump_mean(const LyapunovFn& fn, double x, double a,
                        double z_min) {
  const double base = fn.value(x);
  return quad::integrate(
             [&](double u) {
               double z = z_min * std::pow(u, -1 / a);
               if (!std::isfinite(z)) z = 1e300;
               return fn.value(x + z) - base;
             },
             0.0, 1.0)
      .value;
}

double jump_part(const levy::LevyModel& jumps, const LyapunovFn& fn,
                 double x) {
  const double base = fn.value(x);
  return std::visit(
      overloaded{
          [&](const levy::Zero&) { return 0.0; },
          [&](const levy::CompoundPoisson& cp) {
            const double mean_diff = std::visit(
                overloaded{
                    [&](const levy::PointMass& pm) {
                      return fn.value(x + pm.z0) - base;
                    },
                    [&](const levy::ExponentialLaw& e) {
                      if (fn.kind() == FnKind::Log1p)
                        return exp_e1((1 + x) / e.mean);
                      if (fn.kind() == FnKind::Identity) return e.mean;
                      return quad::integrate(
                                 [&](double z) {
                                   return (fn.value(x + z) - base) *
                                          std::exp(-z / e.mean) / e.mean;
                                 },
                                 0.0, quad::infinity())
                          .value;
                    },
                    [&](const levy::ParetoLaw& pl) {
                      return pareto_jump_mean(fn, x, pl.a, pl.z_min);
                    },
                },
                cp.law);
            return cp.rate * mean_diff;
          },
          [&](const levy::GammaDensity& g) {
            return g.c * quad::integrate(
                             [&](double z) {
                               return (fn.value(x + z) - base) *
                                      std::exp(-g.lambda * z) / z;
                             },
                             0.0, quad::infinity())
                       .value;
          },
          [&](const levy::ParetoTail& pt) {
            return pareto_jump_mean(fn, x, pt.a, 1.0);
          },
      },
      jumps);
}

}  // namespace

double apply_generator(const ModelParams& p, const LyapunovFn& fn, double x) {
  chf::validate(p);
  if (!(x >= 0)) throw std::invalid_argument("apply_generator: x must be >= 0");
  require_jump_integrable(p.jumps, fn);
  const double drift = (p.a - p.b * x) * fn.deriv(x) +
                       0.5 * p.sigma * p.sigma * x * fn.second(x);
  return drift + jump_part(p.jumps, fn, x);
}

namespace {

DriftReport scan(const ModelParams& p, const LyapunovFn& fn,
                 std::span<const double> xs) {
  DriftReport r;
  r.fn = fn.kind();
  r.exponent = fn.exponent();
  r.xs.assign(xs.begin(), xs.end());
  r.av.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    r.av[i] = apply_generator(p, fn, xs[i]);
  r.tail_value = r.av.back();
  return r;
}

void check_scan_grid(std::span<const double> xs) {
  if (xs.size() < 3)
    throw std::invalid_argument("drift scan needs at least three grid points");
  double prev = -1;
  for (double x : xs) {
    if (!(x > prev) || !(x >= 0))
      throw std::invalid_argument("drift grid must be increasing and >= 0");
    prev = x;
  }
}

}  // namespace

DriftReport check_log_drift(const ModelParams& p, std::span<const double> xs,
                            double c) {
  check_scan_grid(xs);
  if (c == 0) c = p.b / 2;
  if (!(c > 0) || !(c < p.b))
    throw std::invalid_argument("log drift rate c must lie in (0, b)");
  DriftReport r = scan(p, LyapunovFn::log1p_fn(), xs);
  r.exponent = 1.0;
  r.c = c;

  std::size_t split = r.av.size();
  for (std::size_t i = 0; i < r.av.size(); ++i) {
    if (r.av[i] < -c) {
      split = i;
      break;
    }
  }
  if (split == r.av.size()) {
    r.k_end = kInf;
    r.m = kInf;
    r.satisfied = false;
    r.worst_margin = -kInf;
    return r;
  }
  r.k_end = r.xs[split];
  double m = 0;
  for (std::size_t i = 0; i <= split; ++i) m = std::max(m, r.av[i] + c);
  r.m = m;
  double margin = kInf;
  bool ok = true;
  for (std::size_t i = split; i < r.av.size(); ++i) {
    margin = std::min(margin, -c - r.av[i]);
    ok = ok && r.av[i] <= -c;
  }
  r.satisfied = ok;
  r.worst_margin = margin;
  return r;
}

DriftReport check_power_drift(const ModelParams& p, double kappa,
                              std::span<const double> xs, double c) {
  check_scan_grid(xs);
  if (!(kappa > 0)) throw std::invalid_argument("kappa must be > 0");
  const double p1 = std::min(kappa, 1.0);
  if (c == 0) c = p.b * p1 / 2;
  if (!(c > 0) || !(c < p.b * p1))
    throw std::invalid_argument("power drift rate c must lie in (0, b*min(kappa,1))");
  const LyapunovFn fn =
      kappa < 1 ? LyapunovFn::power(kappa) : LyapunovFn::identity();
  DriftReport r = scan(p, fn, xs);
  r.c = c;
  r.k_end = kNaN;

  double m = 0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < r.av.size(); ++i) {
    const double excess = r.av[i] + c * fn.value(r.xs[i]);
    if (excess > m) {
      m = excess;
      arg = i;
    }
  }
  r.m = m;
  const double tail_excess = r.av.back() + c * fn.value(r.xs.back());
  r.worst_margin = m - tail_excess;
  r.satisfied = std::isfinite(m) && arg + 1 < r.av.size() &&
                tail_excess < 0.99 * m - 1e-12;
  return r;
}

std::vector<double> make_grid(double x_lo, double x_hi, std::size_t n_log) {
  if (!(x_lo > 0) || !(x_hi > x_lo) || n_log < 2)
    throw std::invalid_argument("make_grid: need 0 < x_lo < x_hi, n_log >= 2");
  std::vector<double> xs;
  xs.reserve(n_log + 1);
  xs.push_back(0.0);
  const double l0 = std::log(x_lo), l1 = std::log(x_hi);
  for (std::size_t i = 0; i < n_log; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(n_log - 1);
    xs.push_back(std::exp(l0 + f * (l1 - l0)));
  }
  return xs;
}

}  // namespace jcir::lyapunov
