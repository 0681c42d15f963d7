#include "jcir/ergo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <variant>

#include "jcir/levy.hpp"
#include "jcir/sim.hpp"

namespace jcir::ergo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

sim::EulerConfig fine_euler() {
  sim::EulerConfig cfg;
  cfg.dt = 1e-3;
  cfg.eps = 1e-4;
  cfg.compensate = true;
  return cfg;
}

std::vector<double> draw_marginal(const ModelParams& p, double t, double x0,
                                  std::size_t n, std::uint64_t seed,
                                  std::uint64_t stream_base, int threads) {
  if (levy::is_finite_activity(p.jumps))
    return sim::sample_marginal_exact(p, t, x0, n, seed, stream_base, threads);
  return sim::sample_marginal_euler(p, t, x0, fine_euler(), n, seed,
                                    stream_base, threads);
}

/// e^(-bs) tail rate of the transform integrand is slowed to a*b for
/// Pareto-type tails with index a < 1 (the integrand is then ~ |w|^a).
double horizon_rate_factor(const levy::LevyModel& jumps) {
  struct Visitor {
    double operator()(const levy::Zero&) const { return 1; }
    double operator()(const levy::GammaDensity&) const { return 1; }
    double operator()(const levy::ParetoTail& pt) const {
      return std::min(1.0, pt.a);
    }
    double operator()(const levy::CompoundPoisson& cp) const {
      if (const auto* pl = std::get_if<levy::ParetoLaw>(&cp.law))
        return std::min(1.0, pl->a);
      return 1;
    }
  };
  return std::visit(Visitor{}, jumps);
}

}  // namespace

stats::MCEstimate moment_estimate(const ModelParams& p, double t, double x0,
                                  double kappa, std::size_t n,
                                  std::uint64_t seed, int threads) {
  if (!(kappa > 0)) throw std::invalid_argument("kappa must be > 0");
  if (!levy::tail_moment(p.jumps, kappa).finite)
    throw std::domain_error(
        "moment of order kappa is infinite: the jump measure's kappa-th tail "
        "moment diverges");
  std::vector<double> xs = draw_marginal(p, t, x0, n, seed, 0, threads);
  for (auto& x : xs) x = std::pow(x, kappa);
  return stats::estimate(xs);
}

SupMomentScan sup_moment_scan(const ModelParams& p, double x0, double kappa,
                              std::span<const double> t_grid, std::size_t n,
                              std::uint64_t seed, int threads) {
  SupMomentScan out;
  out.kappa = kappa;
  out.ts.assign(t_grid.begin(), t_grid.end());
  out.estimates.reserve(t_grid.size());
  std::uint64_t base = 0;
  for (double t : t_grid) {
    // Distinct stream blocks keep the per-time estimates independent.
    if (!levy::tail_moment(p.jumps, kappa).finite)
      throw std::domain_error("kappa-th moment diverges");
    std::vector<double> xs = draw_marginal(p, t, x0, n, seed, base, threads);
    for (auto& x : xs) x = std::pow(x, kappa);
    out.estimates.push_back(stats::estimate(xs));
    base += n;
  }
  const double m1 = levy::first_moment(p.jumps);
  if (kappa <= 1 && std::isfinite(m1))
    out.bound = std::pow(x0 + (p.a + m1) / p.b, kappa);
  else if (kappa <= 1)
    out.bound = kInf;  // first moment diverges; no closed linear bound
  else
    out.bound = kInf;
  out.within = true;
  for (const auto& e : out.estimates)
    out.within = out.within && e.mean <= out.bound + 3 * e.stderr_ + 1e-12;
  return out;
}

StationaryLaw::StationaryLaw(const ModelParams& p) : params_(p) {
  chf::validate(p);
  if (!std::isfinite(levy::log_tail(p.jumps)))
    throw std::domain_error(
        "no stationary law: the logarithmic tail of the jump measure "
        "diverges");
  const double rate = params_.b * horizon_rate_factor(params_.jumps);
  s_horizon_ = 30.0 / rate;
}

std::complex<double> StationaryLaw::chf(std::complex<double> u) const {
  if (u.real() > 1e-12)
    throw std::domain_error("transform argument must satisfy Re u <= 0");
  if (u == std::complex<double>(0, 0)) return {1, 0};
  const double sig2 = params_.sigma * params_.sigma;
  const std::complex<double> den = 1.0 - sig2 * u / (2 * params_.b);
  const std::complex<double> gamma_part =
      std::pow(den, -2 * params_.a / sig2);
  return gamma_part * std::exp(chf::z_exponent(s_horizon_, u, params_));
}

double StationaryLaw::laplace(double s) const {
  if (!(s >= 0)) throw std::invalid_argument("laplace: s must be >= 0");
  return chf({-s, 0}).real();
}

std::vector<double> StationaryLaw::cdf(std::span<const double> ys,
                                       double abs_tol) const {
  return chf::cdf_from_chf(
      [this](double w) {
        return chf(std::complex<double>(0, w));
      },
      ys, abs_tol);
}

chf::DensityGrid StationaryLaw::density(std::span<const double> y_grid,
                                        double range,
                                        const chf::InversionOptions& opts) const {
  if (!(range > 0.0))
    throw std::invalid_argument("density: range must be > 0");
  // The jump exponent costs a long quadrature per frequency here, so
  // tabulate it over everything the expansion can request; the gamma
  // factor, which carries all the tail decay, stays exact per term. The
  // inversion hands over real frequencies, lifted to the imaginary axis.
  const double dw = M_PI / range;
  const chf::LogInterpTable ztab(
      [this](double w) {
        return chf::z_exponent(s_horizon_, {0.0, w}, params_);
      },
      dw, dw * static_cast<double>(opts.max_terms), 1e-10);
  const double sig2 = params_.sigma * params_.sigma;
  auto phi = [&](double w) -> std::complex<double> {
    if (w == 0.0) return {1.0, 0.0};
    const std::complex<double> u{0.0, w};
    const std::complex<double> den = 1.0 - sig2 * u / (2 * params_.b);
    return std::pow(den, -2 * params_.a / sig2) * std::exp(ztab(w));
  };
  return chf::density_from_chf(phi, y_grid, range, opts);
}

double StationaryLaw::default_range(double y_max) const {
  const auto& p = params_;
  // Cap the jump mean as in the transient default so heavy tails still get
  // a finite window covering the bulk of the mass.
  const double zcap = 1e3;
  const double m1cap = levy::small_mean(p.jumps, zcap) +
                       zcap * levy::mass_above(p.jumps, zcap);
  const double mean_cap = (p.a + m1cap) / p.b;
  const double var_cir = p.a * p.sigma * p.sigma / (2 * p.b * p.b);
  return std::max(2 * y_max,
                  mean_cap + 25 * std::sqrt(var_cir + 1) + 10 * mean_cap + 10);
}

double StationaryLaw::mean() const {
  const double m1 = levy::first_moment(params_.jumps);
  if (!std::isfinite(m1)) return kInf;
  return (params_.a + m1) / params_.b;
}

TimeAverage time_average(const ModelParams& p, double x0,
                         const std::function<double(double)>& f,
                         double horizon, double dt_obs, std::uint64_t seed,
                         double burn_in, std::size_t n_batches) {
  if (!(horizon > 0) || !(dt_obs > 0) || dt_obs >= horizon)
    throw std::invalid_argument("time_average: need 0 < dt_obs < horizon");
  if (burn_in < 0) burn_in = 5 / p.b;
  if (burn_in >= horizon / 2)
    throw std::invalid_argument("time_average: burn_in too large");

  const auto n_obs = static_cast<std::size_t>(std::floor(horizon / dt_obs));
  std::vector<double> grid(n_obs);
  for (std::size_t i = 0; i < n_obs; ++i)
    grid[i] = dt_obs * static_cast<double>(i + 1);

  RandomStream rs(seed, 0);
  const sim::Path path =
      levy::is_finite_activity(p.jumps)
          ? sim::jcir_exact_path(p, grid, x0, rs)
          : sim::euler_path(p, grid, x0, fine_euler(), rs);

  std::vector<double> series(path.x.size());
  std::transform(path.x.begin(), path.x.end(), series.begin(), f);
  const auto burn = static_cast<std::size_t>(std::ceil(burn_in / dt_obs));

  TimeAverage out;
  out.est = stats::batch_means(series, burn, n_batches);
  out.horizon = horizon;
  out.burn_in = burn_in;
  out.batches = n_batches;
  out.n_obs = n_obs;
  return out;
}

DecayFit decay_fit(const ModelParams& p, double x0,
                   std::span<const double> t_grid, std::size_t n,
                   std::uint64_t seed, int threads) {
  const StationaryLaw law(p);
  const double s_vals[] = {0.25, 0.5, 1.0, 2.0};
  const double y_vals[] = {0.5, 1.0, 2.0, 4.0};

  DecayFit out;
  for (double s : s_vals) {
    out.names.push_back("exp(-" + std::to_string(s) + " x)");
    out.pi.push_back(law.laplace(s));
  }
  const std::vector<double> cdf_vals =
      law.cdf(std::span<const double>(y_vals, 4), 2e-4);
  for (std::size_t j = 0; j < 4; ++j) {
    out.names.push_back("1[x <= " + std::to_string(y_vals[j]) + "]");
    out.pi.push_back(cdf_vals[j]);
  }

  out.ts.assign(t_grid.begin(), t_grid.end());
  std::uint64_t base = 0;
  for (double t : t_grid) {
    const std::vector<double> xs =
        draw_marginal(p, t, x0, n, seed, base, threads);
    base += n;
    double worst = -1, worst_se = 0;
    for (std::size_t j = 0; j < 8; ++j) {
      std::vector<double> fx(xs.size());
      if (j < 4) {
        const double s = s_vals[j];
        std::transform(xs.begin(), xs.end(), fx.begin(),
                       [s](double x) { return std::exp(-s * x); });
      } else {
        const double y = y_vals[j - 4];
        std::transform(xs.begin(), xs.end(), fx.begin(),
                       [y](double x) { return x <= y ? 1.0 : 0.0; });
      }
      const stats::MCEstimate e = stats::estimate(fx);
      const double gap = std::abs(e.mean - out.pi[j]);
      if (gap > worst) {
        worst = gap;
        worst_se = e.stderr_;
      }
    }
    out.d.push_back(worst);
    out.se.push_back(worst_se);
  }

  std::vector<double> fit_t, fit_logd;
  for (std::size_t i = 0; i < out.d.size(); ++i) {
    const bool use = out.d[i] > 5 * out.se[i] && out.d[i] > 0;
    out.used.push_back(use);
    if (use) {
      fit_t.push_back(out.ts[i]);
      fit_logd.push_back(std::log(out.d[i]));
    }
  }
  out.fitted = fit_t.size() >= 3;
  if (out.fitted) {
    const stats::LineFit lf = stats::fit_line(fit_t, fit_logd);
    out.delta_hat = -lf.slope;
    out.delta_se = lf.slope_stderr;
    out.log_intercept = lf.intercept;
  }
  return out;
}

}  // namespace jcir::ergo
