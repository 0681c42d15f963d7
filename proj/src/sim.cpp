#include "jcir/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jcir/bessel.hpp"
#include "jcir/levy.hpp"
#include "jcir/mc.hpp"

namespace jcir::sim {

double cir_exact(double t, double x0, double a, double b, double sigma,
                 RandomStream& rs) {
  if (t < 0) throw std::invalid_argument("cir_exact: t must be >= 0");
  if (t == 0) return x0;
  const double decay = std::exp(-b * t);
  const double c = sigma * sigma * (-std::expm1(-b * t)) / (4 * b);
  const double shape0 = 2 * a / (sigma * sigma);
  const long n = rs.poisson(x0 * decay / (2 * c));
  return c * rs.gamma(shape0 + static_cast<double>(n), 2.0);
}

namespace {

double total_mass_checked(const levy::LevyModel& jumps) {
  const double mass = levy::mass_above(jumps, 0.0);
  if (!std::isfinite(mass))
    throw std::invalid_argument(
        "exact sampler requires a finite-activity jump measure");
  return mass;
}

void check_grid(std::span<const double> grid_times) {
  if (grid_times.empty())
    throw std::invalid_argument("grid_times must be non-empty");
  double prev = 0;
  for (double t : grid_times) {
    if (!(t > prev))
      throw std::invalid_argument(
          "grid_times must be strictly increasing and positive");
    prev = t;
  }
}

std::vector<double> draw_jump_times(double horizon, double mass,
                                    RandomStream& rs) {
  const long k = rs.poisson(horizon * mass);
  std::vector<double> times(static_cast<std::size_t>(k));
  for (auto& tau : times) tau = horizon * rs.uniform();
  std::sort(times.begin(), times.end());
  return times;
}

}  // namespace

double jcir_exact_oneshot(const ModelParams& p, double t, double x0,
                          RandomStream& rs) {
  chf::validate(p);
  if (t < 0) throw std::invalid_argument("jcir_exact_oneshot: t must be >= 0");
  const double mass = total_mass_checked(p.jumps);
  double x = cir_exact(t, x0, p.a, p.b, p.sigma, rs);
  if (t == 0 || mass == 0) return x;
  const long k = rs.poisson(t * mass);
  for (long j = 0; j < k; ++j) {
    const double s = t - t * rs.uniform();  // elapsed time since the jump
    const double z = levy::sample_above(p.jumps, 0.0, rs);
    x += bessel::bessel_sample(bessel::from_jump(z, s, p.b, p.sigma), rs);
  }
  return x;
}

Path jcir_exact_path(const ModelParams& p, std::span<const double> grid_times,
                     double x0, RandomStream& rs) {
  chf::validate(p);
  check_grid(grid_times);
  const double mass = total_mass_checked(p.jumps);
  const double horizon = grid_times.back();
  const std::vector<double> jump_times =
      mass > 0 ? draw_jump_times(horizon, mass, rs) : std::vector<double>{};

  Path out;
  out.t.assign(grid_times.begin(), grid_times.end());
  out.x.reserve(grid_times.size());

  double cur = 0;
  double x = x0;
  std::size_t ji = 0;
  for (double tg : grid_times) {
    // Apply every jump epoch at or before this grid time.
    while (ji < jump_times.size() && jump_times[ji] <= tg) {
      x = cir_exact(jump_times[ji] - cur, x, p.a, p.b, p.sigma, rs);
      x += levy::sample_above(p.jumps, 0.0, rs);
      cur = jump_times[ji];
      ++ji;
    }
    x = cir_exact(tg - cur, x, p.a, p.b, p.sigma, rs);
    cur = tg;
    out.x.push_back(x);
  }
  return out;
}

Path euler_path(const ModelParams& p, std::span<const double> grid_times,
                double x0, const EulerConfig& cfg, RandomStream& rs) {
  chf::validate(p);
  check_grid(grid_times);
  if (!(cfg.dt > 0)) throw std::invalid_argument("euler: dt must be > 0");
  const bool finite_activity = levy::is_finite_activity(p.jumps);
  if (!finite_activity && !(cfg.eps > 0))
    throw std::invalid_argument(
        "euler: infinite-activity jumps need a positive cutoff eps");
  const double eps_eff = finite_activity ? 0.0 : cfg.eps;
  const double rate = levy::mass_above(p.jumps, eps_eff);
  const double comp =
      cfg.compensate ? levy::small_mean(p.jumps, eps_eff) : 0.0;

  const double horizon = grid_times.back();
  std::vector<double> jump_times =
      rate > 0 ? draw_jump_times(horizon, rate, rs) : std::vector<double>{};
  std::vector<double> jump_sizes(jump_times.size());
  for (auto& z : jump_sizes) z = levy::sample_above(p.jumps, eps_eff, rs);

  Path out;
  out.t.assign(grid_times.begin(), grid_times.end());
  out.x.reserve(grid_times.size());

  double cur = 0;
  double x = x0;
  std::size_t ji = 0;
  for (double tg : grid_times) {
    const double seg = tg - cur;
    const auto nsub = static_cast<std::size_t>(std::ceil(seg / cfg.dt));
    const double h = seg / static_cast<double>(std::max<std::size_t>(nsub, 1));
    for (std::size_t k = 0; k < nsub; ++k) {
      const double target = (k + 1 == nsub) ? tg : cur + h;
      double dj = 0;
      while (ji < jump_times.size() && jump_times[ji] <= target) {
        dj += jump_sizes[ji];
        ++ji;
      }
      const double g = rs.normal();
      x = std::max(0.0, x + (p.a + comp - p.b * x) * h +
                            p.sigma * std::sqrt(x) * std::sqrt(h) * g + dj);
      cur = target;
    }
    out.x.push_back(x);
  }
  return out;
}

std::vector<double> sample_marginal_exact(const ModelParams& p, double t,
                                          double x0, std::size_t n,
                                          std::uint64_t seed,
                                          std::uint64_t stream_base,
                                          int threads) {
  return mc::fill_indexed(
      n, seed, stream_base,
      [&](std::size_t, RandomStream& rs) {
        return jcir_exact_oneshot(p, t, x0, rs);
      },
      threads);
}

std::vector<double> sample_marginal_exact_serial(const ModelParams& p,
                                                 double t, double x0,
                                                 std::size_t n,
                                                 std::uint64_t seed,
                                                 std::uint64_t stream_base) {
  return mc::fill_indexed_serial(n, seed, stream_base,
                                 [&](std::size_t, RandomStream& rs) {
                                   return jcir_exact_oneshot(p, t, x0, rs);
                                 });
}

std::vector<double> sample_marginal_euler(const ModelParams& p, double t,
                                          double x0, const EulerConfig& cfg,
                                          std::size_t n, std::uint64_t seed,
                                          std::uint64_t stream_base,
                                          int threads) {
  const double grid[1] = {t};
  return mc::fill_indexed(
      n, seed, stream_base,
      [&](std::size_t, RandomStream& rs) {
        return euler_path(p, grid, x0, cfg, rs).x[0];
      },
      threads);
}

}  // namespace jcir::sim
