#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstring>
#include <vector>

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "jcir/chf.hpp"
#include "jcir/levy.hpp"
#include "jcir/sim.hpp"
#include "jcir/stats.hpp"

using namespace jcir;
using cplx = std::complex<double>;

namespace {

const chf::ModelParams kExpJump{
    1.0, 1.0, 1.0, levy::CompoundPoisson{0.5, levy::ExponentialLaw{2.0}}};

/// Mean of X_t solves m' = a + m1 - b m: exponential relaxation to
/// (a + m1)/b, with m1 the first moment of the jump measure.
double mean_ode(const chf::ModelParams& p, double t, double x0) {
  const double m1 = levy::first_moment(p.jumps);
  const double target = (p.a + m1) / p.b;
  return target + (x0 - target) * std::exp(-p.b * t);
}

struct ComplexMean {
  cplx mean;
  double se;  // sqrt(se_re^2 + se_im^2)
};

ComplexMean transform_mean(const std::vector<double>& xs, cplx u) {
  std::vector<double> re(xs.size()), im(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const cplx v = std::exp(u * xs[i]);
    re[i] = v.real();
    im[i] = v.imag();
  }
  const auto er = stats::estimate(re);
  const auto ei = stats::estimate(im);
  return {{er.mean, ei.mean},
          std::sqrt(er.stderr_ * er.stderr_ + ei.stderr_ * ei.stderr_)};
}

}  // namespace

TEST_CASE("cir_exact transition matches the noncentral chi-square law") {
  struct Case {
    double a, b, sigma, x0, t;
  };
  for (const Case& c : {Case{1.0, 1.0, 1.0, 1.0, 1.0},
                        Case{0.5, 2.0, 0.8, 0.0, 0.7}}) {
    const double scale = c.sigma * c.sigma * (-std::expm1(-c.b * c.t)) /
                         (4 * c.b);
    const double d = 4 * c.a / (c.sigma * c.sigma);
    const double lam = c.x0 * std::exp(-c.b * c.t) / scale;
    const std::size_t n = 100000;
    RandomStream rs(20240817, 1);
    std::vector<double> xs(n);
    for (auto& x : xs) x = sim::cir_exact(c.t, c.x0, c.a, c.b, c.sigma, rs);
    double ks;
    if (lam > 0) {
      boost::math::non_central_chi_squared_distribution<double> law(d, lam);
      ks = stats::ks_statistic(
          xs, [&](double x) { return boost::math::cdf(law, x / scale); });
    } else {
      ks = stats::ks_statistic(xs, [&](double x) {
        return boost::math::gamma_p(d / 2, x / (2 * scale));
      });
    }
    CHECK(ks < stats::ks_critical(1e-3, n));
  }
}

TEST_CASE("cir_exact edge cases") {
  RandomStream rs(7, 0);
  CHECK(sim::cir_exact(0.0, 3.2, 1, 1, 1, rs) == 3.2);
  // a = 0, x0 = 0: absorbed at zero.
  for (int i = 0; i < 50; ++i)
    CHECK(sim::cir_exact(0.5, 0.0, 0.0, 1.0, 1.0, rs) == 0.0);
}

TEST_CASE("one-shot exact sampler reproduces the transform") {
  const double x0 = 1.0;
  const std::vector<cplx> us = {{-1.0, 0.0}, {-0.25, 0.0}, {0.0, 1.0},
                                {0.0, 2.0},  {-0.5, 1.5}};
  for (double t : {0.5, 2.0}) {
    const std::vector<double> xs =
        sim::sample_marginal_exact(kExpJump, t, x0, 200000, 99101, 0);
    for (cplx u : us) {
      const ComplexMean emp = transform_mean(xs, u);
      const cplx want = chf::jcir_chf(t, u, x0, kExpJump);
      CHECK(std::abs(emp.mean - want) < 3.5 * emp.se + 1e-12);
    }
  }
}

TEST_CASE("one-shot sampler with a = 0 and point-mass jumps") {
  const chf::ModelParams p{0.0, 1.0, 1.0,
                           levy::CompoundPoisson{2.0, levy::PointMass{3.0}}};
  const double t = 1.0, x0 = 0.5;
  const std::vector<double> xs =
      sim::sample_marginal_exact(p, t, x0, 100000, 5511, 0);
  for (cplx u : {cplx{0.0, 1.0}, cplx{-0.5, 0.0}}) {
    const ComplexMean emp = transform_mean(xs, u);
    const cplx want = chf::jcir_chf(t, u, x0, p);
    CHECK(std::abs(emp.mean - want) < 3.5 * emp.se + 1e-12);
  }
}

TEST_CASE("path sampler and one-shot sampler agree in law") {
  const double t = 1.2, x0 = 0.7;
  const std::size_t n = 50000;
  const std::vector<double> a =
      sim::sample_marginal_exact(kExpJump, t, x0, n, 31415, 0);
  const double grid[1] = {t};
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream rs(8271003, i);
    b[i] = sim::jcir_exact_path(kExpJump, grid, x0, rs).x[0];
  }
  const double ks = stats::ks_two_sample(a, b);
  CHECK(ks < stats::ks_two_sample_critical(1e-3, n, n));
}

TEST_CASE("path sampler mean curve follows the moment ODE") {
  const std::vector<double> grid = {0.5, 1.0, 2.0, 4.0};
  const double x0 = 3.0;
  const std::size_t n = 30000;
  std::vector<std::vector<double>> per_time(grid.size(),
                                            std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream rs(62, i);
    const sim::Path path = sim::jcir_exact_path(kExpJump, grid, x0, rs);
    for (std::size_t j = 0; j < grid.size(); ++j) per_time[j][i] = path.x[j];
  }
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto e = stats::estimate(per_time[j]);
    CHECK(std::abs(e.mean - mean_ode(kExpJump, grid[j], x0)) <
          3.5 * e.stderr_ + 1e-12);
  }
}

TEST_CASE("euler marginal approaches the exact law") {
  const double t = 1.0, x0 = 1.0;
  const std::size_t n = 20000;
  sim::EulerConfig cfg;
  cfg.dt = 0.01;
  const std::vector<double> approx =
      sim::sample_marginal_euler(kExpJump, t, x0, cfg, n, 777, 0);
  const std::vector<double> exact =
      sim::sample_marginal_exact(kExpJump, t, x0, n, 778, 0);
  // Allows the O(dt) weak bias on top of two-sample noise.
  CHECK(stats::ks_two_sample(approx, exact) < 0.04);
}

TEST_CASE("euler small-jump compensation restores the mean") {
  const chf::ModelParams p{0.5, 1.0, 0.6, levy::GammaDensity{1.0, 1.0}};
  const double t = 1.0, x0 = 1.0;
  const std::size_t n = 40000;
  sim::EulerConfig drop;
  drop.dt = 0.005;
  drop.eps = 0.05;
  drop.compensate = false;
  sim::EulerConfig comp = drop;
  comp.compensate = true;

  const auto xs_drop = sim::sample_marginal_euler(p, t, x0, drop, n, 901, 0);
  const auto xs_comp = sim::sample_marginal_euler(p, t, x0, comp, n, 901, 0);
  const auto e_drop = stats::estimate(xs_drop);
  const auto e_comp = stats::estimate(xs_comp);
  const double want = mean_ode(p, t, x0);

  CHECK(e_comp.mean > e_drop.mean + 0.005);
  CHECK(std::abs(e_comp.mean - want) < 4 * e_comp.stderr_ + 0.02);
  // Dropping without compensating loses roughly the small-jump mean mass.
  const double lost =
      levy::small_mean(p.jumps, drop.eps) * (-std::expm1(-p.b * t)) / p.b;
  CHECK(std::abs((e_comp.mean - e_drop.mean) - lost) <
        4 * (e_comp.stderr_ + e_drop.stderr_));
}

TEST_CASE("euler refuses an infinite-activity measure without a cutoff") {
  const chf::ModelParams p{0.5, 1.0, 0.6, levy::GammaDensity{1.0, 1.0}};
  sim::EulerConfig cfg;
  cfg.eps = 0.0;
  RandomStream rs(1, 0);
  const double grid[1] = {1.0};
  CHECK_THROWS_AS((void)sim::euler_path(p, grid, 1.0, cfg, rs),
                  std::invalid_argument);
}

TEST_CASE("exact sampler refuses infinite-activity measures") {
  const chf::ModelParams p{0.5, 1.0, 0.6, levy::GammaDensity{1.0, 1.0}};
  RandomStream rs(1, 0);
  CHECK_THROWS_AS((void)sim::jcir_exact_oneshot(p, 1.0, 1.0, rs),
                  std::invalid_argument);
}

TEST_CASE("samplers are deterministic in (seed, stream)") {
  const auto a = sim::sample_marginal_exact(kExpJump, 1.0, 1.0, 512, 42, 7);
  const auto b = sim::sample_marginal_exact(kExpJump, 1.0, 1.0, 512, 42, 7);
  REQUIRE(a.size() == b.size());
  CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
  const auto c = sim::sample_marginal_exact(kExpJump, 1.0, 1.0, 512, 42, 8);
  CHECK(std::memcmp(a.data(), c.data(), a.size() * sizeof(double)) != 0);
}

TEST_CASE("one-shot at t = 0 returns the start point") {
  RandomStream rs(3, 3);
  CHECK(sim::jcir_exact_oneshot(kExpJump, 0.0, 2.5, rs) == 2.5);
}
