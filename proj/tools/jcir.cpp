// Command-line front end: simulation, transforms, density/cdf inversion,
// moment experiments, generator drift scans, long-run averages, and
// distance-to-stationarity fits for the jump-extended square-root process.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "jcir/bessel.hpp"
#include "jcir/chf.hpp"
#include "jcir/ergo.hpp"
#include "jcir/levy.hpp"
#include "jcir/lyapunov.hpp"
#include "jcir/scenario.hpp"
#include "jcir/sim.hpp"
#include "jcir/stats.hpp"

namespace {

using jcir::chf::ModelParams;
using ojson = nlohmann::ordered_json;

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << header << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << fmt_g(row[i]);
    }
    out << '\n';
  }
}

struct Common {
  std::string config;
  std::string out;
  std::uint64_t seed = 12345;
  int threads = 0;
};

void add_common(CLI::App* cmd, Common& c, bool needs_config = true) {
  auto* opt = cmd->add_option("--config", c.config,
                              "model file (JSON: a, b, sigma, jumps)");
  if (needs_config) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "write the detailed table as CSV here");
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--threads", c.threads,
                  "worker threads (0 = all; results do not depend on this)");
}

ojson base_summary(const std::string& command, const ModelParams& p,
                   const Common& c) {
  const nlohmann::json cfg = jcir::scenario::params_to_json(p);
  ojson out;
  out["command"] = command;
  out["config"] = ojson::parse(cfg.dump());
  out["config_hash"] = jcir::scenario::config_hash(cfg);
  out["seed"] = c.seed;
  return out;
}

std::function<double(double)> parse_observable(const std::string& expr,
                                               std::string& label) {
  if (expr == "identity") {
    label = "x";
    return [](double x) { return x; };
  }
  if (expr.rfind("exp:", 0) == 0) {
    const double s = std::stod(expr.substr(4));
    label = "exp(-" + fmt_g(s) + " x)";
    return [s](double x) { return std::exp(-s * x); };
  }
  if (expr.rfind("ind:", 0) == 0) {
    const double y = std::stod(expr.substr(4));
    label = "1[x <= " + fmt_g(y) + "]";
    return [y](double x) { return x <= y ? 1.0 : 0.0; };
  }
  throw std::invalid_argument(
      "observable must be identity, exp:<s>, or ind:<y>");
}

int run(int argc, char** argv) {
  CLI::App app{
      "jcir: exact and approximate sampling, transforms, and long-run "
      "diagnostics for a square-root diffusion with positive jumps"};
  app.require_subcommand(1);
  ojson summary;

  // ---- simulate ----
  auto* c_sim = app.add_subcommand(
      "simulate", "draw independent copies of X_t (CSV: index,x)");
  Common sim_c;
  add_common(c_sim, sim_c);
  double sim_t = 1.0, sim_x0 = 1.0, sim_dt = 1e-3, sim_eps = 1e-3;
  std::size_t sim_n = 10000;
  std::string sim_scheme = "exact";
  bool sim_comp = false;
  c_sim->add_option("--t", sim_t)->required();
  c_sim->add_option("--x0", sim_x0)->required();
  c_sim->add_option("--n", sim_n);
  c_sim->add_option("--scheme", sim_scheme)
      ->check(CLI::IsMember({"exact", "euler"}));
  c_sim->add_option("--dt", sim_dt, "euler step");
  c_sim->add_option("--eps", sim_eps, "euler small-jump cutoff");
  c_sim->add_flag("--compensate", sim_comp,
                  "euler: re-add the mean of dropped small jumps as drift");
  c_sim->callback([&] {
    const ModelParams p = jcir::scenario::load_params(sim_c.config);
    std::vector<double> xs;
    if (sim_scheme == "exact") {
      xs = jcir::sim::sample_marginal_exact(p, sim_t, sim_x0, sim_n,
                                            sim_c.seed, 0, sim_c.threads);
    } else {
      jcir::sim::EulerConfig cfg;
      cfg.dt = sim_dt;
      cfg.eps = sim_eps;
      cfg.compensate = sim_comp;
      xs = jcir::sim::sample_marginal_euler(p, sim_t, sim_x0, cfg, sim_n,
                                            sim_c.seed, 0, sim_c.threads);
    }
    if (!sim_c.out.empty()) {
      std::vector<std::vector<double>> rows(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i)
        rows[i] = {static_cast<double>(i), xs[i]};
      write_csv(sim_c.out, "index,x", rows);
    }
    const auto e = jcir::stats::estimate(xs);
    summary = base_summary("simulate", p, sim_c);
    summary["t"] = sim_t;
    summary["x0"] = sim_x0;
    summary["n"] = sim_n;
    summary["scheme"] = sim_scheme;
    summary["mean"] = e.mean;
    summary["stderr"] = e.stderr_;
  });

  // ---- chf ----
  auto* c_chf = app.add_subcommand(
      "chf", "transform E e^(u X_t) on the imaginary axis or at one point");
  Common chf_c;
  add_common(c_chf, chf_c);
  double chf_t = 1.0, chf_x0 = 1.0, chf_wmax = 50.0;
  std::size_t chf_np = 201;
  std::vector<double> chf_u;
  c_chf->add_option("--t", chf_t)->required();
  c_chf->add_option("--x0", chf_x0)->required();
  c_chf->add_option("--omega-max", chf_wmax);
  c_chf->add_option("--n-points", chf_np);
  c_chf->add_option("--u", chf_u,
                    "single complex argument: re,im (Re <= 0)")
      ->expected(2)
      ->delimiter(',');
  c_chf->callback([&] {
    const ModelParams p = jcir::scenario::load_params(chf_c.config);
    summary = base_summary("chf", p, chf_c);
    summary["t"] = chf_t;
    summary["x0"] = chf_x0;
    if (!chf_u.empty()) {
      const std::complex<double> u{chf_u[0], chf_u[1]};
      const std::complex<double> v = jcir::chf::jcir_chf(chf_t, u, chf_x0, p);
      summary["u"] = {chf_u[0], chf_u[1]};
      summary["value_re"] = v.real();
      summary["value_im"] = v.imag();
      summary["value_abs"] = std::abs(v);
      return;
    }
    std::vector<std::vector<double>> rows(chf_np);
    for (std::size_t j = 0; j < chf_np; ++j) {
      const double w = chf_wmax * static_cast<double>(j) /
                       static_cast<double>(chf_np - 1);
      const std::complex<double> v =
          jcir::chf::jcir_chf(chf_t, {0.0, w}, chf_x0, p);
      rows[j] = {w, v.real(), v.imag(), std::abs(v)};
    }
    if (!chf_c.out.empty()) write_csv(chf_c.out, "omega,re,im,abs", rows);
    summary["omega_max"] = chf_wmax;
    summary["n_points"] = chf_np;
    summary["abs_at_omega_max"] = rows.back()[3];
  });

  // ---- density ----
  auto* c_den = app.add_subcommand(
      "density", "Fourier-inverted density of X_t or of the limit law");
  Common den_c;
  add_common(c_den, den_c);
  double den_t = 1.0, den_x0 = 1.0, den_ymax = 10.0, den_range = 0.0;
  std::size_t den_ng = 200;
  bool den_stat = false;
  c_den->add_option("--t", den_t);
  c_den->add_option("--x0", den_x0);
  c_den->add_option("--y-max", den_ymax);
  c_den->add_option("--n-grid", den_ng);
  c_den->add_option("--range", den_range, "expansion window (0 = auto)");
  c_den->add_flag("--stationary", den_stat, "invert the limit law instead");
  c_den->callback([&] {
    const ModelParams p = jcir::scenario::load_params(den_c.config);
    std::vector<double> ys(den_ng);
    for (std::size_t j = 0; j < den_ng; ++j)
      ys[j] = den_ymax * (static_cast<double>(j) + 0.5) /
              static_cast<double>(den_ng);
    jcir::chf::InversionOptions opts;
    opts.threads = den_c.threads;
    opts.range = den_range;
    jcir::chf::DensityGrid g;
    if (den_stat) {
      const jcir::ergo::StationaryLaw law(p);
      const double range =
          den_range > 0 ? den_range : law.default_range(den_ymax);
      g = law.density(ys, range, opts);
    } else {
      g = jcir::chf::invert_density(p, den_t, den_x0, ys, opts);
    }
    if (!den_c.out.empty()) {
      std::vector<std::vector<double>> rows(ys.size());
      for (std::size_t j = 0; j < ys.size(); ++j) rows[j] = {g.y[j], g.f[j]};
      write_csv(den_c.out, "y,f", rows);
    }
    summary = base_summary("density", p, den_c);
    if (!den_stat) {
      summary["t"] = den_t;
      summary["x0"] = den_x0;
    }
    summary["stationary"] = den_stat;
    summary["n_grid"] = den_ng;
    summary["range"] = g.range;
    summary["n_terms"] = g.n_terms;
    summary["err_estimate"] = g.err_estimate;
    summary["tail_tol_met"] = g.tail_tol_met;
  });

  // ---- moments ----
  auto* c_mom = app.add_subcommand(
      "moments", "Monte Carlo moments E[X_t^kappa] with divergence refusal");
  Common mom_c;
  add_common(c_mom, mom_c);
  double mom_t = 1.0, mom_x0 = 1.0;
  std::size_t mom_n = 100000;
  std::vector<double> mom_kappa{1.0};
  c_mom->add_option("--t", mom_t)->required();
  c_mom->add_option("--x0", mom_x0)->required();
  c_mom->add_option("--n", mom_n);
  c_mom->add_option("--kappa", mom_kappa)->delimiter(',');
  c_mom->callback([&] {
    const ModelParams p = jcir::scenario::load_params(mom_c.config);
    // Refuse up front if any requested order diverges, naming the culprit.
    for (double k : mom_kappa) {
      const auto tm = jcir::levy::tail_moment(p.jumps, k);
      if (!tm.finite)
        throw std::domain_error(
            "E[X_t^" + fmt_g(k) +
            "] is infinite for every t > 0: the jump measure's tail moment "
            "of order " +
            fmt_g(k) + " diverges");
    }
    summary = base_summary("moments", p, mom_c);
    summary["t"] = mom_t;
    summary["x0"] = mom_x0;
    summary["n"] = mom_n;
    ojson results = ojson::array();
    for (double k : mom_kappa) {
      const auto e = jcir::ergo::moment_estimate(p, mom_t, mom_x0, k, mom_n,
                                                 mom_c.seed, mom_c.threads);
      ojson r;
      r["kappa"] = k;
      r["mean"] = e.mean;
      r["stderr"] = e.stderr_;
      if (k <= 1.0) {
        const double m1 = jcir::levy::first_moment(p.jumps);
        if (std::isfinite(m1))
          r["sup_bound"] = std::pow(mom_x0 + (p.a + m1) / p.b, k);
      }
      results.push_back(r);
    }
    summary["results"] = results;
  });

  // ---- drift ----
  auto* c_drift = app.add_subcommand(
      "drift", "generator drift scan AV vs -cV + m (CSV: x,av,excess)");
  Common drift_c;
  add_common(c_drift, drift_c);
  std::string drift_fn = "log";
  double drift_kappa = 0.5, drift_c_rate = 0.0, drift_xmax = 1e6;
  std::size_t drift_ng = 60;
  c_drift->add_option("--fn", drift_fn)
      ->check(CLI::IsMember({"log", "power"}));
  c_drift->add_option("--kappa", drift_kappa, "power exponent target");
  c_drift->add_option("--c", drift_c_rate, "drift rate (0 = default)");
  c_drift->add_option("--x-max", drift_xmax);
  c_drift->add_option("--n-grid", drift_ng);
  c_drift->callback([&] {
    const ModelParams p = jcir::scenario::load_params(drift_c.config);
    const std::vector<double> grid =
        jcir::lyapunov::make_grid(1e-2, drift_xmax, drift_ng);
    const jcir::lyapunov::DriftReport r =
        drift_fn == "log"
            ? jcir::lyapunov::check_log_drift(p, grid, drift_c_rate)
            : jcir::lyapunov::check_power_drift(p, drift_kappa, grid,
                                                drift_c_rate);
    if (!drift_c.out.empty()) {
      jcir::lyapunov::LyapunovFn fn =
          r.fn == jcir::lyapunov::FnKind::Log1p
              ? jcir::lyapunov::LyapunovFn::log1p_fn()
              : (r.fn == jcir::lyapunov::FnKind::Identity
                     ? jcir::lyapunov::LyapunovFn::identity()
                     : jcir::lyapunov::LyapunovFn::power(r.exponent));
      std::vector<std::vector<double>> rows(r.xs.size());
      for (std::size_t i = 0; i < r.xs.size(); ++i)
        rows[i] = {r.xs[i], r.av[i], r.av[i] + r.c * fn.value(r.xs[i])};
      write_csv(drift_c.out, "x,av,excess", rows);
    }
    summary = base_summary("drift", p, drift_c);
    summary["fn"] = drift_fn;
    if (drift_fn == "power") summary["kappa"] = drift_kappa;
    summary["c"] = r.c;
    summary["m"] = r.m;
    if (std::isfinite(r.k_end)) summary["k_end"] = r.k_end;
    summary["satisfied"] = r.satisfied;
    summary["tail_value"] = r.tail_value;
    summary["worst_margin"] = r.worst_margin;
  });

  // ---- ergodic ----
  auto* c_erg = app.add_subcommand(
      "ergodic", "long-run time average of an observable vs the limit law");
  Common erg_c;
  add_common(c_erg, erg_c);
  double erg_x0 = 0.0, erg_T = 0.0, erg_dt = 0.05, erg_burn = -1.0;
  std::size_t erg_batches = 20;
  std::string erg_f = "exp:1.0";
  c_erg->add_option("--x0", erg_x0);
  c_erg->add_option("--horizon", erg_T, "0 = 2000/b");
  c_erg->add_option("--dt-obs", erg_dt);
  c_erg->add_option("--burn-in", erg_burn, "negative = 5/b");
  c_erg->add_option("--batches", erg_batches);
  c_erg->add_option("--f", erg_f, "identity | exp:<s> | ind:<y>");
  c_erg->callback([&] {
    const ModelParams p = jcir::scenario::load_params(erg_c.config);
    std::string label;
    const auto f = parse_observable(erg_f, label);
    const double horizon = erg_T > 0 ? erg_T : 2000.0 / p.b;
    const jcir::ergo::TimeAverage ta = jcir::ergo::time_average(
        p, erg_x0, f, horizon, erg_dt, erg_c.seed, erg_burn, erg_batches);
    summary = base_summary("ergodic", p, erg_c);
    summary["x0"] = erg_x0;
    summary["observable"] = label;
    summary["horizon"] = ta.horizon;
    summary["burn_in"] = ta.burn_in;
    summary["batches"] = ta.batches;
    summary["time_average"] = ta.est.mean;
    summary["batch_stderr"] = ta.est.stderr_;
    // Stationary reference value when it is computable.
    const jcir::ergo::StationaryLaw law(p);
    double ref = std::numeric_limits<double>::quiet_NaN();
    if (erg_f == "identity") {
      const double mu = law.mean();
      if (std::isfinite(mu)) ref = mu;
    } else if (erg_f.rfind("exp:", 0) == 0) {
      ref = law.laplace(std::stod(erg_f.substr(4)));
    } else if (erg_f.rfind("ind:", 0) == 0) {
      const std::vector<double> y{std::stod(erg_f.substr(4))};
      ref = law.cdf(y, 1e-5)[0];
    }
    if (std::isfinite(ref)) {
      summary["stationary_value"] = ref;
      summary["abs_gap"] = std::abs(ta.est.mean - ref);
      summary["agrees_3se"] =
          std::abs(ta.est.mean - ref) <= 3 * ta.est.stderr_;
    }
  });

  // ---- decay ----
  auto* c_dec = app.add_subcommand(
      "decay", "distance to the limit law over time with a rate fit");
  Common dec_c;
  add_common(c_dec, dec_c);
  double dec_x0 = 0.0;
  std::size_t dec_n = 20000;
  std::vector<double> dec_ts{0.5, 1.0, 1.5, 2.0, 3.0};
  c_dec->add_option("--x0", dec_x0);
  c_dec->add_option("--n", dec_n);
  c_dec->add_option("--t-grid", dec_ts)->delimiter(',');
  c_dec->callback([&] {
    const ModelParams p = jcir::scenario::load_params(dec_c.config);
    const jcir::ergo::DecayFit fit =
        jcir::ergo::decay_fit(p, dec_x0, dec_ts, dec_n, dec_c.seed,
                              dec_c.threads);
    if (!dec_c.out.empty()) {
      std::vector<std::vector<double>> rows(fit.ts.size());
      for (std::size_t i = 0; i < fit.ts.size(); ++i)
        rows[i] = {fit.ts[i], fit.d[i], fit.se[i],
                   fit.used[i] ? 1.0 : 0.0};
      write_csv(dec_c.out, "t,d,se,used", rows);
    }
    summary = base_summary("decay", p, dec_c);
    summary["x0"] = dec_x0;
    summary["n"] = dec_n;
    summary["fitted"] = fit.fitted;
    if (fit.fitted) {
      summary["delta_hat"] = fit.delta_hat;
      summary["delta_se"] = fit.delta_se;
    }
    summary["d"] = fit.d;
  });

  // ---- bessel-check ----
  auto* c_bes = app.add_subcommand(
      "bessel-check",
      "self-test of the jump-descendant sampler against its transform");
  Common bes_c;
  add_common(c_bes, bes_c, /*needs_config=*/false);
  double bes_alpha = 1.0, bes_beta = 2.0;
  std::size_t bes_n = 200000;
  c_bes->add_option("--alpha", bes_alpha)->required();
  c_bes->add_option("--beta", bes_beta)->required();
  c_bes->add_option("--n", bes_n);
  c_bes->callback([&] {
    const jcir::bessel::BesselParams bp{bes_alpha, bes_beta};
    jcir::bessel::validate(bp);
    std::vector<double> xs(bes_n);
    for (std::size_t i = 0; i < bes_n; ++i) {
      jcir::RandomStream rs(bes_c.seed, i);
      xs[i] = jcir::bessel::bessel_sample(bp, rs);
    }
    bool pass = true;
    ojson checks = ojson::array();
    auto push = [&](const std::string& name, double got, double want,
                    double se) {
      const bool ok = std::abs(got - want) <= 3.5 * se + 1e-12;
      pass = pass && ok;
      ojson c;
      c["name"] = name;
      c["estimate"] = got;
      c["exact"] = want;
      c["stderr"] = se;
      c["pass"] = ok;
      checks.push_back(c);
    };
    // Atom weight.
    double zero_frac = 0;
    for (double x : xs) zero_frac += (x == 0.0) ? 1.0 : 0.0;
    zero_frac /= static_cast<double>(bes_n);
    const double p0 = jcir::bessel::bessel_atom(bp);
    push("atom", zero_frac, p0,
         std::sqrt(p0 * (1 - p0) / static_cast<double>(bes_n)));
    // Mean.
    const auto em = jcir::stats::estimate(xs);
    push("mean", em.mean, bes_alpha / bes_beta, em.stderr_);
    // Transform on the imaginary axis.
    for (double w : {0.7, 1.6}) {
      std::vector<double> re(bes_n), im(bes_n);
      for (std::size_t i = 0; i < bes_n; ++i) {
        re[i] = std::cos(w * xs[i]);
        im[i] = std::sin(w * xs[i]);
      }
      const auto er = jcir::stats::estimate(re);
      const auto ei = jcir::stats::estimate(im);
      const auto want = jcir::bessel::bessel_chf(bp, {0.0, w});
      push("chf_re@" + fmt_g(w), er.mean, want.real(), er.stderr_);
      push("chf_im@" + fmt_g(w), ei.mean, want.imag(), ei.stderr_);
    }
    summary["command"] = "bessel-check";
    summary["alpha"] = bes_alpha;
    summary["beta"] = bes_beta;
    summary["n"] = bes_n;
    summary["seed"] = bes_c.seed;
    summary["checks"] = checks;
    summary["pass"] = pass;
  });

  const auto start = std::chrono::steady_clock::now();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  std::fprintf(stderr, "wall_ms=%.1f\n", ms);
  std::cout << summary.dump(2) << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
}
