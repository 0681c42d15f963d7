#include "jcir/chf.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "jcir/mc.hpp"
#include "jcir/quad.hpp"

namespace jcir::chf {

namespace {

void require_domain(std::complex<double> u) {
  if (u.real() > 1e-12)
    throw std::domain_error("chf: Re u must be <= 0");
}

// Lagrange interpolation through (xs[i], zs[i]), i < m, at x.
std::complex<double> lagrange(const double* xs, const std::complex<double>* zs,
                              std::size_t m, double x) {
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double li = 1.0;
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) li *= (x - xs[j]) / (xs[i] - xs[j]);
    acc += li * zs[i];
  }
  return acc;
}

}  // namespace

void validate(const ModelParams& p) {
  if (!(p.a >= 0.0)) throw std::invalid_argument("model: a must be >= 0");
  if (!(p.b > 0.0)) throw std::invalid_argument("model: b must be > 0");
  if (!(p.sigma > 0.0))
    throw std::invalid_argument("model: sigma must be > 0");
  levy::validate(p.jumps);
}

std::complex<double> psi(double t, std::complex<double> u, double b,
                         double sigma) {
  require_domain(u);
  if (t < 0.0) throw std::invalid_argument("psi: t must be >= 0");
  double e = std::exp(-b * t);
  std::complex<double> den =
      1.0 - (sigma * sigma / (2.0 * b)) * (1.0 - e) * u;
  return u * e / den;
}

std::complex<double> cir_chf(double t, std::complex<double> u, double x0,
                             double a, double b, double sigma) {
  require_domain(u);
  double e = std::exp(-b * t);
  std::complex<double> den =
      1.0 - (sigma * sigma / (2.0 * b)) * (1.0 - e) * u;
  return std::pow(den, -2.0 * a / (sigma * sigma)) *
         std::exp(x0 * u * e / den);
}

std::complex<double> z_exponent(double t, std::complex<double> u,
                                const ModelParams& p) {
  require_domain(u);
  if (t == 0.0 || std::holds_alternative<levy::Zero>(p.jumps))
    return {0.0, 0.0};
  auto g = [&](double s) {
    return levy::exp_integral(p.jumps, psi(s, u, p.b, p.sigma));
  };
  return quad::integrate_complex(g, 0.0, t, 1e-10).value;
}

std::complex<double> jcir_chf(double t, std::complex<double> u, double x0,
                              const ModelParams& p) {
  return cir_chf(t, u, x0, p.a, p.b, p.sigma) * std::exp(z_exponent(t, u, p));
}

double default_range(const ModelParams& p, double t, double x0,
                     double y_max) {
  double b = p.b, s2 = p.sigma * p.sigma;
  double e = std::exp(-b * t);
  // jump mean capped at z = 1e3 so heavy tails still give a finite scale
  double zcap = 1e3;
  double m1cap = levy::small_mean(p.jumps, zcap) +
                 zcap * levy::mass_above(p.jumps, zcap);
  double mean_cap = x0 * e + (p.a + m1cap) / b * (1.0 - e);
  double cir_var = x0 * s2 * (e - e * e) / b +
                   p.a * s2 * (1.0 - e) * (1.0 - e) / (2.0 * b * b);
  return std::max(2.0 * y_max, mean_cap + 25.0 * std::sqrt(cir_var + 1.0) +
                                   5.0 * std::min(t, 30.0 / b) * m1cap + 10.0);
}

DensityGrid density_from_chf(
    const std::function<std::complex<double>(double)>& phi,
    std::span<const double> y_grid, double range,
    const InversionOptions& opts) {
  if (!(range > 0.0))
    throw std::invalid_argument("density_from_chf: range must be > 0");
  const double L = range;
  const double dw = M_PI / L;

  // find the term count where |phi| drops under the tail tolerance
  std::size_t n = 256;
  bool met = false;
  while (n < opts.max_terms) {
    if (std::abs(phi(static_cast<double>(n) * dw)) < opts.chf_tail_tol) {
      met = true;
      break;
    }
    n *= 2;
  }
  n = std::min(n, opts.max_terms);

  // coefficients c_k = (2/L) Re phi(k dw); parallel, deterministic
  std::vector<double> coef(n);
  mc::transform_indexed(
      n, coef.data(),
      [&](std::size_t k) {
        return 2.0 / L * phi(static_cast<double>(k) * dw).real();
      },
      opts.threads);

  DensityGrid out;
  out.y.assign(y_grid.begin(), y_grid.end());
  out.f.resize(y_grid.size());
  out.range = L;
  out.n_terms = n;
  out.tail_tol_met = met;

  // cos(k theta) by the angle-addition recurrence. Both members of the
  // running pair are reseeded from std::cos at block boundaries: reseeding
  // only one would leave an inconsistent pair whose error excites the
  // sin(k theta) mode and compounds geometrically across blocks.
  auto cos_sum = [&](double y, double* half_out) {
    const double theta = dw * y;
    const double two_c = 2.0 * std::cos(theta);
    double ckm1 = 1.0, ck = std::cos(theta);
    double acc = coef[0] * 0.5, acc_half = coef[0] * 0.5;
    for (std::size_t k = 1; k < n; ++k) {
      if ((k & 4095u) == 0u) {
        ckm1 = std::cos(static_cast<double>(k - 1) * theta);
        ck = std::cos(static_cast<double>(k) * theta);
      }
      const double term = coef[k] * ck;
      acc += term;
      if (k < n / 2) acc_half += term;
      const double next = two_c * ck - ckm1;
      ckm1 = ck;
      ck = next;
    }
    if (half_out) *half_out = acc_half;
    return acc;
  };

  std::vector<double> f_half(y_grid.size());
  mc::transform_indexed(
      y_grid.size(), out.f.data(),
      [&](std::size_t j) { return cos_sum(y_grid[j], &f_half[j]); },
      opts.threads);

  double diff = 0.0;
  for (std::size_t j = 0; j < out.f.size(); ++j)
    diff = std::max(diff, std::abs(out.f[j] - f_half[j]));

  // chf tail: sum_{k>n} |c_k| ~ (2/pi) |phi| * omega for a ~omega^-2 tail
  double wn = static_cast<double>(n) * dw;
  double chf_tail = 2.0 / M_PI * std::abs(phi(wn)) * wn;
  // mass parked near the right edge re-enters by periodization
  double edge = 0.0;
  for (double q : {0.90, 0.95, 1.0})
    edge = std::max(edge, std::max(0.0, cos_sum(q * L, nullptr)));
  out.err_estimate = diff + chf_tail + edge * 0.2 * L / std::max(L, 1.0);
  return out;
}

DensityGrid invert_density(const ModelParams& p, double t, double x0,
                           std::span<const double> y_grid,
                           const InversionOptions& opts) {
  validate(p);
  if (!(p.a > 0.0))
    throw std::invalid_argument(
        "invert_density: a > 0 is required for a bounded density");
  if (!(t > 0.0)) throw std::invalid_argument("invert_density: t must be > 0");
  double y_max = y_grid.empty() ? 1.0 : y_grid.back();
  double L = opts.range > 0.0 ? opts.range : default_range(p, t, x0, y_max);
  // The jump exponent costs a quadrature per frequency, so tabulate it
  // over everything the expansion can request; the diffusion factor, which
  // carries all the tail decay, stays exact per term.
  const double dw = M_PI / L;
  const LogInterpTable ztab(
      [&p, t](double w) { return z_exponent(t, {0.0, w}, p); }, dw,
      dw * static_cast<double>(opts.max_terms), 1e-10);
  auto phi = [&, t, x0](double w) -> std::complex<double> {
    if (w == 0.0) return {1.0, 0.0};
    return cir_chf(t, {0.0, w}, x0, p.a, p.b, p.sigma) * std::exp(ztab(w));
  };
  return density_from_chf(phi, y_grid, L, opts);
}

std::vector<double> cdf_from_chf(
    const std::function<std::complex<double>(double)>& phi,
    std::span<const double> ys, double abs_tol) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  const std::size_t m = ys.size();
  std::vector<double> total(m, 0.0);

  // 15-node Kronrod estimate of int Im(phi e^(-iwy))/w over [lo,hi] for
  // every query point, sharing one phi evaluation per node
  auto kron = [&](double lo, double hi) {
    const auto& xs = GK::abscissa();  // nonnegative half, xs[0] == 0
    const auto& wk = GK::weights();
    double c = 0.5 * (hi + lo), h = 0.5 * (hi - lo);
    std::vector<double> w_nodes{c};
    for (std::size_t i = 1; i < xs.size(); ++i) {
      w_nodes.push_back(c - h * xs[i]);
      w_nodes.push_back(c + h * xs[i]);
    }
    std::vector<std::complex<double>> ph(w_nodes.size());
    for (std::size_t i = 0; i < w_nodes.size(); ++i) ph[i] = phi(w_nodes[i]);
    std::vector<double> est(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      auto g = [&](std::size_t i) {
        return std::imag(ph[i] * std::exp(std::complex<double>(
                                     0.0, -w_nodes[i] * ys[j]))) /
               w_nodes[i];
      };
      double k15 = wk[0] * g(0);
      for (std::size_t i = 1; i < xs.size(); ++i)
        k15 += wk[i] * (g(2 * i - 1) + g(2 * i));
      est[j] = h * k15;
    }
    return est;
  };

  // bisection-adaptive: accept halves when they agree with the parent
  auto adapt = [&](auto&& self, double lo, double hi,
                   const std::vector<double>& whole, int depth,
                   std::vector<double>& acc) -> void {
    double mid = 0.5 * (lo + hi);
    auto l = kron(lo, mid);
    auto r = kron(mid, hi);
    double disc = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      disc = std::max(disc, std::abs(l[j] + r[j] - whole[j]));
    if (depth >= 9 || disc < abs_tol / 64.0) {
      for (std::size_t j = 0; j < m; ++j) acc[j] += l[j] + r[j];
      return;
    }
    self(self, lo, mid, l, depth + 1, acc);
    self(self, mid, hi, r, depth + 1, acc);
  };

  double w_lo = 0.0;
  const double width = 4.0;
  int quiet = 0;
  for (int blockno = 0; blockno < 4096 && quiet < 3; ++blockno) {
    auto whole = kron(w_lo, w_lo + width);
    std::vector<double> acc(m, 0.0);
    adapt(adapt, w_lo, w_lo + width, whole, 0, acc);
    double worst = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      total[j] += acc[j];
      worst = std::max(worst, std::abs(acc[j]));
    }
    if (worst < abs_tol / 8.0 && std::abs(phi(w_lo + width)) < abs_tol)
      ++quiet;
    else
      quiet = 0;
    w_lo += width;
  }

  std::vector<double> out(m);
  for (std::size_t j = 0; j < m; ++j)
    out[j] = std::min(1.0, std::max(0.0, 0.5 - total[j] / M_PI));
  return out;
}

LogInterpTable::LogInterpTable(std::function<std::complex<double>(double)> f,
                               double w_lo, double w_hi, double abs_tol)
    : f_(std::move(f)), w_lo_(w_lo), w_hi_(w_hi) {
  if (!(w_lo > 0.0) || !(w_hi > w_lo))
    throw std::invalid_argument("LogInterpTable: need 0 < w_lo < w_hi");
  if (!(abs_tol > 0.0))
    throw std::invalid_argument("LogInterpTable: abs_tol must be > 0");
  const double xl = std::log(w_lo), xr = std::log(w_hi);

  std::map<double, std::complex<double>> nodes;
  constexpr int kSeeds = 33;
  for (int i = 0; i < kSeeds; ++i) {
    const double x = xl + (xr - xl) * i / (kSeeds - 1);
    nodes.emplace(x, f_(std::exp(x)));
  }

  // Midpoint-tested bisection: predict the gap midpoint from the stencil
  // around the gap, then insert the exact value either way (it is already
  // paid for); only a failed prediction re-queues the two halves. The
  // spacing floor stops runaway subdivision at a non-smooth point.
  const double min_gap = (xr - xl) / 65536.0;
  constexpr std::size_t kMaxNodes = 8192;
  std::vector<std::pair<double, double>> gaps;
  for (auto it = nodes.begin(), jt = std::next(nodes.begin());
       jt != nodes.end(); ++it, ++jt)
    gaps.emplace_back(it->first, jt->first);
  while (!gaps.empty()) {
    const auto [xa, xb] = gaps.back();
    gaps.pop_back();
    if (xb - xa <= min_gap || nodes.size() >= kMaxNodes) continue;
    const double xm = 0.5 * (xa + xb);
    const std::complex<double> exact = f_(std::exp(xm));

    auto ia = nodes.find(xa);
    auto ib = nodes.find(xb);
    double sx[4];
    std::complex<double> sz[4];
    std::size_t m = 0;
    if (ia != nodes.begin()) {
      const auto p = std::prev(ia);
      sx[m] = p->first, sz[m] = p->second, ++m;
    }
    sx[m] = ia->first, sz[m] = ia->second, ++m;
    sx[m] = ib->first, sz[m] = ib->second, ++m;
    if (const auto nb = std::next(ib); nb != nodes.end())
      sx[m] = nb->first, sz[m] = nb->second, ++m;
    const std::complex<double> pred = lagrange(sx, sz, m, xm);

    nodes.emplace(xm, exact);
    if (std::abs(pred - exact) > abs_tol) {
      gaps.emplace_back(xa, xm);
      gaps.emplace_back(xm, xb);
    }
  }

  x_.reserve(nodes.size());
  z_.reserve(nodes.size());
  for (const auto& [x, z] : nodes) {
    x_.push_back(x);
    z_.push_back(z);
  }

  // Off-node spot checks at low-discrepancy points; a miss downgrades the
  // table to a pass-through so a hard-to-interpolate function only costs
  // time, never accuracy.
  double u = 0.0;
  for (int i = 0; i < 16; ++i) {
    u += 0.618033988749895;
    u -= std::floor(u);
    const double x = xl + (xr - xl) * u;
    worst_probe_ =
        std::max(worst_probe_, std::abs(interp(x) - f_(std::exp(x))));
  }
  interpolating_ = worst_probe_ <= 10.0 * abs_tol;
}

std::complex<double> LogInterpTable::interp(double x) const {
  const std::size_t n = x_.size();
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - x_.begin());
  const std::size_t s = std::min(j >= 2 ? j - 2 : 0, n - 4);
  return lagrange(x_.data() + s, z_.data() + s, 4, x);
}

std::complex<double> LogInterpTable::operator()(double w) const {
  if (!interpolating_ || !(w >= w_lo_) || w > w_hi_) return f_(w);
  return interp(std::log(w));
}

}  // namespace jcir::chf
