#include "jcir/bessel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "jcir/quad.hpp"

namespace jcir::bessel {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void validate(const BesselParams& p) {
  if (!(p.alpha >= 0.0) || !(p.beta > 0.0))
    throw std::invalid_argument("Bessel params need alpha >= 0, beta > 0");
}

double bessel_atom(const BesselParams& p) { return std::exp(-p.alpha); }

double log_series_s(double w) {
  if (w < 0.0) throw std::invalid_argument("log_series_s: w < 0");
  if (w == 0.0) return 0.0;
  if (w <= 400.0) {
    // direct sum; S(400) ~ e^40 stays in range
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 400; ++k) {
      term *= w / (static_cast<double>(k) * (k + 1.0));
      sum += term;
      if (term < sum * 1e-18) break;
    }
    return std::log(sum);
  }
  // log-space sum around the peak k* ~ sqrt(w), width ~ w^(1/4)
  auto log_term = [&](double k) {
    return k * std::log(w) - std::lgamma(k + 1.0) - std::lgamma(k + 2.0);
  };
  long kstar = static_cast<long>(std::sqrt(w));
  long width = static_cast<long>(10.0 * std::pow(w, 0.25)) + 20;
  long lo = std::max(0l, kstar - width);
  long hi = kstar + width;
  double m = log_term(static_cast<double>(kstar));
  double acc = 0.0;
  for (long k = lo; k <= hi; ++k)
    acc += std::exp(log_term(static_cast<double>(k)) - m);
  return m + std::log(acc);
}

double bessel_pdf(const BesselParams& p, double x) {
  validate(p);
  if (x < 0.0) return 0.0;
  if (p.alpha == 0.0) return 0.0;  // pure atom at 0
  double w = p.alpha * p.beta * x;
  return std::exp(std::log(p.alpha * p.beta) - p.alpha - p.beta * x +
                  log_series_s(w));
}

std::complex<double> bessel_chf(const BesselParams& p,
                                std::complex<double> u) {
  validate(p);
  if (u.real() > 1e-12)
    throw std::invalid_argument("bessel_chf: Re u must be <= 0");
  return std::exp(p.alpha * u / (p.beta - u));
}

namespace {

// e^(-a) / b^n * sum_k a^(k+1) (n+k)! / (k! (k+1)!) for integer n >= 1.
double integer_moment(double alpha, double beta, long n) {
  if (alpha == 0.0) return 0.0;
  auto log_term = [&](double k) {
    return (k + 1.0) * std::log(alpha) + std::lgamma(n + k + 1.0) -
           std::lgamma(k + 1.0) - std::lgamma(k + 2.0);
  };
  // peak near k ~ alpha; sum an ample window in log space
  long kstar = static_cast<long>(alpha) + n;
  long width = static_cast<long>(12.0 * std::sqrt(alpha + n + 1.0)) + 30;
  long lo = std::max(0l, kstar - width);
  long hi = kstar + width;
  double m = log_term(static_cast<double>(kstar));
  double acc = 0.0;
  for (long k = lo; k <= hi; ++k)
    acc += std::exp(log_term(static_cast<double>(k)) - m);
  return std::exp(m + std::log(acc) - alpha - n * std::log(beta));
}

}  // namespace

double bessel_moment(const BesselParams& p, double kappa) {
  validate(p);
  if (kappa < 0.0) throw std::invalid_argument("bessel_moment: kappa < 0");
  if (kappa == 0.0) return 1.0;
  if (p.alpha == 0.0) return 0.0;
  double n_int;
  if (std::modf(kappa, &n_int) == 0.0)
    return integer_moment(p.alpha, p.beta, static_cast<long>(n_int));
  // fractional: int x^k density dx, x = v / beta
  double alpha = p.alpha;
  auto f = [&](double v) {
    return std::pow(v, kappa) *
           std::exp(std::log(alpha) - alpha - v + log_series_s(alpha * v));
  };
  return quad::integrate(f, 0.0, quad::infinity()).value /
         std::pow(p.beta, kappa);
}

double bessel_sample(const BesselParams& p, RandomStream& rs) {
  validate(p);
  long n = rs.poisson(p.alpha);
  if (n == 0) return 0.0;
  return rs.gamma(static_cast<double>(n), 1.0 / p.beta);
}

BesselParams from_jump(double z, double s, double b, double sigma) {
  if (!(z > 0.0) || !(s > 0.0))
    throw std::invalid_argument("from_jump: need z > 0, s > 0");
  double g = std::expm1(b * s);  // e^(bs) - 1, stable for small s
  double q = 2.0 * b / (sigma * sigma * g);
  return BesselParams{q * z, q * (g + 1.0)};
}

ScanReport moment_bound_scan(double kappa, double delta,
                             std::span<const double> alphas,
                             std::span<const double> betas) {
  ScanReport rep;
  rep.kappa = kappa;
  rep.delta = delta;
  rep.sup_upper = 0.0;
  rep.inf_lower = kInf;
  rep.bounded = true;
  for (double a : alphas) {
    for (double b : betas) {
      BesselParams p{a, b};
      ScanPoint pt;
      pt.alpha = a;
      pt.beta = b;
      pt.moment = bessel_moment(p, kappa);
      double bk = std::pow(b, kappa), ak = std::pow(a, kappa);
      pt.upper_ratio = pt.moment * bk / (1.0 + ak);
      pt.lower_ratio = a > 0.0 ? pt.moment * bk / ak : kInf;
      if (!std::isfinite(pt.moment) || pt.moment < 0.0) rep.bounded = false;
      rep.sup_upper = std::max(rep.sup_upper, pt.upper_ratio);
      if (a >= delta) rep.inf_lower = std::min(rep.inf_lower, pt.lower_ratio);
      rep.points.push_back(pt);
    }
  }
  if (!(rep.sup_upper < kInf) || !(rep.inf_lower > 0.0)) rep.bounded = false;
  return rep;
}

}  // namespace jcir::bessel
