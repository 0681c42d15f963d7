#include "jcir/levy.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "jcir/quad.hpp"

namespace jcir::levy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double exp1(double x) { return -std::expint(-x); }  // E1(x), x > 0

// E[Z^kappa 1{Z>1}] for the jump laws (unnormalized by rate).
double law_tail_moment(const JumpLaw& law, double kappa, bool& finite) {
  finite = true;
  return std::visit(
      overloaded{
          [&](const PointMass& p) {
            return p.z0 > 1.0 ? std::pow(p.z0, kappa) : 0.0;
          },
          [&](const ExponentialLaw& e) {
            // int_1^inf z^k e^(-z/m)/m dz = m^k Gamma(k+1, 1/m)
            return std::pow(e.mean, kappa) *
                   boost::math::tgamma(kappa + 1.0, 1.0 / e.mean);
          },
          [&](const ParetoLaw& p) {
            if (kappa >= p.a) {
              finite = false;
              return kInf;
            }
            // all mass sits above z_min >= 1
            return p.a * std::pow(p.z_min, kappa) / (p.a - kappa);
          }},
      law);
}

double law_log_tail(const JumpLaw& law) {
  return std::visit(
      overloaded{[&](const PointMass& p) {
                   return p.z0 > 1.0 ? std::log(p.z0) : 0.0;
                 },
                 [&](const ExponentialLaw& e) {
                   return quad::integrate(
                              [&](double z) {
                                return std::log(z) *
                                       std::exp(-z / e.mean) / e.mean;
                              },
                              1.0, quad::infinity())
                       .value;
                 },
                 [&](const ParetoLaw& p) { return std::log(p.z_min) + 1.0 / p.a; }},
      law);
}

double law_mean(const JumpLaw& law, bool& finite) {
  finite = true;
  return std::visit(overloaded{[&](const PointMass& p) { return p.z0; },
                               [&](const ExponentialLaw& e) { return e.mean; },
                               [&](const ParetoLaw& p) {
                                 if (p.a <= 1.0) {
                                   finite = false;
                                   return kInf;
                                 }
                                 return p.a * p.z_min / (p.a - 1.0);
                               }},
                    law);
}

double law_mass_above(const JumpLaw& law, double eps) {
  return std::visit(
      overloaded{[&](const PointMass& p) { return p.z0 > eps ? 1.0 : 0.0; },
                 [&](const ExponentialLaw& e) {
                   return std::exp(-eps / e.mean);
                 },
                 [&](const ParetoLaw& p) {
                   return eps <= p.z_min ? 1.0
                                         : std::pow(eps / p.z_min, -p.a);
                 }},
      law);
}

// int_{z<=eps} z law(dz)
double law_small_mean(const JumpLaw& law, double eps) {
  return std::visit(
      overloaded{
          [&](const PointMass& p) { return p.z0 <= eps ? p.z0 : 0.0; },
          [&](const ExponentialLaw& e) {
            double r = eps / e.mean;
            return e.mean * (1.0 - std::exp(-r) * (1.0 + r));
          },
          [&](const ParetoLaw& p) {
            if (eps <= p.z_min) return 0.0;
            if (p.a == 1.0) return p.z_min * std::log(eps / p.z_min);
            return p.a * std::pow(p.z_min, p.a) *
                   (std::pow(eps, 1.0 - p.a) - std::pow(p.z_min, 1.0 - p.a)) /
                   (1.0 - p.a);
          }},
      law);
}

double pareto_sample(double a, double z_min, RandomStream& rs) {
  return z_min * std::pow(rs.uniform(), -1.0 / a);
}

// E[e^(Zw)] for Pareto(a, z_min), Re w <= 0, via the rotated ray
// z = z_min + r d with d = -conj(w)/|w|, so e^(zw) = e^(z_min w) e^(-r|w|).
std::complex<double> pareto_mgf(double a, double z_min,
                                std::complex<double> w) {
  double aw = std::abs(w);
  if (aw == 0.0) return {1.0, 0.0};
  std::complex<double> d = -std::conj(w) / aw;
  std::complex<double> head = std::exp(z_min * w) * a * std::pow(z_min, a) * d;
  auto f = [&](double r) {
    return std::exp(-r * aw) * std::pow(z_min + r * d, -a - 1.0);
  };
  return head * quad::integrate_complex(f, 0.0, quad::infinity()).value;
}

// E[e^(Zw)] - 1 for Pareto(a, z_min) as an expansion around w = 0:
//   a z^a Gamma(-a) (-w)^a - a sum_{k>=1} (z w)^k / (k! (k - a)),
// valid for non-integer a; the k = 0 term of the sum cancels the -1
// exactly, so nothing here loses precision as w -> 0.
std::complex<double> pareto_exp_series(double a, double z_min,
                                       std::complex<double> w) {
  const std::complex<double> zw = z_min * w;
  std::complex<double> sum = 0.0;
  std::complex<double> pw = 1.0;  // (z w)^k / k!
  for (int k = 1; k <= 60; ++k) {
    pw *= zw / static_cast<double>(k);
    const std::complex<double> term = pw / (static_cast<double>(k) - a);
    sum += term;
    if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
  }
  const std::complex<double> head =
      a * std::pow(z_min, a) * std::tgamma(-a) * std::pow(-w, a);
  return head - a * sum;
}

// E[e^(Zw)] - 1 for Pareto(a, z_min), cancellation-free across scales:
// the series handles |z w| small, where mgf - 1 would lose everything;
// the ray quadrature handles the rest. Integer a puts a pole in each
// series piece (their sum stays finite), so straddle it symmetrically.
std::complex<double> pareto_exp_integral(double a, double z_min,
                                         std::complex<double> w) {
  const double aw = std::abs(w);
  if (aw == 0.0) return {0.0, 0.0};
  if (aw * z_min >= 0.5) return pareto_mgf(a, z_min, w) - 1.0;
  if (a >= 0.5 && std::abs(a - std::round(a)) < 1e-5) {
    const double d = 3e-6;
    return 0.5 * (pareto_exp_series(a + d, z_min, w) +
                  pareto_exp_series(a - d, z_min, w));
  }
  return pareto_exp_series(a, z_min, w);
}

// e^v - 1 without cancellation for small |v|.
std::complex<double> expm1_complex(std::complex<double> v) {
  if (std::abs(v) > 1e-3) return std::exp(v) - 1.0;
  std::complex<double> sum = 0.0;
  std::complex<double> pw = 1.0;  // v^k / k!
  for (int k = 1; k <= 8; ++k) {
    pw *= v / static_cast<double>(k);
    sum += pw;
  }
  return sum;
}

}  // namespace

void validate(const LevyModel& m) {
  auto req = [](bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
  };
  std::visit(
      overloaded{
          [&](const Zero&) {},
          [&](const CompoundPoisson& cp) {
            req(cp.rate > 0.0, "compound Poisson rate must be > 0");
            std::visit(
                overloaded{[&](const PointMass& p) {
                             req(p.z0 > 0.0, "point-mass jump must be > 0");
                           },
                           [&](const ExponentialLaw& e) {
                             req(e.mean > 0.0,
                                 "exponential jump mean must be > 0");
                           },
                           [&](const ParetoLaw& p) {
                             req(p.a > 0.0, "Pareto index must be > 0");
                             req(p.z_min >= 1.0, "Pareto z_min must be >= 1");
                           }},
                cp.law);
          },
          [&](const GammaDensity& g) {
            req(g.c > 0.0 && g.lambda > 0.0,
                "gamma-density parameters must be > 0");
          },
          [&](const ParetoTail& p) {
            req(p.a > 0.0, "Pareto tail index must be > 0");
          }},
      m);
}

bool is_finite_activity(const LevyModel& m) {
  return !std::holds_alternative<GammaDensity>(m);
}

TailReport tail_moment(const LevyModel& m, double kappa) {
  if (kappa < 0.0) throw std::invalid_argument("tail_moment: kappa < 0");
  TailReport r;
  r.kappa = kappa;
  std::visit(overloaded{[&](const Zero&) { r.value = 0.0; },
                        [&](const CompoundPoisson& cp) {
                          r.value =
                              cp.rate * law_tail_moment(cp.law, kappa, r.finite);
                        },
                        [&](const GammaDensity& g) {
                          // c lambda^-k Gamma(k, lambda), upper incomplete;
                          // Gamma(0, x) = E1(x)
                          r.value = kappa == 0.0
                                        ? g.c * exp1(g.lambda)
                                        : g.c *
                                              boost::math::tgamma(kappa,
                                                                  g.lambda) /
                                              std::pow(g.lambda, kappa);
                        },
                        [&](const ParetoTail& p) {
                          if (kappa >= p.a) {
                            r.finite = false;
                            r.value = kInf;
                          } else {
                            r.value = p.a / (p.a - kappa);
                          }
                        }},
             m);
  return r;
}

double log_tail(const LevyModel& m) {
  return std::visit(
      overloaded{[&](const Zero&) { return 0.0; },
                 [&](const CompoundPoisson& cp) {
                   return cp.rate * law_log_tail(cp.law);
                 },
                 [&](const GammaDensity& g) {
                   return quad::integrate(
                              [&](double z) {
                                return std::log(z) * g.c *
                                       std::exp(-g.lambda * z) / z;
                              },
                              1.0, quad::infinity())
                       .value;
                 },
                 [&](const ParetoTail& p) { return 1.0 / p.a; }},
      m);
}

double first_moment(const LevyModel& m) {
  return std::visit(overloaded{[&](const Zero&) { return 0.0; },
                               [&](const CompoundPoisson& cp) {
                                 bool finite = true;
                                 double v = law_mean(cp.law, finite);
                                 return finite ? cp.rate * v : kInf;
                               },
                               [&](const GammaDensity& g) {
                                 return g.c / g.lambda;
                               },
                               [&](const ParetoTail& p) {
                                 return p.a > 1.0 ? p.a / (p.a - 1.0) : kInf;
                               }},
                    m);
}

double mass_above(const LevyModel& m, double eps) {
  return std::visit(
      overloaded{[&](const Zero&) { return 0.0; },
                 [&](const CompoundPoisson& cp) {
                   return cp.rate * law_mass_above(cp.law, eps);
                 },
                 [&](const GammaDensity& g) {
                   if (eps <= 0.0) return kInf;
                   return g.c * exp1(g.lambda * eps);
                 },
                 [&](const ParetoTail& p) {
                   return eps <= 1.0 ? 1.0 : std::pow(eps, -p.a);
                 }},
      m);
}

double small_mean(const LevyModel& m, double eps) {
  if (eps <= 0.0) return 0.0;
  return std::visit(
      overloaded{[&](const Zero&) { return 0.0; },
                 [&](const CompoundPoisson& cp) {
                   return cp.rate * law_small_mean(cp.law, eps);
                 },
                 [&](const GammaDensity& g) {
                   // int_0^eps c e^(-lambda z) dz
                   return g.c / g.lambda * (1.0 - std::exp(-g.lambda * eps));
                 },
                 [&](const ParetoTail& p) {
                   return law_small_mean(ParetoLaw{p.a, 1.0}, eps);
                 }},
      m);
}

double density_at(const LevyModel& m, double z) {
  if (z <= 0.0) return 0.0;
  return std::visit(
      overloaded{[&](const Zero&) { return 0.0; },
                 [&](const CompoundPoisson& cp) {
                   return std::visit(
                       overloaded{
                           [&](const PointMass&) -> double {
                             throw std::invalid_argument(
                                 "density_at: point-mass jumps have no "
                                 "density, use atom()");
                           },
                           [&](const ExponentialLaw& e) {
                             return cp.rate * std::exp(-z / e.mean) / e.mean;
                           },
                           [&](const ParetoLaw& p) {
                             return z < p.z_min
                                        ? 0.0
                                        : cp.rate * p.a *
                                              std::pow(p.z_min, p.a) *
                                              std::pow(z, -p.a - 1.0);
                           }},
                       cp.law);
                 },
                 [&](const GammaDensity& g) {
                   return g.c * std::exp(-g.lambda * z) / z;
                 },
                 [&](const ParetoTail& p) {
                   return z < 1.0 ? 0.0 : p.a * std::pow(z, -p.a - 1.0);
                 }},
      m);
}

std::optional<std::pair<double, double>> atom(const LevyModel& m) {
  if (const auto* cp = std::get_if<CompoundPoisson>(&m))
    if (const auto* pm = std::get_if<PointMass>(&cp->law))
      return std::make_pair(pm->z0, cp->rate);
  return std::nullopt;
}

std::pair<RestrictedMeasure, RestrictedMeasure> split(const LevyModel& m) {
  return {RestrictedMeasure{m, false}, RestrictedMeasure{m, true}};
}

double mass(const RestrictedMeasure& r) {
  double big = mass_above(r.base, 1.0);
  if (r.above_one) return big;
  double total = mass_above(r.base, 0.0);
  return total - big;  // inf - finite = inf for GammaDensity
}

double sample_jump(const RestrictedMeasure& big, RandomStream& rs) {
  if (!big.above_one)
    throw std::invalid_argument("sample_jump: not the big part");
  if (!(mass(big) > 0.0))
    throw std::invalid_argument("sample_jump: big part has zero mass");
  return sample_above(big.base, 1.0, rs);
}

double sample_above(const LevyModel& m, double eps, RandomStream& rs) {
  double w = mass_above(m, eps);
  if (!(w > 0.0) || std::isinf(w))
    throw std::invalid_argument(
        "sample_above: restricted measure must have finite positive mass");
  return std::visit(
      overloaded{
          [&](const Zero&) -> double {
            throw std::invalid_argument("sample_above: zero measure");
          },
          [&](const CompoundPoisson& cp) {
            return std::visit(
                overloaded{[&](const PointMass& p) { return p.z0; },
                           [&](const ExponentialLaw& e) {
                             return eps + rs.exponential(e.mean);
                           },
                           [&](const ParetoLaw& p) {
                             return pareto_sample(p.a, std::max(eps, p.z_min),
                                                  rs);
                           }},
                cp.law);
          },
          [&](const GammaDensity& g) {
            // Exact rejection from the envelope c z^-1 on (eps,1) glued to
            // c e^(-lambda z) on (max(eps,1), inf).
            double lo = eps;
            double b1 = lo < 1.0 ? g.c * std::log(1.0 / lo) : 0.0;
            double start2 = std::max(lo, 1.0);
            double b2 =
                g.c * std::exp(-g.lambda * start2) / (g.lambda * start2);
            for (;;) {
              if (rs.uniform() * (b1 + b2) < b1) {
                double z = lo * std::pow(1.0 / lo, rs.uniform());
                if (rs.uniform() <= std::exp(-g.lambda * z)) return z;
              } else {
                double z = start2 + rs.exponential(1.0 / g.lambda);
                if (rs.uniform() * z <= start2) return z;
              }
            }
          },
          [&](const ParetoTail& p) {
            return pareto_sample(p.a, std::max(eps, 1.0), rs);
          }},
      m);
}

std::complex<double> exp_integral(const LevyModel& m, std::complex<double> w) {
  if (w.real() > 1e-12)
    throw std::invalid_argument("exp_integral: Re w must be <= 0");
  if (std::abs(w) == 0.0) return {0.0, 0.0};
  return std::visit(
      overloaded{
          [&](const Zero&) { return std::complex<double>(0.0, 0.0); },
          [&](const CompoundPoisson& cp) {
            // each arm yields E[e^(Zw)] - 1 without forming mgf - 1
            std::complex<double> ei = std::visit(
                overloaded{[&](const PointMass& p) {
                             return expm1_complex(p.z0 * w);
                           },
                           [&](const ExponentialLaw& e) {
                             return e.mean * w / (1.0 - e.mean * w);
                           },
                           [&](const ParetoLaw& p) {
                             return pareto_exp_integral(p.a, p.z_min, w);
                           }},
                cp.law);
            return cp.rate * ei;
          },
          [&](const GammaDensity& g) {
            // int (e^(zw)-1) c z^-1 e^(-lambda z) dz = -c Log(1 - w/lambda)
            return -g.c * std::log(1.0 - w / g.lambda);
          },
          [&](const ParetoTail& p) { return pareto_exp_integral(p.a, 1.0, w); }},
      m);
}

}  // namespace jcir::levy
