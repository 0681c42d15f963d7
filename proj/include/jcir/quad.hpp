#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace jcir::quad {

inline constexpr double kRelTol = 1e-10;
inline constexpr unsigned kMaxDepth = 15;

struct Result {
  double value = 0.0;
  double error = 0.0;
};

struct ComplexResult {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;
};

/// On a finite [a, b] uses tanh-sinh, which tolerates integrable endpoint
/// singularities; on [a, +inf) falls back to adaptive Gauss-Kronrod.
template <class F>
Result integrate(F&& f, double a, double b, double rel_tol = kRelTol) {
  Result r;
  if (std::isfinite(b)) {
    thread_local boost::math::quadrature::tanh_sinh<double> ts;
    double l1 = 0.0;
    double rel_err = 0.0;
    r.value = ts.integrate(std::forward<F>(f), a, b, rel_tol, &rel_err, &l1);
    r.error = rel_err * std::max(std::abs(r.value), l1);
    return r;
  }
  r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      std::forward<F>(f), a, b, kMaxDepth, rel_tol, &r.error);
  return r;
}

template <class F>
ComplexResult integrate_complex(F&& f, double a, double b,
                                double rel_tol = kRelTol) {
  ComplexResult r;
  r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      std::forward<F>(f), a, b, kMaxDepth, rel_tol, &r.error);
  return r;
}

inline double infinity() { return std::numeric_limits<double>::infinity(); }

}  // namespace jcir::quad
