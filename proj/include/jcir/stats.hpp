#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace jcir::stats {

/// Monte Carlo estimate: sample mean, its standard error, sample count.
struct MCEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};

inline MCEstimate estimate(std::span<const double> xs) {
  MCEstimate e;
  e.n = xs.size();
  if (e.n == 0) return e;
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(e.n);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  e.mean = m;
  if (e.n > 1)
    e.stderr_ = std::sqrt(ss / (static_cast<double>(e.n - 1) *
                                static_cast<double>(e.n)));
  return e;
}

/// sup_x |F_n(x) - F(x)| for a right-continuous cdf F. Tied samples are
/// treated as an atom of the law: only the right-side gap is measured
/// there, since the left limit of F is not available through the callback.
template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf&& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < xs.size()) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    const double f = cdf(xs[i]);
    d = std::max(d, std::abs(static_cast<double>(j) / n - f));
    if (j == i + 1)
      d = std::max(d, std::abs(static_cast<double>(i) / n - f));
    i = j;
  }
  return d;
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    // step past every copy of the current value in both samples before
    // measuring, so ties do not produce a spurious gap
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

/// Asymptotic one-sample KS critical value at significance alpha.
inline double ks_critical(double alpha, std::size_t n) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) /
         std::sqrt(static_cast<double>(n));
}

/// Asymptotic two-sample KS critical value at significance alpha.
inline double ks_two_sample_critical(double alpha, std::size_t n,
                                     std::size_t m) {
  double nn = static_cast<double>(n), mm = static_cast<double>(m);
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) *
         std::sqrt((nn + mm) / (nn * mm));
}

/// Batch-means estimate for a stationary time series: drop values before
/// burn_in, split the rest into n_batches equal batches, return the mean of
/// batch means and its standard error (std of batch means / sqrt(n_batches)).
inline MCEstimate batch_means(std::span<const double> series,
                              std::size_t burn_in, std::size_t n_batches) {
  if (burn_in >= series.size())
    throw std::invalid_argument("batch_means: burn-in exceeds series length");
  std::span<const double> body = series.subspan(burn_in);
  std::size_t batch = body.size() / n_batches;
  if (batch == 0)
    throw std::invalid_argument("batch_means: series too short for batches");
  std::vector<double> means(n_batches);
  for (std::size_t k = 0; k < n_batches; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < batch; ++i) s += body[k * batch + i];
    means[k] = s / static_cast<double>(batch);
  }
  MCEstimate e = estimate(means);
  e.n = body.size();
  return e;
}

/// Least-squares line y = intercept + slope * x with slope standard error.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::size_t n = 0;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3)
    throw std::invalid_argument("fit_line: need >= 3 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.n = x.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (f.intercept + f.slope * x[i]);
    rss += r * r;
  }
  f.slope_stderr = std::sqrt(rss / ((n - 2.0) * sxx));
  return f;
}

}  // namespace jcir::stats
