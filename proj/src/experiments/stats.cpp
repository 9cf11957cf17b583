#include "ksdk/experiments/stats.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ksdk/error.hpp"

namespace ksdk {

Estimate estimate_mean(std::span<const double> xs) {
  Estimate e;
  e.n = xs.size();
  if (e.n == 0) return e;
  double s = 0.0;
  for (double x : xs) s += x;
  e.mean = s / static_cast<double>(e.n);
  if (e.n < 2) return e;
  double ss = 0.0;
  for (double x : xs) ss += (x - e.mean) * (x - e.mean);
  e.std_dev = std::sqrt(ss / static_cast<double>(e.n - 1));
  e.std_error = e.std_dev / std::sqrt(static_cast<double>(e.n));
  return e;
}

double normal_critical(double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal(), 0.5 + level / 2.0);
}

Interval normal_interval(const Estimate& e, double level) {
  const double z = normal_critical(level);
  return {e.mean - z * e.std_error, e.mean + z * e.std_error};
}

Interval wilson_interval(std::size_t k, std::size_t n, double level) {
  if (k > n) throw InputError("wilson_interval: more successes than trials");
  if (n == 0) return {0.0, 1.0};
  const double z = normal_critical(level);
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z / (1 + z2 / nn) * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

LineFit fit_line(std::span<const double> x, std::span<const double> y, std::span<const double> y_se,
                 double level) {
  const std::size_t n = x.size();
  if (y.size() != n || (!y_se.empty() && y_se.size() != n))
    throw InputError("fit_line: x, y and y_se must have equal length");
  if (n < 2) throw InputError("fit_line: need at least 2 points, got " + std::to_string(n));
  LineFit f;
  f.points = n;
  f.weighted = !y_se.empty();
  std::vector<double> w(n, 1.0);
  if (f.weighted)
    for (std::size_t i = 0; i < n; ++i) {
      if (!(y_se[i] > 0.0)) throw InputError("fit_line: standard errors must be positive");
      w[i] = 1.0 / (y_se[i] * y_se[i]);
    }
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double xm = sx / sw, ym = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += w[i] * (x[i] - xm) * (x[i] - xm);
    sxy += w[i] * (x[i] - xm) * (y[i] - ym);
  }
  if (!(sxx > 0.0)) throw InputError("fit_line: x values must not all coincide");
  f.slope = sxy / sxx;
  f.intercept = ym - f.slope * xm;
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (f.weighted) {
    f.slope_se = std::sqrt(1.0 / sxx);
    f.intercept_se = std::sqrt(1.0 / sw + xm * xm / sxx);
    const double z = normal_critical(level);
    f.slope_ci = {f.slope - z * f.slope_se, f.slope + z * f.slope_se};
    return f;
  }
  if (n == 2) {
    f.slope_se = f.intercept_se = inf;
    f.slope_ci = {-inf, inf};
    return f;
  }
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    rss += r * r;
  }
  const double s2 = rss / static_cast<double>(n - 2);
  f.slope_se = std::sqrt(s2 / sxx);
  f.intercept_se = std::sqrt(s2 * (1.0 / static_cast<double>(n) + xm * xm / sxx));
  const boost::math::students_t dist(static_cast<double>(n - 2));
  const double t = boost::math::quantile(dist, 0.5 + level / 2.0);
  f.slope_ci = {f.slope - t * f.slope_se, f.slope + t * f.slope_se};
  return f;
}

RatioEstimate paired_mean_ratio(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  if (b.size() != n || n < 2) throw InputError("paired_mean_ratio: need two equal samples of size >= 2");
  const Estimate ea = estimate_mean(a), eb = estimate_mean(b);
  if (!(eb.mean > 0.0)) throw DomainError("paired_mean_ratio: denominator mean must be positive");
  double cov = 0.0;
  for (std::size_t i = 0; i < n; ++i) cov += (a[i] - ea.mean) * (b[i] - eb.mean);
  cov /= static_cast<double>(n - 1);
  const double nn = static_cast<double>(n);
  RatioEstimate r;
  r.ratio = ea.mean / eb.mean;
  const double va = ea.std_dev * ea.std_dev, vb = eb.std_dev * eb.std_dev;
  const double v = va - 2.0 * r.ratio * cov + r.ratio * r.ratio * vb;
  r.std_error = std::sqrt(std::max(0.0, v) / nn) / eb.mean;
  return r;
}

}  // namespace ksdk
