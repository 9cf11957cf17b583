// Monte Carlo summaries, confidence intervals and straight-line fits.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ksdk {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return lo <= x && x <= hi; }
  bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
};

/// Sample mean with standard error s / sqrt(n) (0 when n < 2).
struct Estimate {
  std::size_t n = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double std_dev = 0.0;
};

Estimate estimate_mean(std::span<const double> xs);

/// Two-sided standard normal quantile for the given confidence level.
double normal_critical(double level);

/// mean +- z se
Interval normal_interval(const Estimate& e, double level = 0.95);

/// Wilson score interval for k successes in n trials.
Interval wilson_interval(std::size_t k, std::size_t n, double level = 0.95);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double intercept_se = 0.0;
  Interval slope_ci;
  std::size_t points = 0;
  /// True when the point errors were supplied (normal quantile), false for
  /// ordinary least squares with a Student t quantile on n - 2 dof.
  bool weighted = false;
};

/// y = intercept + slope x. With y_se (one per point, all > 0) the fit is
/// weighted by 1/se^2 and the errors are taken as known; otherwise OLS, which
/// needs at least 3 points for an interval (2 gives an exact line with an
/// infinite interval). InputError on size mismatch or fewer than 2 points.
LineFit fit_line(std::span<const double> x, std::span<const double> y,
                 std::span<const double> y_se = {}, double level = 0.95);

/// Ratio of two positive means estimated on paired samples, with the
/// delta-method standard error (the pairing enters through the covariance).
struct RatioEstimate {
  double ratio = 0.0;
  double std_error = 0.0;
};

RatioEstimate paired_mean_ratio(std::span<const double> a, std::span<const double> b);

}  // namespace ksdk
