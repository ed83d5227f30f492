#include "pr2d2ord/math/normal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pr2d2ord::math {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112353;
constexpr double kSqrt1_2 = 0.70710678118654752440084436210485;

// Mills ratio Phi(-t)/phi(t) for t >= 8, Laplace continued fraction
// 1/(t + 1/(t + 2/(t + 3/(...)))) evaluated backwards.
double mills_ratio_tail(double t) {
  double f = t;
  for (int n = 48; n >= 1; --n) {
    f = t + n / f;
  }
  return 1.0 / f;
}
}  // namespace

double norm_pdf(double x) {
  return std::exp(-0.5 * x * x - 0.5 * kLog2Pi);
}

double log_norm_pdf(double x) { return -0.5 * x * x - 0.5 * kLog2Pi; }

double norm_cdf(double x) { return 0.5 * std::erfc(-x * kSqrt1_2); }

double log_norm_cdf(double x) {
  if (x > 8.0) {
    // log(1 - Phi(-x)), Phi(-x) tiny but exactly representable
    return std::log1p(-norm_cdf(-x));
  }
  if (x > -8.0) {
    return std::log(norm_cdf(x));
  }
  return log_norm_pdf(x) + std::log(mills_ratio_tail(-x));
}

double norm_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0))
    throw std::domain_error("norm_quantile: p must lie in (0, 1)");

  // Acklam's rational approximation
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // One Halley step against the accurate CDF
  const double e = norm_cdf(x) - p;
  const double u = e / norm_pdf(x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

double log_norm_cdf_diff(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("log_norm_cdf_diff: requires a < b");
  if (std::isinf(a) && a < 0.0) {
    if (std::isinf(b)) return 0.0;
    return log_norm_cdf(b);
  }
  if (std::isinf(b)) {
    return log_norm_cdf(-a);
  }
  // Phi(b) - Phi(a) = Phi(-a) - Phi(-b); pick the tail with smaller
  // magnitudes so the log-difference is well conditioned.
  double lo = a, hi = b;
  if (a + b > 0.0) {
    lo = -b;
    hi = -a;
  }
  const double lhi = log_norm_cdf(hi);
  const double llo = log_norm_cdf(lo);
  const double delta = lhi - llo;  // >= 0
  // log(e^lhi - e^llo) = lhi + log(1 - e^{-delta})
  double log1mexp;
  if (delta > 0.6931471805599453) {
    log1mexp = std::log1p(-std::exp(-delta));
  } else {
    const double em = -std::expm1(-delta);
    if (em <= 0.0) return -std::numeric_limits<double>::infinity();
    log1mexp = std::log(em);
  }
  return lhi + log1mexp;
}

}  // namespace pr2d2ord::math
