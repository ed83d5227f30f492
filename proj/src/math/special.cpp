#include "pr2d2ord/math/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pr2d2ord::math {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kFpMin = std::numeric_limits<double>::min() / kEps;

// series expansion of P(a,x), valid for x < a+1
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 1; n <= 1000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// continued fraction for Q(a,x), valid for x >= a+1
double gamma_q_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kFpMin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = b + an / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// continued fraction for the incomplete beta (Lentz)
double beta_cf(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}
}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0)
    throw std::domain_error("gamma_p: requires a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0)
    throw std::domain_error("gamma_q: requires a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double inc_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error("inc_beta: requires a, b > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double lbt = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(lbt) * beta_cf(a, b, x) / a;
  }
  return 1.0 - std::exp(lbt) * beta_cf(b, a, 1.0 - x) / b;
}

double inc_beta_inv(double a, double b, double p) {
  if (!(p >= 0.0) || !(p <= 1.0))
    throw std::domain_error("inc_beta_inv: p must lie in [0, 1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  // initial guess (Abramowitz & Stegun 26.5.22 style)
  double x;
  {
    const double lna = std::log(a / (a + b));
    const double lnb = std::log(b / (a + b));
    const double t = std::exp(a * lna) / a;
    const double u = std::exp(b * lnb) / b;
    const double w = t + u;
    if (p < t / w) {
      x = std::pow(a * w * p, 1.0 / a);
    } else {
      x = 1.0 - std::pow(b * w * (1.0 - p), 1.0 / b);
    }
  }
  if (!(x > 0.0) || !(x < 1.0)) x = 0.5;

  // Newton with bisection safeguard
  double lo = 0.0, hi = 1.0;
  const double afac = -log_beta(a, b);
  for (int it = 0; it < 100; ++it) {
    const double err = inc_beta(a, b, x) - p;
    if (err > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double logpdf = (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) + afac;
    double step = err * std::exp(-logpdf);
    double xn = x - step;
    if (!(xn > lo) || !(xn < hi)) xn = 0.5 * (lo + hi);
    if (std::fabs(xn - x) <= 1e-16 * std::max(1e-16, xn)) {
      x = xn;
      break;
    }
    x = xn;
  }
  return x;
}

double beta_pdf(double x, double a, double b) {
  if (x < 0.0 || x > 1.0) return 0.0;
  if (x == 0.0) {
    if (a < 1.0) return std::numeric_limits<double>::infinity();
    if (a == 1.0) return std::exp(-log_beta(a, b)) * std::pow(1.0 - x, b - 1.0);
    return 0.0;
  }
  if (x == 1.0) {
    if (b < 1.0) return std::numeric_limits<double>::infinity();
    if (b == 1.0) return std::exp(-log_beta(a, b)) * std::pow(x, a - 1.0);
    return 0.0;
  }
  return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta(a, b));
}

double beta_cdf(double x, double a, double b) { return inc_beta(a, b, x); }

double beta_quantile(double p, double a, double b) { return inc_beta_inv(a, b, p); }

double gamma_cdf(double x, double shape, double rate) {
  if (x <= 0.0) return 0.0;
  return gamma_p(shape, rate * x);
}

double dirichlet_log_pdf(const std::vector<double>& x, const std::vector<double>& alpha) {
  if (x.size() != alpha.size())
    throw std::invalid_argument("dirichlet_log_pdf: size mismatch");
  double a0 = 0.0;
  double lp = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(alpha[k] > 0.0)) throw std::domain_error("dirichlet_log_pdf: alpha > 0 required");
    if (!(x[k] > 0.0)) return -std::numeric_limits<double>::infinity();
    a0 += alpha[k];
    lp += (alpha[k] - 1.0) * std::log(x[k]) - std::lgamma(alpha[k]);
  }
  return lp + std::lgamma(a0);
}

}  // namespace pr2d2ord::math
