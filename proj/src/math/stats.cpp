#include "pr2d2ord/math/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pr2d2ord/math/special.hpp"

namespace pr2d2ord::math {

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::fabs(term) < 1e-16) break;
    sign = -sign;
  }
  return std::min(1.0, std::max(0.0, 2.0 * sum));
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::size_t na = a.size(), nb = b.size();
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < na && j < nb) {
    const double x = std::min(a[i], b[j]);
    while (i < na && a[i] <= x) ++i;
    while (j < nb && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = static_cast<double>(na) * nb / (na + nb);
  const double sq = std::sqrt(ne);
  KsResult r;
  r.statistic = d;
  r.p_value = kolmogorov_q((sq + 0.12 + 0.11 / sq) * d);
  return r;
}

KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(samples[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(std::fabs(f - lo), std::fabs(hi - f)));
  }
  const double sq = std::sqrt(static_cast<double>(n));
  KsResult r;
  r.statistic = d;
  r.p_value = kolmogorov_q((sq + 0.12 + 0.11 / sq) * d);
  return r;
}

double chi2_gof_pvalue(const std::vector<double>& observed,
                       const std::vector<double>& expected, int extra_constraints) {
  if (observed.size() != expected.size() || observed.empty())
    throw std::invalid_argument("chi2_gof_pvalue: size mismatch");
  double stat = 0.0;
  int bins = 0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    if (expected[k] <= 0.0) continue;
    const double diff = observed[k] - expected[k];
    stat += diff * diff / expected[k];
    ++bins;
  }
  const int df = bins - 1 - extra_constraints;
  if (df <= 0) throw std::invalid_argument("chi2_gof_pvalue: nonpositive df");
  return gamma_q(0.5 * df, 0.5 * stat);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean: empty");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  if (v.size() < 2) throw std::invalid_argument("variance: need >= 2 values");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile: empty");
  if (!(q >= 0.0) || !(q <= 1.0)) throw std::invalid_argument("quantile: q in [0,1]");
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

double pearson_corr(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("pearson_corr: bad sizes");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace pr2d2ord::math
