#pragma once

#include <functional>
#include <vector>

namespace pr2d2ord::math {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Kolmogorov distribution tail Q_KS(lambda) = 2 * sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

/// Two-sample Kolmogorov-Smirnov test (asymptotic p-value).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// One-sample KS test against a continuous CDF.
KsResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Chi-square goodness of fit: observed counts vs expected counts.
/// Degrees of freedom = #bins - 1 - extra_constraints.
double chi2_gof_pvalue(const std::vector<double>& observed,
                       const std::vector<double>& expected,
                       int extra_constraints = 0);

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);  // unbiased (n-1)

/// Type-7 (linear interpolation) sample quantile on unsorted data.
double quantile(std::vector<double> v, double q);

/// Spearman-free simple rank correlation helper used in monotonicity checks.
double pearson_corr(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace pr2d2ord::math
