#pragma once

#include <vector>

namespace pr2d2ord::math {

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b).
double inc_beta(double a, double b, double x);

/// Inverse of inc_beta in x: smallest x with I_x(a,b) = p.
double inc_beta_inv(double a, double b, double p);

double beta_pdf(double x, double a, double b);
double beta_cdf(double x, double a, double b);
double beta_quantile(double p, double a, double b);

double gamma_cdf(double x, double shape, double rate);

/// log density of Dirichlet(alpha) at a point on the open simplex.
double dirichlet_log_pdf(const std::vector<double>& x, const std::vector<double>& alpha);

}  // namespace pr2d2ord::math
