#pragma once

namespace pr2d2ord::math {

/// Standard normal density.
double norm_pdf(double x);
double log_norm_pdf(double x);

/// Standard normal distribution function, full relative accuracy in both
/// tails (erfc-based).
double norm_cdf(double x);

/// log Phi(x). Uses erfc directly for x > -8 and the Laplace continued
/// fraction for the Mills ratio in the deep left tail, so the result stays
/// accurate long after Phi(x) underflows.
double log_norm_cdf(double x);

/// Inverse of norm_cdf on (0, 1). Acklam's initial estimate plus one Halley
/// refinement; absolute accuracy near machine precision.
double norm_quantile(double p);

/// log(Phi(b) - Phi(a)) for a < b, computed from the log-CDFs of whichever
/// tail keeps the difference well conditioned.
double log_norm_cdf_diff(double a, double b);

}  // namespace pr2d2ord::math
