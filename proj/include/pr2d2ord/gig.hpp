#pragma once

#include "pr2d2ord/rng.hpp"

namespace pr2d2ord {

/// Generalized inverse Gaussian parameters; density on x > 0 proportional to
/// x^{lambda-1} exp(-(rho*x + chi/x)/2).
struct GigParams {
  double lambda = 1.0;
  double rho = 1.0;
  double chi = 1.0;
  void validate() const;  // rho > 0, chi > 0
};

/// State of the two-block auxiliary chain whose W-marginal is GIG.
struct AuxState {
  double w = 1.0;
  double xi = 1.0;
};

/// log GIG density including the Bessel normalizer; -inf for x <= 0.
double gig_log_pdf(double x, const GigParams& p);

/// E[X] = sqrt(chi/rho) * K_{lambda+1}(sqrt(rho chi)) / K_lambda(sqrt(rho chi)).
double gig_mean(const GigParams& p);

/// argmax of the density: ((lambda-1) + sqrt((lambda-1)^2 + rho chi)) / rho.
double gig_mode(const GigParams& p);

/// Median via numeric CDF inversion (quadrature + bisection).
double gig_median(const GigParams& p);

/// Exact draw (Hormann-Leydold ratio-of-uniforms family).
double sample_gig(const GigParams& p, Rng& rng);

/// Inverse Gaussian with mean mu and shape parameter (Michael-Schucany-Haas).
double sample_inverse_gaussian(double mu, double shape, Rng& rng);

/// One full sweep of the auxiliary chain: xi | W ~ Gamma(lambda + 1/2, rate 1/W)
/// then W | xi ~ InvGauss(sqrt((chi + 2 xi)/rho), chi + 2 xi).
/// Requires lambda > -1/2; the stationary marginal of W is GIG(lambda, rho, chi).
AuxState gibbs_step_aux(const AuxState& state, const GigParams& p, Rng& rng);

}  // namespace pr2d2ord
