#pragma once

#include <vector>

#include "pr2d2ord/types.hpp"

namespace pr2d2ord {

/// Phi_W: distribution function of Normal(0, 1 + W), W >= 0.
double phi_w_cdf(double t, double w);
double log_phi_w_cdf(double t, double w);
/// Density of Normal(0, 1 + W).
double phi_w_pdf(double t, double w);
double log_phi_w_pdf(double t, double w);
/// Quantile of Normal(0, 1 + W).
double phi_w_quantile(double p, double w);

/// P(Y = k | eta, tau) for k = 1..K, probit link with unit latent variance.
std::vector<double> category_pmf_given_eta(const CutPoints& tau, double eta);

/// P(Y = k | W, tau), latent variance 1 + W (eta marginalized out).
std::vector<double> category_pmf_given_w(const CutPoints& tau, double w);

/// log P(Y = k | eta, tau), stable deep into both tails (k is 1-based).
double log_category_prob_given_eta(const CutPoints& tau, double eta, int k);
double log_category_prob_given_w(const CutPoints& tau, double w, int k);

/// Joint log-likelihood of the full model (latent variance 1 + W).
/// Returns -inf if any observed category has zero probability; 0 when n = 0.
double log_likelihood_full(const std::vector<int>& y, const CutPoints& tau, double w);

/// Null (W = 0, intercept-only) log-likelihood.
double log_likelihood_null(const std::vector<int>& y, const CutPoints& tau);

/// McFadden's pseudo-R^2: 1 - log L_M / log L_0. Exactly 0 at W = 0.
double mcfadden_r2(const std::vector<int>& y, const CutPoints& tau, double w);

/// Bin a latent value: returns k with tau_{k-1} <= value < tau_k.
int bin_latent(const CutPoints& tau, double value);

}  // namespace pr2d2ord
