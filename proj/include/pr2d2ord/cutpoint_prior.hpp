#pragma once

#include <vector>

#include "pr2d2ord/rng.hpp"
#include "pr2d2ord/types.hpp"

namespace pr2d2ord {

/// Category probabilities induced by cut-points under latent variance 1 + W.
CategoryProbs pi_from_tau(const CutPoints& tau, double w);

/// Inverse map: cut-points whose induced probabilities equal pi. Cumulative
/// sums are clamped into [1e-15, 1 - 1e-15] before the normal quantile.
CutPoints tau_from_pi(const CategoryProbs& pi, double w);

/// log of the Dirichlet-induced cut-point density f(tau | W, alpha):
/// log d(pi(tau); alpha) + sum_j log phi_W(tau_j). Returns -inf when tau is
/// not strictly increasing.
double log_density_tau(const CutPoints& tau, const DirichletConc& alpha, double w);

/// Draw tau by sampling pi ~ Dirichlet(alpha) and applying tau_from_pi.
/// Degenerate draws are retried up to 100 times.
CutPoints sample_tau(const DirichletConc& alpha, double w, Rng& rng);

/// Dirichlet draw via normalized independent Gamma variates.
std::vector<double> sample_dirichlet(const DirichletConc& alpha, Rng& rng);

}  // namespace pr2d2ord
