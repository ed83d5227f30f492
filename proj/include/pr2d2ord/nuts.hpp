#pragma once

#include <Eigen/Dense>
#include <functional>

#include "pr2d2ord/rng.hpp"

namespace pr2d2ord {

/// Target density for the sampler: returns log p and fills the gradient.
using LogDensityFn = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct NutsOptions {
  int max_depth = 10;
  double target_accept = 0.8;
  double divergence_threshold = 1000.0;  // drop in the joint log density
};

struct NutsChainStats {
  int divergences = 0;         // post-warmup
  double mean_accept = 0.0;    // post-warmup mean acceptance statistic
  double step_size = 0.0;      // adapted step size
  long n_leapfrog = 0;         // post-warmup leapfrog count
  double max_depth_hits = 0.0; // fraction of post-warmup draws hitting max depth
};

/// Multinomial no-U-turn sampler with dual-averaging step-size adaptation and
/// windowed diagonal mass-matrix estimation during warmup. Returns only the
/// post-warmup draws, one row per draw, on the unconstrained scale.
Eigen::MatrixXd nuts_sample(const LogDensityFn& logp_grad, const Eigen::VectorXd& init,
                            int warmup, int draws, Rng& rng, const NutsOptions& opts,
                            NutsChainStats& stats);

}  // namespace pr2d2ord
