#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "pr2d2ord/nuts.hpp"
#include "pr2d2ord/posterior.hpp"
#include "pr2d2ord/types.hpp"

namespace pr2d2ord {

struct FitConfig {
  int chains = 4;
  int warmup = 1000;
  int draws = 2000;
  std::uint64_t seed = 0;
  bool parallel_chains = true;
  int max_depth = 10;
  double target_accept = 0.8;
};

/// Per-chain arrays of posterior draws on the constrained scale, with the
/// metadata needed for diagnostics and prediction.
struct PosteriorDraws {
  std::vector<std::string> names;
  std::vector<Eigen::MatrixXd> chains;  // each draws x names.size()
  int warmup = 0;
  std::uint64_t seed = 0;
  std::vector<NutsChainStats> chain_stats;
  int p = 0;
  int K = 0;
  PriorKind prior = PriorKind::Pr2d2ord;
  int beta_offset = 0;
  int tau_offset = 0;
  int phi_offset = -1;  // -1 when the prior has no phi block
  int w_offset = -1;
  bool divergence_warning = false;  // post-warmup divergence rate > 20%

  int num_chains() const { return static_cast<int>(chains.size()); }
  int draws_per_chain() const {
    return chains.empty() ? 0 : static_cast<int>(chains.front().rows());
  }
  int total_divergences() const;

  /// Pooled per-column statistics across all chains.
  Eigen::VectorXd pooled_mean() const;
  Eigen::VectorXd pooled_median() const;
  Eigen::VectorXd pooled_quantile(double q) const;
  std::vector<double> column(int col) const;  // pooled, chain-major
};

/// Run the adaptive HMC sampler. With n = 0 the draws are from the prior.
PosteriorDraws fit(const OrdinalDataset& data, const ModelSpec& spec, const FitConfig& cfg);

/// Predicted labels for new rows: eta = X beta_hat with the posterior-mean
/// beta and tau, binned by the cut-points with the usual sentinels.
std::vector<int> predict(const PosteriorDraws& draws, const Eigen::MatrixXd& X_new);

}  // namespace pr2d2ord
