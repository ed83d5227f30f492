#pragma once

#include <string>
#include <vector>

#include "pr2d2ord/fit.hpp"

namespace pr2d2ord {

struct Diagnostics {
  std::vector<std::string> names;
  std::vector<double> rhat;  // rank-normalized split R-hat
  std::vector<double> ess;   // bulk effective sample size
  double max_rhat() const;
  double min_ess() const;
};

/// Per-parameter convergence diagnostics. Requires >= 2 chains with >= 4
/// draws each.
Diagnostics diagnose(const PosteriorDraws& draws);

/// Rank-normalized split R-hat for one parameter across chains.
double rank_normalized_split_rhat(const std::vector<std::vector<double>>& chains);

/// Bulk ESS (rank-normalized, split chains, Geyer initial monotone sequence).
double bulk_ess(const std::vector<std::vector<double>>& chains);

/// Autocorrelation-time ESS of a single sequence (no rank normalization);
/// used for Monte-Carlo standard errors of plain chains.
double ess_single_sequence(const std::vector<double>& x);

}  // namespace pr2d2ord
