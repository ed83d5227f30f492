#include "pr2d2ord/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "pr2d2ord/math/normal.hpp"

namespace pr2d2ord {

namespace {

std::vector<std::vector<double>> split_chains(const std::vector<std::vector<double>>& chains) {
  std::vector<std::vector<double>> out;
  std::size_t n = std::numeric_limits<std::size_t>::max();
  for (const auto& c : chains) n = std::min(n, c.size());
  const std::size_t half = n / 2;
  for (const auto& c : chains) {
    out.emplace_back(c.begin(), c.begin() + half);
    out.emplace_back(c.end() - static_cast<std::ptrdiff_t>(half), c.end());
  }
  return out;
}

// pooled average ranks -> Blom normal scores
std::vector<std::vector<double>> rank_normalize(const std::vector<std::vector<double>>& chains) {
  struct Entry {
    double value;
    std::size_t chain, pos;
  };
  std::vector<Entry> all;
  for (std::size_t c = 0; c < chains.size(); ++c) {
    for (std::size_t i = 0; i < chains[c].size(); ++i) all.push_back({chains[c][i], c, i});
  }
  std::sort(all.begin(), all.end(),
            [](const Entry& a, const Entry& b) { return a.value < b.value; });
  const double S = static_cast<double>(all.size());
  std::vector<std::vector<double>> out(chains.size());
  for (std::size_t c = 0; c < chains.size(); ++c) out[c].resize(chains[c].size());
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j + 1 < all.size() && all[j + 1].value == all[i].value) ++j;
    const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
    const double z = math::norm_quantile((avg_rank - 0.375) / (S + 0.25));
    for (std::size_t k = i; k <= j; ++k) out[all[k].chain][all[k].pos] = z;
    i = j + 1;
  }
  return out;
}

struct VarParts {
  double w = 0.0;         // mean within-chain variance
  double var_plus = 0.0;  // marginal posterior variance estimate
  std::vector<double> chain_means;
  std::size_t n = 0;
};

VarParts variance_parts(const std::vector<std::vector<double>>& chains) {
  VarParts vp;
  const std::size_t m = chains.size();
  vp.n = chains.front().size();
  const double n = static_cast<double>(vp.n);
  double w = 0.0;
  for (const auto& c : chains) {
    double mean = std::accumulate(c.begin(), c.end(), 0.0) / n;
    vp.chain_means.push_back(mean);
    double s = 0.0;
    for (double x : c) s += (x - mean) * (x - mean);
    w += s / (n - 1.0);
  }
  vp.w = w / static_cast<double>(m);
  double grand = std::accumulate(vp.chain_means.begin(), vp.chain_means.end(), 0.0) /
                 static_cast<double>(m);
  double b_over_n = 0.0;
  for (double mu : vp.chain_means) b_over_n += (mu - grand) * (mu - grand);
  b_over_n /= static_cast<double>(m - 1);  // = B/n
  vp.var_plus = (n - 1.0) / n * vp.w + b_over_n;
  return vp;
}

// biased autocovariance at the requested lag
double autocov(const std::vector<double>& x, double mean, std::size_t lag) {
  double s = 0.0;
  for (std::size_t i = 0; i + lag < x.size(); ++i) {
    s += (x[i] - mean) * (x[i + lag] - mean);
  }
  return s / static_cast<double>(x.size());
}

double ess_from_chains(const std::vector<std::vector<double>>& chains) {
  const std::size_t m = chains.size();
  const VarParts vp = variance_parts(chains);
  if (!(vp.var_plus > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t n = vp.n;

  auto rho = [&](std::size_t t) {
    double acov_t = 0.0;
    for (std::size_t c = 0; c < m; ++c) acov_t += autocov(chains[c], vp.chain_means[c], t);
    acov_t /= static_cast<double>(m);
    return 1.0 - (vp.w - acov_t) / vp.var_plus;
  };

  // Geyer initial monotone positive sequence on pairs (rho_2k, rho_2k+1):
  // tau = -1 + 2 * sum of pair sums
  double sum_pairs = 0.0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t + 1 < n; t += 2) {
    double pair = rho(t) + rho(t + 1);
    if (pair < 0.0) break;
    pair = std::min(pair, prev_pair);
    prev_pair = pair;
    sum_pairs += pair;
  }
  double tau = -1.0 + 2.0 * sum_pairs;
  tau = std::max(tau, 1.0 / std::log10(static_cast<double>(n * m) + 10.0));
  return static_cast<double>(n * m) / tau;
}
}  // namespace

double rank_normalized_split_rhat(const std::vector<std::vector<double>>& chains) {
  if (chains.size() < 2) throw std::invalid_argument("rhat: needs >= 2 chains");
  const auto split = split_chains(chains);
  if (split.front().size() < 2) throw std::invalid_argument("rhat: needs >= 4 draws");
  const auto z = rank_normalize(split);
  const VarParts vp = variance_parts(z);
  if (!(vp.w > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(vp.var_plus / vp.w);
}

double bulk_ess(const std::vector<std::vector<double>>& chains) {
  if (chains.size() < 2) throw std::invalid_argument("ess: needs >= 2 chains");
  const auto split = split_chains(chains);
  if (split.front().size() < 2) throw std::invalid_argument("ess: needs >= 4 draws");
  return ess_from_chains(rank_normalize(split));
}

double ess_single_sequence(const std::vector<double>& x) {
  if (x.size() < 8) throw std::invalid_argument("ess_single_sequence: too short");
  return ess_from_chains({x});
}

double Diagnostics::max_rhat() const {
  double m = 0.0;
  for (double r : rhat) {
    if (std::isfinite(r)) m = std::max(m, r);
  }
  return m;
}

double Diagnostics::min_ess() const {
  double m = std::numeric_limits<double>::infinity();
  for (double e : ess) {
    if (std::isfinite(e)) m = std::min(m, e);
  }
  return m;
}

Diagnostics diagnose(const PosteriorDraws& draws) {
  if (draws.num_chains() < 2) throw std::invalid_argument("diagnose: needs >= 2 chains");
  if (draws.draws_per_chain() < 4)
    throw std::invalid_argument("diagnose: needs >= 4 draws per chain");
  Diagnostics d;
  d.names = draws.names;
  const int ncol = static_cast<int>(draws.names.size());
  for (int c = 0; c < ncol; ++c) {
    std::vector<std::vector<double>> chains;
    chains.reserve(static_cast<std::size_t>(draws.num_chains()));
    for (const auto& chain : draws.chains) {
      std::vector<double> v(static_cast<std::size_t>(chain.rows()));
      for (Eigen::Index i = 0; i < chain.rows(); ++i) v[static_cast<std::size_t>(i)] = chain(i, c);
      chains.push_back(std::move(v));
    }
    d.rhat.push_back(rank_normalized_split_rhat(chains));
    d.ess.push_back(bulk_ess(chains));
  }
  return d;
}

}  // namespace pr2d2ord
