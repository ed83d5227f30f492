#include "pr2d2ord/fit.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

#include "pr2d2ord/math/stats.hpp"
#include "pr2d2ord/ordinal_model.hpp"

namespace pr2d2ord {

int PosteriorDraws::total_divergences() const {
  int d = 0;
  for (const auto& s : chain_stats) d += s.divergences;
  return d;
}

std::vector<double> PosteriorDraws::column(int col) const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(num_chains()) * draws_per_chain());
  for (const auto& chain : chains) {
    for (Eigen::Index i = 0; i < chain.rows(); ++i) out.push_back(chain(i, col));
  }
  return out;
}

Eigen::VectorXd PosteriorDraws::pooled_mean() const {
  const int ncol = static_cast<int>(names.size());
  Eigen::VectorXd m = Eigen::VectorXd::Zero(ncol);
  long total = 0;
  for (const auto& chain : chains) {
    m += chain.colwise().sum().transpose();
    total += chain.rows();
  }
  return m / static_cast<double>(total);
}

Eigen::VectorXd PosteriorDraws::pooled_quantile(double q) const {
  const int ncol = static_cast<int>(names.size());
  Eigen::VectorXd out(ncol);
  for (int c = 0; c < ncol; ++c) out[c] = math::quantile(column(c), q);
  return out;
}

Eigen::VectorXd PosteriorDraws::pooled_median() const { return pooled_quantile(0.5); }

PosteriorDraws fit(const OrdinalDataset& data, const ModelSpec& spec, const FitConfig& cfg) {
  if (cfg.chains < 1) throw std::invalid_argument("fit: chains >= 1");
  if (cfg.draws < 1) throw std::invalid_argument("fit: draws >= 1");
  const PosteriorModel model(data, spec);

  NutsOptions opts;
  opts.max_depth = cfg.max_depth;
  opts.target_accept = cfg.target_accept;

  const LogDensityFn target = [&model](const Eigen::VectorXd& theta, Eigen::VectorXd& g) {
    return model.logp_grad(theta, g);
  };

  auto run_chain = [&](int chain_id) {
    Rng rng = Rng::derive(cfg.seed, {0xC4A1, static_cast<std::uint64_t>(chain_id)});
    // re-initialize around the data-informed point until density is finite
    Eigen::VectorXd init = model.initial_point();
    Eigen::VectorXd g;
    int tries = 0;
    while (!std::isfinite(model.logp_grad(init, g))) {
      if (++tries > 50)
        throw std::runtime_error("fit: could not find a finite starting point");
      init = model.initial_point();
      for (Eigen::Index i = 0; i < init.size(); ++i) init[i] += 0.5 * rng.normal();
    }
    NutsChainStats stats;
    Eigen::MatrixXd unc = nuts_sample(target, init, cfg.warmup, cfg.draws, rng, opts, stats);
    // constrain every draw
    Eigen::MatrixXd rows(cfg.draws, model.constrained_size());
    for (int i = 0; i < cfg.draws; ++i) {
      rows.row(i) = model.constrained_row(unc.row(i).transpose()).transpose();
    }
    return std::pair<Eigen::MatrixXd, NutsChainStats>{std::move(rows), stats};
  };

  std::vector<std::pair<Eigen::MatrixXd, NutsChainStats>> results(
      static_cast<std::size_t>(cfg.chains));
  if (cfg.parallel_chains && cfg.chains > 1) {
    std::vector<std::future<std::pair<Eigen::MatrixXd, NutsChainStats>>> futs;
    futs.reserve(static_cast<std::size_t>(cfg.chains));
    for (int c = 0; c < cfg.chains; ++c)
      futs.push_back(std::async(std::launch::async, run_chain, c));
    for (int c = 0; c < cfg.chains; ++c) results[static_cast<std::size_t>(c)] = futs[c].get();
  } else {
    for (int c = 0; c < cfg.chains; ++c) results[static_cast<std::size_t>(c)] = run_chain(c);
  }

  PosteriorDraws out;
  out.names = model.constrained_names();
  out.warmup = cfg.warmup;
  out.seed = cfg.seed;
  out.p = model.p();
  out.K = spec.K;
  out.prior = spec.prior;
  out.beta_offset = model.row_beta_offset();
  out.tau_offset = model.row_tau_offset();
  out.phi_offset = model.row_phi_offset();
  out.w_offset = model.row_w_offset();
  long total_draws = 0;
  int total_div = 0;
  for (auto& r : results) {
    total_draws += r.first.rows();
    total_div += r.second.divergences;
    out.chains.push_back(std::move(r.first));
    out.chain_stats.push_back(r.second);
  }
  out.divergence_warning =
      total_draws > 0 && total_div > 0.2 * static_cast<double>(total_draws);
  return out;
}

std::vector<int> predict(const PosteriorDraws& draws, const Eigen::MatrixXd& X_new) {
  if (static_cast<int>(X_new.cols()) != draws.p)
    throw std::invalid_argument("predict: column count does not match fitted p");
  const Eigen::VectorXd mean = draws.pooled_mean();
  const Eigen::VectorXd beta_hat = mean.segment(draws.beta_offset, draws.p);
  CutPoints tau_hat;
  tau_hat.tau.resize(static_cast<std::size_t>(draws.K - 1));
  for (int k = 0; k < draws.K - 1; ++k)
    tau_hat.tau[static_cast<std::size_t>(k)] = mean[draws.tau_offset + k];
  tau_hat.validate();

  const Eigen::VectorXd eta = X_new * beta_hat;
  std::vector<int> y_hat(static_cast<std::size_t>(X_new.rows()));
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    y_hat[static_cast<std::size_t>(i)] = bin_latent(tau_hat, eta[i]);
  }
  return y_hat;
}

}  // namespace pr2d2ord
