#include "pr2d2ord/cutpoint_prior.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pr2d2ord/math/normal.hpp"
#include "pr2d2ord/ordinal_model.hpp"

namespace pr2d2ord {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kCumClamp = 1e-15;
}  // namespace

CategoryProbs pi_from_tau(const CutPoints& tau, double w) {
  CategoryProbs out;
  out.pi = category_pmf_given_w(tau, w);
  return out;
}

CutPoints tau_from_pi(const CategoryProbs& pi, double w) {
  pi.validate();
  if (!(w >= 0.0)) throw std::domain_error("tau_from_pi: W must be nonnegative");
  const std::size_t K = pi.pi.size();
  CutPoints out;
  out.tau.resize(K - 1);
  double cum = 0.0;
  for (std::size_t k = 0; k + 1 < K; ++k) {
    cum += pi.pi[k];
    const double c = std::min(1.0 - kCumClamp, std::max(kCumClamp, cum));
    out.tau[k] = phi_w_quantile(c, w);
  }
  if (!out.strictly_increasing())
    throw std::runtime_error("tau_from_pi: degenerate probabilities give tied cut-points");
  return out;
}

double log_density_tau(const CutPoints& tau, const DirichletConc& alpha, double w) {
  alpha.validate();
  if (!(w >= 0.0)) throw std::domain_error("log_density_tau: W must be nonnegative");
  const int K = static_cast<int>(alpha.alpha.size());
  if (tau.num_categories() != K)
    throw std::invalid_argument("log_density_tau: tau/alpha size mismatch");
  if (!tau.strictly_increasing()) return kNegInf;

  double a0 = 0.0;
  double lp = 0.0;
  for (int k = 1; k <= K; ++k) {
    const double ak = alpha.alpha[k - 1];
    a0 += ak;
    lp -= std::lgamma(ak);
    // stable log pi_k even when the probability underflows
    lp += (ak - 1.0) * log_category_prob_given_w(tau, w, k);
  }
  lp += std::lgamma(a0);

  // lower-bidiagonal Jacobian: |J| = prod_j phi_W(tau_j)
  for (double t : tau.tau) {
    lp += log_phi_w_pdf(t, w);
  }
  return lp;
}

std::vector<double> sample_dirichlet(const DirichletConc& alpha, Rng& rng) {
  alpha.validate();
  std::vector<double> g(alpha.alpha.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    g[k] = rng.gamma(alpha.alpha[k], 1.0);
    sum += g[k];
  }
  for (double& v : g) v /= sum;
  return g;
}

CutPoints sample_tau(const DirichletConc& alpha, double w, Rng& rng) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<double> pi = sample_dirichlet(alpha, rng);
    bool ok = true;
    for (double p : pi) {
      if (!(p > 0.0)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    CategoryProbs cp;
    cp.pi = std::move(pi);
    try {
      return tau_from_pi(cp, w);
    } catch (const std::runtime_error&) {
      // tied cut-points from an extreme draw; redraw
    }
  }
  throw std::runtime_error("sample_tau: 100 degenerate Dirichlet draws in a row");
}

}  // namespace pr2d2ord
