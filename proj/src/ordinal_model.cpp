#include "pr2d2ord/ordinal_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pr2d2ord/math/normal.hpp"

namespace pr2d2ord {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double latent_sd(double w) {
  if (!(w >= 0.0)) throw std::domain_error("W must be nonnegative");
  return std::sqrt(1.0 + w);
}

// log P(Y=k) for latent scale s: cut-points standardized to tau/s.
double log_category_prob_scaled(const CutPoints& tau, double shift, double s, int k) {
  const int K = tau.num_categories();
  if (k < 1 || k > K) throw std::invalid_argument("category index out of range");
  const double lo = (k == 1) ? kNegInf : (tau.tau[k - 2] - shift) / s;
  const double hi = (k == K) ? std::numeric_limits<double>::infinity()
                             : (tau.tau[k - 1] - shift) / s;
  if (k == 1) return math::log_norm_cdf(hi);
  if (k == K) return math::log_norm_cdf(-lo);
  return math::log_norm_cdf_diff(lo, hi);
}

std::vector<double> pmf_scaled(const CutPoints& tau, double shift, double s) {
  tau.validate();
  const int K = tau.num_categories();
  std::vector<double> pmf(static_cast<std::size_t>(K));
  double prev = 0.0;
  for (int k = 1; k < K; ++k) {
    const double cur = math::norm_cdf((tau.tau[k - 1] - shift) / s);
    pmf[k - 1] = std::max(0.0, cur - prev);
    prev = cur;
  }
  pmf[K - 1] = std::max(0.0, 1.0 - prev);
  return pmf;
}
}  // namespace

double phi_w_cdf(double t, double w) {
  if (!std::isfinite(t)) throw std::domain_error("phi_w_cdf: t must be finite");
  return math::norm_cdf(t / latent_sd(w));
}

double log_phi_w_cdf(double t, double w) {
  return math::log_norm_cdf(t / latent_sd(w));
}

double phi_w_pdf(double t, double w) {
  const double s = latent_sd(w);
  return math::norm_pdf(t / s) / s;
}

double log_phi_w_pdf(double t, double w) {
  const double s = latent_sd(w);
  return math::log_norm_pdf(t / s) - std::log(s);
}

double phi_w_quantile(double p, double w) {
  return latent_sd(w) * math::norm_quantile(p);
}

std::vector<double> category_pmf_given_eta(const CutPoints& tau, double eta) {
  return pmf_scaled(tau, eta, 1.0);
}

std::vector<double> category_pmf_given_w(const CutPoints& tau, double w) {
  return pmf_scaled(tau, 0.0, latent_sd(w));
}

double log_category_prob_given_eta(const CutPoints& tau, double eta, int k) {
  return log_category_prob_scaled(tau, eta, 1.0, k);
}

double log_category_prob_given_w(const CutPoints& tau, double w, int k) {
  return log_category_prob_scaled(tau, 0.0, latent_sd(w), k);
}

double log_likelihood_full(const std::vector<int>& y, const CutPoints& tau, double w) {
  if (y.empty()) return 0.0;
  tau.validate();
  const int K = tau.num_categories();
  std::vector<int> counts(static_cast<std::size_t>(K), 0);
  for (int yi : y) {
    if (yi < 1 || yi > K) throw std::invalid_argument("label out of {1..K}");
    ++counts[yi - 1];
  }
  double ll = 0.0;
  for (int k = 1; k <= K; ++k) {
    if (counts[k - 1] == 0) continue;
    const double lp = log_category_prob_given_w(tau, w, k);
    if (lp == kNegInf) return kNegInf;
    ll += counts[k - 1] * lp;
  }
  return ll;
}

double log_likelihood_null(const std::vector<int>& y, const CutPoints& tau) {
  return log_likelihood_full(y, tau, 0.0);
}

double mcfadden_r2(const std::vector<int>& y, const CutPoints& tau, double w) {
  if (y.empty()) throw std::invalid_argument("mcfadden_r2: needs n >= 1");
  const double ll0 = log_likelihood_null(y, tau);
  if (ll0 == 0.0)
    throw std::domain_error("mcfadden_r2: null log-likelihood is zero (undefined)");
  const double llm = log_likelihood_full(y, tau, w);
  return 1.0 - llm / ll0;
}

int bin_latent(const CutPoints& tau, double value) {
  const auto it = std::upper_bound(tau.tau.begin(), tau.tau.end(), value);
  return 1 + static_cast<int>(it - tau.tau.begin());
}

}  // namespace pr2d2ord
