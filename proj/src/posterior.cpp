#include "pr2d2ord/posterior.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pr2d2ord/cutpoint_prior.hpp"
#include "pr2d2ord/math/bessel.hpp"
#include "pr2d2ord/math/normal.hpp"
#include "pr2d2ord/math/special.hpp"
#include "pr2d2ord/ordinal_model.hpp"
#include "pr2d2ord/transforms.hpp"

namespace pr2d2ord {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454835606594728112353;

// log(Phi(hi) - Phi(lo)) with the pdf/mass ratios needed for gradients.
// lo = -inf for the first category, hi = +inf for the last.
struct IntervalProb {
  double log_mass;
  double ratio_lo;  // phi(lo) / mass (0 when lo = -inf)
  double ratio_hi;  // phi(hi) / mass (0 when hi = +inf)
};

IntervalProb interval_prob(double lo, double hi) {
  IntervalProb r{kNegInf, 0.0, 0.0};
  const bool lo_inf = std::isinf(lo) && lo < 0.0;
  const bool hi_inf = std::isinf(hi) && hi > 0.0;
  if (lo_inf && hi_inf) {
    r.log_mass = 0.0;
    return r;
  }
  if (lo_inf) {
    r.log_mass = math::log_norm_cdf(hi);
  } else if (hi_inf) {
    r.log_mass = math::log_norm_cdf(-lo);
  } else {
    r.log_mass = math::log_norm_cdf_diff(lo, hi);
  }
  if (r.log_mass == kNegInf) return r;
  if (!lo_inf) r.ratio_lo = std::exp(math::log_norm_pdf(lo) - r.log_mass);
  if (!hi_inf) r.ratio_hi = std::exp(math::log_norm_pdf(hi) - r.log_mass);
  return r;
}
}  // namespace

ModelSpec ModelSpec::pr2d2ord(int K, const GigParams& gig, const DirichletConc& alpha,
                              double xi0) {
  ModelSpec s;
  s.prior = PriorKind::Pr2d2ord;
  s.K = K;
  s.gig = gig;
  s.alpha = alpha;
  s.xi0 = xi0;
  s.cut_prior = CutPrior::DirichletInduced;
  return s;
}

ModelSpec ModelSpec::horseshoe(int K, double cut_tau0_sq) {
  ModelSpec s;
  s.prior = PriorKind::Horseshoe;
  s.K = K;
  s.cut_tau0_sq = cut_tau0_sq;
  s.cut_prior = CutPrior::SortedNormal;
  return s;
}

ModelSpec ModelSpec::r2d2_beta_prime(int K, double a, double b, const DirichletConc& alpha,
                                     double xi0) {
  ModelSpec s;
  s.prior = PriorKind::R2d2BetaPrime;
  s.K = K;
  s.bp_a = a;
  s.bp_b = b;
  s.alpha = alpha;
  s.xi0 = xi0;
  s.cut_prior = CutPrior::DirichletInduced;
  return s;
}

void ModelSpec::validate() const {
  if (K < 2) throw std::invalid_argument("ModelSpec: K >= 2 required");
  if (prior == PriorKind::Pr2d2ord) gig.validate();
  if (prior == PriorKind::R2d2BetaPrime) {
    if (!(bp_a > 0.0) || !(bp_b > 0.0))
      throw std::invalid_argument("ModelSpec: beta-prime parameters must be positive");
  }
  if (prior != PriorKind::Horseshoe && !(xi0 > 0.0))
    throw std::invalid_argument("ModelSpec: xi0 must be positive");
  if (cut_prior == CutPrior::DirichletInduced) {
    alpha.validate();
    if (static_cast<int>(alpha.alpha.size()) != K)
      throw std::invalid_argument("ModelSpec: alpha must have K entries");
  } else if (!(cut_tau0_sq > 0.0)) {
    throw std::invalid_argument("ModelSpec: cut_tau0_sq must be positive");
  }
}

PosteriorModel::PosteriorModel(OrdinalDataset data, ModelSpec spec)
    : data_(std::move(data)), spec_(std::move(spec)) {
  spec_.validate();
  data_.validate();
  if (data_.K != spec_.K)
    throw std::invalid_argument("PosteriorModel: data K and spec K disagree");
  p_ = data_.p();
  if (p_ < 1) throw std::invalid_argument("PosteriorModel: needs p >= 1 covariates");
  const int K = spec_.K;

  off_beta_ = 0;
  if (spec_.prior == PriorKind::Horseshoe) {
    off_hs_l_ = p_;
    off_hs_nu_ = 2 * p_;
    off_hs_tg_ = 3 * p_;
    off_hs_xi_ = 3 * p_ + 1;
    off_tau_ = 3 * p_ + 2;
    dim_ = off_tau_ + (K - 1);
  } else {
    off_phi_ = p_;
    off_w_ = p_ + (p_ - 1);
    off_tau_ = off_w_ + 1;
    dim_ = off_tau_ + (K - 1);
  }

  if (spec_.prior == PriorKind::Pr2d2ord) {
    const double omega = std::sqrt(spec_.gig.rho * spec_.gig.chi);
    gig_log_norm_ = 0.5 * spec_.gig.lambda * (std::log(spec_.gig.rho) - std::log(spec_.gig.chi)) -
                    std::log(2.0) - math::bessel_k_log(spec_.gig.lambda, omega);
  }
  if (spec_.prior == PriorKind::R2d2BetaPrime) {
    bp_log_norm_ = -math::log_beta(spec_.bp_a, spec_.bp_b);
  }
  if (spec_.prior != PriorKind::Horseshoe) {
    dir_phi_log_norm_ =
        std::lgamma(p_ * spec_.xi0) - p_ * std::lgamma(spec_.xi0);
  }
  if (spec_.cut_prior == CutPrior::DirichletInduced) {
    double a0 = 0.0, lg = 0.0;
    for (double a : spec_.alpha.alpha) {
      a0 += a;
      lg += std::lgamma(a);
    }
    dir_tau_log_norm_ = std::lgamma(a0) - lg;
  }
}

double PosteriorModel::logp_grad(const Eigen::VectorXd& theta, Eigen::VectorXd& grad) const {
  grad = Eigen::VectorXd::Zero(dim_);
  if (theta.size() != dim_)
    throw std::invalid_argument("logp_grad: theta has wrong dimension");
  if (!theta.allFinite()) return kNegInf;

  const int K = spec_.K;
  const int n = data_.n();
  double lp = 0.0;

  // --- common blocks: beta and tau -------------------------------------
  const Eigen::VectorXd beta = theta.segment(off_beta_, p_);
  const Eigen::VectorXd t_tau = theta.segment(off_tau_, K - 1);
  Eigen::VectorXd tau;
  double tau_log_jac = 0.0;
  OrderedVector::forward(t_tau, tau, tau_log_jac);
  if (!tau.allFinite()) return kNegInf;
  lp += tau_log_jac;
  Eigen::VectorXd g_beta = Eigen::VectorXd::Zero(p_);
  Eigen::VectorXd g_tau = Eigen::VectorXd::Zero(K - 1);

  // --- likelihood (Eq. 4 probit, unit latent variance) -----------------
  if (n > 0) {
    const Eigen::VectorXd eta = data_.X * beta;
    Eigen::VectorXd g_eta(n);
    for (int i = 0; i < n; ++i) {
      const int k = data_.y[static_cast<std::size_t>(i)];
      const double lo = (k == 1) ? kNegInf : tau[k - 2] - eta[i];
      const double hi = (k == K) ? std::numeric_limits<double>::infinity()
                                 : tau[k - 1] - eta[i];
      const IntervalProb ip = interval_prob(lo, hi);
      if (ip.log_mass == kNegInf) {
        grad.setZero();
        return kNegInf;
      }
      lp += ip.log_mass;
      g_eta[i] = ip.ratio_lo - ip.ratio_hi;
      if (k > 1) g_tau[k - 2] -= ip.ratio_lo;
      if (k < K) g_tau[k - 1] += ip.ratio_hi;
    }
    g_beta.noalias() += data_.X.transpose() * g_eta;
  }

  // --- prior on (beta | scales) and the scale hierarchy ----------------
  if (spec_.prior == PriorKind::Horseshoe) {
    const Eigen::VectorXd u_l = theta.segment(off_hs_l_, p_);   // log lambda_j^2
    const Eigen::VectorXd v_nu = theta.segment(off_hs_nu_, p_); // log nu_j
    const double w1 = theta[off_hs_tg_];                        // log tau_g^2
    const double w2 = theta[off_hs_xi_];                        // log xi
    double g_w1 = 0.0, g_w2 = 0.0;
    for (int j = 0; j < p_; ++j) {
      const double var = std::exp(u_l[j] + w1);
      const double b2 = beta[j] * beta[j];
      // beta_j ~ N(0, lambda_j^2 tau_g^2)
      lp += -0.5 * kLog2Pi - 0.5 * (u_l[j] + w1) - 0.5 * b2 / var;
      g_beta[j] += -beta[j] / var;
      const double s_term = -0.5 + 0.5 * b2 / var;
      grad[off_hs_l_ + j] += s_term;
      g_w1 += s_term;
      // lambda_j^2 | nu_j ~ InvGamma(1/2, 1/nu_j), in log space
      const double e_lu = std::exp(-v_nu[j] - u_l[j]);
      lp += -0.5 * v_nu[j] - 0.5 * u_l[j] - e_lu - std::lgamma(0.5);
      grad[off_hs_l_ + j] += -0.5 + e_lu;
      grad[off_hs_nu_ + j] += -0.5 + e_lu;
      // nu_j ~ InvGamma(1/2, 1), in log space
      const double e_v = std::exp(-v_nu[j]);
      lp += -0.5 * v_nu[j] - e_v - std::lgamma(0.5);
      grad[off_hs_nu_ + j] += -0.5 + e_v;
    }
    grad[off_hs_tg_] += g_w1;
    // tau_g^2 | xi ~ InvGamma(1/2, 1/xi); xi ~ InvGamma(1/2, 1)
    const double e_tw = std::exp(-w2 - w1);
    lp += -0.5 * w2 - 0.5 * w1 - e_tw - std::lgamma(0.5);
    grad[off_hs_tg_] += -0.5 + e_tw;
    g_w2 += -0.5 + e_tw;
    const double e_w2 = std::exp(-w2);
    lp += -0.5 * w2 - e_w2 - std::lgamma(0.5);
    g_w2 += -0.5 + e_w2;
    grad[off_hs_xi_] += g_w2;
  } else {
    // phi via stick-breaking, W on the log scale
    const Eigen::VectorXd u_phi = theta.segment(off_phi_, p_ - 1);
    Eigen::VectorXd phi, sticks, z;
    double sb_log_jac = 0.0;
    StickBreaking::forward(u_phi, phi, sticks, z, sb_log_jac);
    if (!phi.allFinite() || phi.minCoeff() <= 0.0) return kNegInf;
    lp += sb_log_jac;

    const double vw = theta[off_w_];
    const double w = std::exp(vw);
    if (!std::isfinite(w) || w <= 0.0) return kNegInf;
    double g_w = 0.0;  // d/dW, converted to d/dvw at the end

    Eigen::VectorXd g_phi = Eigen::VectorXd::Zero(p_);
    for (int j = 0; j < p_; ++j) {
      const double var = phi[j] * w;
      const double b2 = beta[j] * beta[j];
      lp += -0.5 * kLog2Pi - 0.5 * std::log(var) - 0.5 * b2 / var;
      g_beta[j] += -beta[j] / var;
      g_phi[j] += -0.5 / phi[j] + 0.5 * b2 / (phi[j] * phi[j] * w);
      g_w += -0.5 / w + 0.5 * b2 / (phi[j] * w * w);
    }
    // phi ~ Dirichlet(xi0, ..., xi0)
    lp += dir_phi_log_norm_;
    for (int j = 0; j < p_; ++j) {
      lp += (spec_.xi0 - 1.0) * std::log(phi[j]);
      g_phi[j] += (spec_.xi0 - 1.0) / phi[j];
    }
    grad.segment(off_phi_, p_ - 1) = StickBreaking::backward(phi, sticks, z, g_phi, true);

    // W prior
    if (spec_.prior == PriorKind::Pr2d2ord) {
      lp += gig_log_norm_ + (spec_.gig.lambda - 1.0) * vw -
            0.5 * (spec_.gig.rho * w + spec_.gig.chi / w);
      g_w += (spec_.gig.lambda - 1.0) / w - 0.5 * spec_.gig.rho +
             0.5 * spec_.gig.chi / (w * w);
    } else {
      // W ~ BetaPrime(a, b)
      lp += bp_log_norm_ + (spec_.bp_a - 1.0) * vw -
            (spec_.bp_a + spec_.bp_b) * std::log1p(w);
      g_w += (spec_.bp_a - 1.0) / w - (spec_.bp_a + spec_.bp_b) / (1.0 + w);
    }

    // cut-point prior conditional on W (Eq. 8) contributes to g_w too
    if (spec_.cut_prior == CutPrior::DirichletInduced) {
      const double s2 = 1.0 + w;
      const double s = std::sqrt(s2);
      Eigen::VectorXd c = tau / s;
      Eigen::VectorXd g_c = Eigen::VectorXd::Zero(K - 1);
      lp += dir_tau_log_norm_;
      for (int k = 1; k <= K; ++k) {
        const double ak = spec_.alpha.alpha[static_cast<std::size_t>(k - 1)];
        const double lo = (k == 1) ? kNegInf : c[k - 2];
        const double hi = (k == K) ? std::numeric_limits<double>::infinity() : c[k - 1];
        const IntervalProb ip = interval_prob(lo, hi);
        if (ip.log_mass == kNegInf) {
          grad.setZero();
          return kNegInf;
        }
        lp += (ak - 1.0) * ip.log_mass;
        if (k > 1) g_c[k - 2] -= (ak - 1.0) * ip.ratio_lo;
        if (k < K) g_c[k - 1] += (ak - 1.0) * ip.ratio_hi;
      }
      // Jacobian of Eq. (8): sum_j log phi_W(tau_j)
      for (int j = 0; j < K - 1; ++j) {
        lp += -0.5 * kLog2Pi - 0.5 * std::log(s2) - 0.5 * c[j] * c[j];
        g_tau[j] += -c[j] / s;
        g_w += (c[j] * c[j] - 1.0) / (2.0 * s2);
      }
      for (int j = 0; j < K - 1; ++j) {
        g_tau[j] += g_c[j] / s;
        g_w += g_c[j] * (-c[j] / (2.0 * s2));
      }
    } else {
      for (int j = 0; j < K - 1; ++j) {
        lp += -0.5 * kLog2Pi - 0.5 * std::log(spec_.cut_tau0_sq) -
              0.5 * tau[j] * tau[j] / spec_.cut_tau0_sq;
        g_tau[j] += -tau[j] / spec_.cut_tau0_sq;
      }
    }

    grad[off_w_] = g_w * w + 1.0;  // chain rule through W = e^{vw} plus its Jacobian
    lp += vw;                      // log-transform Jacobian
  }

  // horseshoe uses the sorted-normal cut-point prior
  if (spec_.prior == PriorKind::Horseshoe) {
    if (spec_.cut_prior == CutPrior::DirichletInduced)
      throw std::logic_error("horseshoe requires the sorted-normal cut-point prior");
    for (int j = 0; j < K - 1; ++j) {
      lp += -0.5 * kLog2Pi - 0.5 * std::log(spec_.cut_tau0_sq) -
            0.5 * tau[j] * tau[j] / spec_.cut_tau0_sq;
      g_tau[j] += -tau[j] / spec_.cut_tau0_sq;
    }
  }

  grad.segment(off_beta_, p_) = g_beta;
  grad.segment(off_tau_, K - 1) = OrderedVector::backward(t_tau, g_tau, true);
  if (!std::isfinite(lp)) {
    grad.setZero();
    return kNegInf;
  }
  return lp;
}

double PosteriorModel::logp(const Eigen::VectorXd& theta) const {
  Eigen::VectorXd g;
  return logp_grad(theta, g);
}

ConstrainedDraw PosteriorModel::constrain(const Eigen::VectorXd& theta) const {
  ConstrainedDraw d;
  d.beta = theta.segment(off_beta_, p_);
  const int K = spec_.K;
  Eigen::VectorXd tau;
  double lj = 0.0;
  OrderedVector::forward(theta.segment(off_tau_, K - 1), tau, lj);
  d.tau = tau;
  if (spec_.prior == PriorKind::Horseshoe) {
    d.scales.resize(2 * p_ + 2);
    for (int j = 0; j < p_; ++j) d.scales[j] = std::exp(theta[off_hs_l_ + j]);
    for (int j = 0; j < p_; ++j) d.scales[p_ + j] = std::exp(theta[off_hs_nu_ + j]);
    d.scales[2 * p_] = std::exp(theta[off_hs_tg_]);
    d.scales[2 * p_ + 1] = std::exp(theta[off_hs_xi_]);
  } else {
    Eigen::VectorXd phi, sticks, z;
    double sb = 0.0;
    StickBreaking::forward(theta.segment(off_phi_, p_ - 1), phi, sticks, z, sb);
    d.phi = phi;
    d.w = std::exp(theta[off_w_]);
  }
  return d;
}

Eigen::VectorXd PosteriorModel::unconstrain(const ConstrainedDraw& draw) const {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim_);
  theta.segment(off_beta_, p_) = draw.beta;
  theta.segment(off_tau_, spec_.K - 1) = OrderedVector::inverse(draw.tau);
  if (spec_.prior == PriorKind::Horseshoe) {
    for (int j = 0; j < p_; ++j) theta[off_hs_l_ + j] = std::log(draw.scales[j]);
    for (int j = 0; j < p_; ++j) theta[off_hs_nu_ + j] = std::log(draw.scales[p_ + j]);
    theta[off_hs_tg_] = std::log(draw.scales[2 * p_]);
    theta[off_hs_xi_] = std::log(draw.scales[2 * p_ + 1]);
  } else {
    theta.segment(off_phi_, p_ - 1) = StickBreaking::inverse(draw.phi);
    theta[off_w_] = std::log(draw.w);
  }
  return theta;
}

Eigen::VectorXd PosteriorModel::initial_point() const {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim_);
  const int K = spec_.K;

  // W at the prior median
  if (spec_.prior == PriorKind::Pr2d2ord) {
    theta[off_w_] = std::log(gig_median(spec_.gig));
  } else if (spec_.prior == PriorKind::R2d2BetaPrime) {
    const double m = math::inc_beta_inv(spec_.bp_a, spec_.bp_b, 0.5);
    theta[off_w_] = std::log(m / (1.0 - m));
  }

  // tau from smoothed empirical response frequencies on the latent scale
  CategoryProbs freq;
  freq.pi.assign(static_cast<std::size_t>(K), 0.0);
  for (int yi : data_.y) freq.pi[static_cast<std::size_t>(yi - 1)] += 1.0;
  const double denom = static_cast<double>(data_.n()) + 0.5 * K;
  for (double& f : freq.pi) f = (f + 0.5) / denom;
  const CutPoints tau0 = tau_from_pi(freq, 0.0);
  theta.segment(off_tau_, K - 1) =
      OrderedVector::inverse(Eigen::Map<const Eigen::VectorXd>(tau0.tau.data(), K - 1));
  return theta;
}

std::vector<std::string> PosteriorModel::constrained_names() const {
  std::vector<std::string> names;
  for (int j = 1; j <= p_; ++j) names.push_back("beta." + std::to_string(j));
  if (spec_.prior == PriorKind::Horseshoe) {
    for (int j = 1; j <= p_; ++j) names.push_back("lambda2." + std::to_string(j));
    for (int j = 1; j <= p_; ++j) names.push_back("nu." + std::to_string(j));
    names.push_back("tau_g2");
    names.push_back("xi");
  } else {
    for (int j = 1; j <= p_; ++j) names.push_back("phi." + std::to_string(j));
    names.push_back("W");
  }
  for (int k = 1; k < spec_.K; ++k) names.push_back("tau." + std::to_string(k));
  return names;
}

int PosteriorModel::constrained_size() const {
  if (spec_.prior == PriorKind::Horseshoe) return 3 * p_ + 2 + (spec_.K - 1);
  return 2 * p_ + 1 + (spec_.K - 1);
}

int PosteriorModel::row_phi_offset() const {
  return (spec_.prior == PriorKind::Horseshoe) ? -1 : p_;
}

int PosteriorModel::row_w_offset() const {
  return (spec_.prior == PriorKind::Horseshoe) ? -1 : 2 * p_;
}

int PosteriorModel::row_tau_offset() const {
  return constrained_size() - (spec_.K - 1);
}

Eigen::VectorXd PosteriorModel::constrained_row(const Eigen::VectorXd& theta) const {
  const ConstrainedDraw d = constrain(theta);
  Eigen::VectorXd row(constrained_size());
  row.segment(0, p_) = d.beta;
  if (spec_.prior == PriorKind::Horseshoe) {
    row.segment(p_, 2 * p_ + 2) = d.scales;
  } else {
    row.segment(p_, p_) = d.phi;
    row[2 * p_] = d.w;
  }
  row.segment(row_tau_offset(), spec_.K - 1) = d.tau;
  return row;
}

std::pair<double, Eigen::VectorXd> log_posterior(const Eigen::VectorXd& theta,
                                                 const OrdinalDataset& data,
                                                 const ModelSpec& spec) {
  const PosteriorModel model(data, spec);
  Eigen::VectorXd grad;
  const double lp = model.logp_grad(theta, grad);
  return {lp, grad};
}

}  // namespace pr2d2ord
