#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pr2d2ord/gig.hpp"
#include "pr2d2ord/rng.hpp"
#include "pr2d2ord/types.hpp"

namespace pr2d2ord {

enum class PriorKind { Pr2d2ord, Horseshoe, R2d2BetaPrime };

enum class CutPrior { DirichletInduced, SortedNormal };

/// Prior configuration for the ordinal probit regression posterior.
struct ModelSpec {
  PriorKind prior = PriorKind::Pr2d2ord;
  int K = 3;

  GigParams gig;                // pR2D2ord: GIG prior on the global variance W
  double bp_a = 1.0;            // R2D2 baseline: W ~ BetaPrime(bp_a, bp_b)
  double bp_b = 1.0;
  double xi0 = 0.5;             // Dirichlet(xi0, ..., xi0) on phi

  CutPrior cut_prior = CutPrior::DirichletInduced;
  DirichletConc alpha;          // Dirichlet-induced cut-point prior
  double cut_tau0_sq = 10.0;    // sorted-normal cut-point prior variance

  static ModelSpec pr2d2ord(int K, const GigParams& gig, const DirichletConc& alpha,
                            double xi0 = 0.5);
  static ModelSpec horseshoe(int K, double cut_tau0_sq = 10.0);
  static ModelSpec r2d2_beta_prime(int K, double a, double b, const DirichletConc& alpha,
                                   double xi0 = 0.5);
  void validate() const;
};

/// Values on the constrained scale for one draw.
struct ConstrainedDraw {
  Eigen::VectorXd beta;
  Eigen::VectorXd phi;      // simplex (pR2D2ord / R2D2); empty for horseshoe
  double w = 0.0;           // global variance (pR2D2ord / R2D2)
  Eigen::VectorXd scales;   // horseshoe: lambda_j^2 (p), nu_j (p), tau_g^2, xi
  Eigen::VectorXd tau;
};

/// Posterior over the fully unconstrained parameterization, with cached
/// constants. Pure and reentrant; safe to share across chains.
class PosteriorModel {
 public:
  PosteriorModel(OrdinalDataset data, ModelSpec spec);

  int dim() const { return dim_; }
  int p() const { return p_; }
  const ModelSpec& spec() const { return spec_; }
  const OrdinalDataset& data() const { return data_; }

  /// Joint log density (all reparameterization Jacobians included) and its
  /// gradient. Non-finite input yields -inf with a zero gradient.
  double logp_grad(const Eigen::VectorXd& theta, Eigen::VectorXd& grad) const;
  double logp(const Eigen::VectorXd& theta) const;

  ConstrainedDraw constrain(const Eigen::VectorXd& theta) const;
  Eigen::VectorXd unconstrain(const ConstrainedDraw& draw) const;

  /// Data-informed starting point: beta = 0, phi uniform, W at the prior
  /// median, tau from smoothed empirical response frequencies.
  Eigen::VectorXd initial_point() const;

  /// Names of the constrained values stored per draw.
  std::vector<std::string> constrained_names() const;
  Eigen::VectorXd constrained_row(const Eigen::VectorXd& theta) const;
  int constrained_size() const;

  // offsets of constrained_row blocks
  int row_beta_offset() const { return 0; }
  int row_tau_offset() const;
  int row_phi_offset() const;  // -1 when absent
  int row_w_offset() const;    // -1 when absent

 private:
  OrdinalDataset data_;
  ModelSpec spec_;
  int p_ = 0;
  int dim_ = 0;
  // layout offsets in the unconstrained vector
  int off_beta_ = 0, off_phi_ = 0, off_w_ = 0, off_tau_ = 0;
  int off_hs_l_ = 0, off_hs_nu_ = 0, off_hs_tg_ = 0, off_hs_xi_ = 0;
  double gig_log_norm_ = 0.0;   // cached GIG normalizer
  double bp_log_norm_ = 0.0;    // cached beta-prime normalizer
  double dir_phi_log_norm_ = 0.0;
  double dir_tau_log_norm_ = 0.0;
};

/// Free-function form: returns (log density, gradient).
std::pair<double, Eigen::VectorXd> log_posterior(const Eigen::VectorXd& theta,
                                                 const OrdinalDataset& data,
                                                 const ModelSpec& spec);

}  // namespace pr2d2ord
