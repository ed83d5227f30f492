#pragma once

#include <Eigen/Dense>

namespace pr2d2ord {

/// Stick-breaking map between R^{p-1} and the open p-simplex (logistic links
/// with the uniform-at-zero offset log(p - k)).
struct StickBreaking {
  /// u (p-1) -> phi (p), sticks S (p), breaks z (p-1), log|d phi / d u|.
  static void forward(const Eigen::VectorXd& u, Eigen::VectorXd& phi,
                      Eigen::VectorXd& sticks, Eigen::VectorXd& z, double& log_jac);

  static Eigen::VectorXd inverse(const Eigen::VectorXd& phi);

  /// Reverse sweep: d(target)/du given d(target)/dphi. When with_jacobian is
  /// set, the gradient of log|J| itself is folded in (target includes it).
  static Eigen::VectorXd backward(const Eigen::VectorXd& phi, const Eigen::VectorXd& sticks,
                                  const Eigen::VectorXd& z, const Eigen::VectorXd& grad_phi,
                                  bool with_jacobian);
};

/// Ordered-vector map: tau_1 = t_1, tau_k = tau_{k-1} + exp(t_k);
/// log|J| = sum_{k >= 2} t_k.
struct OrderedVector {
  static void forward(const Eigen::VectorXd& t, Eigen::VectorXd& tau, double& log_jac);
  static Eigen::VectorXd inverse(const Eigen::VectorXd& tau);
  static Eigen::VectorXd backward(const Eigen::VectorXd& t, const Eigen::VectorXd& grad_tau,
                                  bool with_jacobian);
};

}  // namespace pr2d2ord
