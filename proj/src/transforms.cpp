#include "pr2d2ord/transforms.hpp"

#include <cmath>
#include <stdexcept>

namespace pr2d2ord {

namespace {
double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + e^x) without overflow
double log1p_exp(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}
}  // namespace

void StickBreaking::forward(const Eigen::VectorXd& u, Eigen::VectorXd& phi,
                            Eigen::VectorXd& sticks, Eigen::VectorXd& z, double& log_jac) {
  const Eigen::Index pm1 = u.size();
  const Eigen::Index p = pm1 + 1;
  phi.resize(p);
  sticks.resize(p);
  z.resize(pm1);
  log_jac = 0.0;
  double stick = 1.0;
  for (Eigen::Index k = 0; k < pm1; ++k) {
    sticks[k] = stick;
    const double shifted = u[k] - std::log(static_cast<double>(p - k - 1));
    z[k] = logistic(shifted);
    phi[k] = stick * z[k];
    // log z + log(1-z) written via softplus for stability
    log_jac += std::log(stick) - log1p_exp(-shifted) - log1p_exp(shifted);
    stick -= phi[k];
  }
  sticks[p - 1] = stick;
  phi[p - 1] = stick;
}

Eigen::VectorXd StickBreaking::inverse(const Eigen::VectorXd& phi) {
  const Eigen::Index p = phi.size();
  Eigen::VectorXd u(p - 1);
  double stick = 1.0;
  for (Eigen::Index k = 0; k + 1 < p; ++k) {
    const double zk = phi[k] / stick;
    if (!(zk > 0.0) || !(zk < 1.0))
      throw std::domain_error("StickBreaking::inverse: point not in the open simplex");
    u[k] = std::log(zk / (1.0 - zk)) + std::log(static_cast<double>(p - k - 1));
    stick -= phi[k];
  }
  return u;
}

Eigen::VectorXd StickBreaking::backward(const Eigen::VectorXd& phi,
                                        const Eigen::VectorXd& sticks,
                                        const Eigen::VectorXd& z,
                                        const Eigen::VectorXd& grad_phi,
                                        bool with_jacobian) {
  const Eigen::Index p = phi.size();
  const Eigen::Index pm1 = p - 1;
  Eigen::VectorXd gu(pm1);
  // adjoint of the stick entering step k+1 (S_{k+1}); seeded by phi_p = S_p
  double a_stick = grad_phi[p - 1];
  for (Eigen::Index k = pm1 - 1; k >= 0; --k) {
    const double s = sticks[k];
    const double zk = z[k];
    double az = grad_phi[k] * s - a_stick * s;
    double as = grad_phi[k] * zk + a_stick * (1.0 - zk);
    if (with_jacobian) {
      az += 1.0 / zk - 1.0 / (1.0 - zk);
      as += 1.0 / s;
    }
    gu[k] = az * zk * (1.0 - zk);
    a_stick = as;
  }
  return gu;
}

void OrderedVector::forward(const Eigen::VectorXd& t, Eigen::VectorXd& tau, double& log_jac) {
  const Eigen::Index m = t.size();
  tau.resize(m);
  log_jac = 0.0;
  if (m == 0) return;
  tau[0] = t[0];
  for (Eigen::Index k = 1; k < m; ++k) {
    tau[k] = tau[k - 1] + std::exp(t[k]);
    log_jac += t[k];
  }
}

Eigen::VectorXd OrderedVector::inverse(const Eigen::VectorXd& tau) {
  const Eigen::Index m = tau.size();
  Eigen::VectorXd t(m);
  if (m == 0) return t;
  t[0] = tau[0];
  for (Eigen::Index k = 1; k < m; ++k) {
    const double gap = tau[k] - tau[k - 1];
    if (!(gap > 0.0)) throw std::domain_error("OrderedVector::inverse: not increasing");
    t[k] = std::log(gap);
  }
  return t;
}

Eigen::VectorXd OrderedVector::backward(const Eigen::VectorXd& t,
                                        const Eigen::VectorXd& grad_tau,
                                        bool with_jacobian) {
  const Eigen::Index m = t.size();
  Eigen::VectorXd gt(m);
  if (m == 0) return gt;
  // suffix sums: d tau_j / d t_k = exp(t_k) for j >= k (k >= 1), 1 for k = 0
  double suffix = 0.0;
  for (Eigen::Index k = m - 1; k >= 1; --k) {
    suffix += grad_tau[k];
    gt[k] = std::exp(t[k]) * suffix + (with_jacobian ? 1.0 : 0.0);
  }
  suffix += grad_tau[0];
  gt[0] = suffix;
  return gt;
}

}  // namespace pr2d2ord
