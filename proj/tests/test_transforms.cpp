#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "pr2d2ord/rng.hpp"
#include "pr2d2ord/transforms.hpp"

using namespace pr2d2ord;

TEST_CASE("stick breaking: zero maps to the uniform simplex") {
  const int p = 6;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(p - 1);
  Eigen::VectorXd phi, s, z;
  double lj = 0.0;
  StickBreaking::forward(u, phi, s, z, lj);
  for (int j = 0; j < p; ++j) CHECK(phi[j] == doctest::Approx(1.0 / p).epsilon(1e-12));
  CHECK(phi.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("stick breaking round trip") {
  Rng rng(8);
  for (int rep = 0; rep < 50; ++rep) {
    const int p = 2 + static_cast<int>(rng.uniform_int(7));
    Eigen::VectorXd u(p - 1);
    for (int i = 0; i < p - 1; ++i) u[i] = 2.0 * rng.normal();
    Eigen::VectorXd phi, s, z;
    double lj = 0.0;
    StickBreaking::forward(u, phi, s, z, lj);
    CHECK(phi.sum() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(phi.minCoeff() > 0.0);
    const Eigen::VectorXd back = StickBreaking::inverse(phi);
    for (int i = 0; i < p - 1; ++i) CHECK(back[i] == doctest::Approx(u[i]).epsilon(1e-9));
  }
}

TEST_CASE("stick breaking log-Jacobian matches a numeric determinant") {
  Rng rng(9);
  const int p = 5;
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXd u(p - 1);
    for (int i = 0; i < p - 1; ++i) u[i] = 1.5 * rng.normal();
    Eigen::VectorXd phi, s, z;
    double lj = 0.0;
    StickBreaking::forward(u, phi, s, z, lj);

    const double h = 1e-6;
    Eigen::MatrixXd jac(p - 1, p - 1);
    for (int i = 0; i < p - 1; ++i) {
      Eigen::VectorXd up = u, dn = u;
      up[i] += h;
      dn[i] -= h;
      Eigen::VectorXd phi_u, phi_d, ss, zz;
      double t = 0.0;
      StickBreaking::forward(up, phi_u, ss, zz, t);
      StickBreaking::forward(dn, phi_d, ss, zz, t);
      for (int k = 0; k < p - 1; ++k) jac(k, i) = (phi_u[k] - phi_d[k]) / (2.0 * h);
    }
    CHECK(lj == doctest::Approx(std::log(std::fabs(jac.determinant()))).epsilon(1e-6));
  }
}

TEST_CASE("stick breaking backward gradient matches finite differences") {
  Rng rng(10);
  const int p = 6;
  Eigen::VectorXd c(p);
  for (int j = 0; j < p; ++j) c[j] = rng.normal();

  // target: sum_j c_j log phi_j + log|J|
  auto value = [&](const Eigen::VectorXd& u) {
    Eigen::VectorXd phi, s, z;
    double lj = 0.0;
    StickBreaking::forward(u, phi, s, z, lj);
    double v = lj;
    for (int j = 0; j < p; ++j) v += c[j] * std::log(phi[j]);
    return v;
  };

  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXd u(p - 1);
    for (int i = 0; i < p - 1; ++i) u[i] = rng.normal();
    Eigen::VectorXd phi, s, z;
    double lj = 0.0;
    StickBreaking::forward(u, phi, s, z, lj);
    Eigen::VectorXd gphi(p);
    for (int j = 0; j < p; ++j) gphi[j] = c[j] / phi[j];
    const Eigen::VectorXd grad = StickBreaking::backward(phi, s, z, gphi, true);

    const double h = 1e-6;
    for (int i = 0; i < p - 1; ++i) {
      Eigen::VectorXd up = u, dn = u;
      up[i] += h;
      dn[i] -= h;
      const double fd = (value(up) - value(dn)) / (2.0 * h);
      CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("ordered vector: round trip, Jacobian, gradient") {
  Rng rng(11);
  for (int rep = 0; rep < 30; ++rep) {
    const int m = 1 + static_cast<int>(rng.uniform_int(5));
    Eigen::VectorXd t(m);
    for (int i = 0; i < m; ++i) t[i] = rng.normal();
    Eigen::VectorXd tau;
    double lj = 0.0;
    OrderedVector::forward(t, tau, lj);
    for (int i = 1; i < m; ++i) CHECK(tau[i] > tau[i - 1]);
    double expect_lj = 0.0;
    for (int i = 1; i < m; ++i) expect_lj += t[i];
    CHECK(lj == doctest::Approx(expect_lj).epsilon(1e-14));

    const Eigen::VectorXd back = OrderedVector::inverse(tau);
    for (int i = 0; i < m; ++i) CHECK(back[i] == doctest::Approx(t[i]).epsilon(1e-12));

    // gradient of sum_k c_k tau_k + log|J|
    Eigen::VectorXd c(m);
    for (int i = 0; i < m; ++i) c[i] = rng.normal();
    const Eigen::VectorXd grad = OrderedVector::backward(t, c, true);
    auto value = [&](const Eigen::VectorXd& tt) {
      Eigen::VectorXd tau2;
      double lj2 = 0.0;
      OrderedVector::forward(tt, tau2, lj2);
      return c.dot(tau2) + lj2;
    };
    const double h = 1e-6;
    for (int i = 0; i < m; ++i) {
      Eigen::VectorXd up = t, dn = t;
      up[i] += h;
      dn[i] -= h;
      CHECK(grad[i] == doctest::Approx((value(up) - value(dn)) / (2.0 * h)).epsilon(1e-6));
    }
  }
}
