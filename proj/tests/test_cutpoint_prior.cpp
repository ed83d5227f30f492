#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "pr2d2ord/cutpoint_prior.hpp"
#include "pr2d2ord/math/quadrature.hpp"
#include "pr2d2ord/math/stats.hpp"
#include "pr2d2ord/ordinal_model.hpp"
#include "pr2d2ord/rng.hpp"

using namespace pr2d2ord;

namespace {
double phi_oracle(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double npdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

CutPoints cuts(std::initializer_list<double> t) {
  CutPoints c;
  c.tau = t;
  return c;
}

DirichletConc conc(std::initializer_list<double> a) {
  DirichletConc d;
  d.alpha = a;
  return d;
}

// 2-D integral of exp(log_density_tau) over tau1 < tau2 for K = 3
double integrate_density_k3(const DirichletConc& alpha, double w, double tol_inner,
                            double tol_outer) {
  const double L = 9.0 * std::sqrt(1.0 + w);
  auto inner = [&](double t1) {
    auto f = [&](double t2) {
      if (t2 <= t1) return 0.0;
      const double ld = log_density_tau(cuts({t1, t2}), alpha, w);
      return std::isfinite(ld) ? std::exp(ld) : 0.0;
    };
    return pr2d2ord::math::adaptive_simpson(f, t1 + 1e-9, L, tol_inner);
  };
  return pr2d2ord::math::adaptive_simpson(inner, -L, L - 1e-6, tol_outer);
}
}  // namespace

TEST_CASE("pi_from_tau examples") {
  const auto p1 = pi_from_tau(cuts({-1.0, 1.0}), 0.0);
  CHECK(p1.pi[0] == doctest::Approx(0.15866).epsilon(1e-4));
  CHECK(p1.pi[1] == doctest::Approx(0.68269).epsilon(1e-4));
  CHECK(p1.pi[2] == doctest::Approx(0.15866).epsilon(1e-4));

  for (double w : {0.0, 1.0, 7.0}) {
    const auto p = pi_from_tau(cuts({0.0}), w);
    CHECK(p.pi[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.pi[1] == doctest::Approx(0.5).epsilon(1e-15));
  }

  const auto p3 = pi_from_tau(cuts({1.0}), 3.0);
  CHECK(p3.pi[0] == doctest::Approx(0.69146).epsilon(1e-4));
  CHECK(p3.pi[1] == doctest::Approx(0.30854).epsilon(1e-4));
  CHECK_THROWS(pi_from_tau(cuts({1.0, 0.0}), 1.0));
}

TEST_CASE("tau_from_pi examples and round trips") {
  CategoryProbs half;
  half.pi = {0.5, 0.5};
  CHECK(tau_from_pi(half, 0.0).tau[0] == doctest::Approx(0.0).epsilon(1e-14));

  CategoryProbs p;
  p.pi = {phi_oracle(-1.0), phi_oracle(1.0) - phi_oracle(-1.0), phi_oracle(-1.0)};
  const auto t = tau_from_pi(p, 0.0);
  CHECK(t.tau[0] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(t.tau[1] == doctest::Approx(1.0).epsilon(1e-10));

  Rng rng(17);
  for (int rep = 0; rep < 100; ++rep) {
    const int K = 2 + static_cast<int>(rng.uniform_int(4));
    CutPoints tau;
    double v = -2.5 + rng.uniform();
    for (int k = 1; k < K; ++k) {
      tau.tau.push_back(v);
      v += 0.1 + 1.5 * rng.uniform();
    }
    const double w = 4.0 * rng.uniform();
    const auto pi = pi_from_tau(tau, w);
    const auto back = tau_from_pi(pi, w);
    for (std::size_t j = 0; j < tau.tau.size(); ++j) {
      CHECK(back.tau[j] == doctest::Approx(tau.tau[j]).epsilon(1e-10));
    }
    // and the other direction
    const auto pi2 = pi_from_tau(back, w);
    for (std::size_t k = 0; k < pi.pi.size(); ++k) {
      CHECK(pi2.pi[k] == doctest::Approx(pi.pi[k]).epsilon(1e-10));
    }
  }
}

TEST_CASE("log_density_tau value and edge cases") {
  // K=3, tau=(-1,1), W=0, alpha=(1,1,1): Dirichlet density = Gamma(3) = 2,
  // Jacobian = phi(-1) phi(1)
  const double expected = std::log(2.0 * npdf(1.0) * npdf(1.0));
  CHECK(expected == doctest::Approx(-2.1447).epsilon(1e-4));
  CHECK(log_density_tau(cuts({-1.0, 1.0}), conc({1.0, 1.0, 1.0}), 0.0) ==
        doctest::Approx(expected).epsilon(1e-12));

  CutPoints bad;
  bad.tau = {1.0, 0.5};
  CHECK(log_density_tau(bad, conc({1.0, 1.0, 1.0}), 0.0) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("density normalizes (K=2 and K=3)") {
  // K = 2: 1-D quadrature within 1e-6
  for (double w : {0.0, 1.0}) {
    for (auto alpha : {conc({1.0, 1.0}), conc({2.0, 3.0})}) {
      const double L = 9.0 * std::sqrt(1.0 + w);
      auto f = [&](double t) {
        const double ld = log_density_tau(cuts({t}), alpha, w);
        return std::isfinite(ld) ? std::exp(ld) : 0.0;
      };
      const double z = pr2d2ord::math::adaptive_simpson(f, -L, L, 1e-10);
      CHECK(z == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
  // K = 3 within 1e-3
  const double z3 = integrate_density_k3(conc({1.0, 1.0, 1.0}), 1.0, 1e-8, 1e-6);
  CHECK(z3 == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("Jacobian matches finite differences of pi(tau)") {
  Rng rng(2718);
  for (int rep = 0; rep < 40; ++rep) {
    const int K = 2 + static_cast<int>(rng.uniform_int(5));
    CutPoints tau;
    double v = -2.0 + rng.uniform();
    for (int k = 1; k < K; ++k) {
      tau.tau.push_back(v);
      v += 0.2 + 1.2 * rng.uniform();
    }
    const double w = 3.0 * rng.uniform();

    // analytic: sum_j log phi_W(tau_j)
    double analytic = 0.0;
    for (double t : tau.tau) analytic += log_phi_w_pdf(t, w);

    // finite-difference Jacobian of the first K-1 components of pi
    const int m = K - 1;
    Eigen::MatrixXd jac(m, m);
    const double h = 1e-6;
    for (int j = 0; j < m; ++j) {
      CutPoints up = tau, dn = tau;
      up.tau[static_cast<std::size_t>(j)] += h;
      dn.tau[static_cast<std::size_t>(j)] -= h;
      const auto pu = pi_from_tau(up, w);
      const auto pd = pi_from_tau(dn, w);
      for (int k = 0; k < m; ++k) {
        jac(j, k) = (pu.pi[static_cast<std::size_t>(k)] - pd.pi[static_cast<std::size_t>(k)]) /
                    (2.0 * h);
      }
    }
    const double fd = std::log(std::fabs(jac.determinant()));
    CHECK(analytic == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("sample_tau: K=2 uniformity and Dirichlet mean") {
  Rng rng(424242);
  // K = 2, alpha = (1,1), W = 0: Phi(tau_1) should be uniform
  std::vector<double> u;
  for (int i = 0; i < 30000; ++i) {
    const auto t = sample_tau(conc({1.0, 1.0}), 0.0, rng);
    u.push_back(phi_w_cdf(t.tau[0], 0.0));
  }
  const auto ks = pr2d2ord::math::ks_one_sample(u, [](double x) { return x; });
  CHECK(ks.p_value > 0.01);

  // alpha = (5,1,1), W = 1: mean of pi_1 is 5/7
  double mean_pi1 = 0.0;
  const int m = 20000;
  for (int i = 0; i < m; ++i) {
    const auto t = sample_tau(conc({5.0, 1.0, 1.0}), 1.0, rng);
    mean_pi1 += pi_from_tau(t, 1.0).pi[0] / m;
  }
  CHECK(mean_pi1 == doctest::Approx(5.0 / 7.0).epsilon(0.01));

  // larger W spreads tau_1 out
  std::vector<double> t_w5, t_w05;
  for (int i = 0; i < 20000; ++i) {
    t_w5.push_back(sample_tau(conc({1.0, 1.0, 1.0}), 5.0, rng).tau[0]);
    t_w05.push_back(sample_tau(conc({1.0, 1.0, 1.0}), 0.5, rng).tau[0]);
  }
  CHECK(pr2d2ord::math::variance(t_w5) > pr2d2ord::math::variance(t_w05));
}

TEST_CASE("sample_tau histogram matches the density (chi-square)") {
  // K = 3: bin (tau1, tau2) on a grid; expected mass from nested quadrature
  const DirichletConc alpha = conc({1.0, 1.0, 1.0});
  const double w = 1.0;
  const int nb = 6;
  const double lo = -3.5, hi = 3.5;
  const double step = (hi - lo) / nb;
  const int ndraw = 100000;

  Rng rng(7);
  std::vector<double> observed(static_cast<std::size_t>(nb * nb + 1), 0.0);
  for (int i = 0; i < ndraw; ++i) {
    const auto t = sample_tau(alpha, w, rng);
    const int b1 = static_cast<int>(std::floor((t.tau[0] - lo) / step));
    const int b2 = static_cast<int>(std::floor((t.tau[1] - lo) / step));
    if (b1 < 0 || b1 >= nb || b2 < 0 || b2 >= nb) {
      observed.back() += 1.0;
    } else {
      observed[static_cast<std::size_t>(b1 * nb + b2)] += 1.0;
    }
  }

  std::vector<double> expected(static_cast<std::size_t>(nb * nb + 1), 0.0);
  double covered = 0.0;
  for (int b1 = 0; b1 < nb; ++b1) {
    for (int b2 = 0; b2 < nb; ++b2) {
      auto inner = [&](double t1) {
        auto f = [&](double t2) {
          const double ld = log_density_tau(cuts({t1, t2}), alpha, w);
          return std::isfinite(ld) ? std::exp(ld) : 0.0;
        };
        return pr2d2ord::math::adaptive_simpson(f, lo + b2 * step, lo + (b2 + 1) * step,
                                                1e-9);
      };
      const double mass =
          pr2d2ord::math::adaptive_simpson(inner, lo + b1 * step, lo + (b1 + 1) * step, 1e-7);
      expected[static_cast<std::size_t>(b1 * nb + b2)] = mass * ndraw;
      covered += mass;
    }
  }
  expected.back() = (1.0 - covered) * ndraw;

  // merge sparse cells into the overflow bucket to keep the test valid
  std::vector<double> obs_m, exp_m;
  double obs_rest = 0.0, exp_rest = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (expected[i] >= 10.0) {
      obs_m.push_back(observed[i]);
      exp_m.push_back(expected[i]);
    } else {
      obs_rest += observed[i];
      exp_rest += expected[i];
    }
  }
  if (exp_rest > 0.0) {
    obs_m.push_back(obs_rest);
    exp_m.push_back(exp_rest);
  }
  CHECK(pr2d2ord::math::chi2_gof_pvalue(obs_m, exp_m) > 0.01);
}

TEST_CASE("density symmetry under reflection for symmetric alpha") {
  Rng rng(31);
  for (int rep = 0; rep < 50; ++rep) {
    const double t1 = -2.0 + 2.0 * rng.uniform();
    const double t2 = t1 + 0.1 + 2.0 * rng.uniform();
    const double w = 3.0 * rng.uniform();
    const double a = log_density_tau(cuts({t1, t2}), conc({2.0, 2.0, 2.0}), w);
    const double b = log_density_tau(cuts({-t2, -t1}), conc({2.0, 2.0, 2.0}), w);
    CHECK(a == doctest::Approx(b).epsilon(1e-11));
  }
}
