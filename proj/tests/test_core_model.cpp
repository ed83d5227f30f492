#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "pr2d2ord/ordinal_model.hpp"
#include "pr2d2ord/rng.hpp"

using namespace pr2d2ord;

namespace {
// independent oracle for the standard normal distribution function
double phi_oracle(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
constexpr double kInf = std::numeric_limits<double>::infinity();

CutPoints cuts(std::initializer_list<double> t) {
  CutPoints c;
  c.tau = t;
  return c;
}
}  // namespace

TEST_CASE("phi_w_cdf examples and oracle") {
  CHECK(phi_w_cdf(0.0, 0.0) == 0.5);
  CHECK(phi_w_cdf(1.0, 3.0) == doctest::Approx(0.69146).epsilon(1e-4));
  CHECK(phi_w_cdf(-1.0, 0.0) == doctest::Approx(0.15866).epsilon(1e-4));
  CHECK_THROWS_AS(phi_w_cdf(0.0, -0.5), std::domain_error);

  Rng rng(11);
  double prev = -kInf;
  for (double t = -6.0; t <= 6.0; t += 0.37) {
    const double w = 2.0 * rng.uniform();
    CHECK(phi_w_cdf(t, w) ==
          doctest::Approx(phi_oracle(t / std::sqrt(1.0 + w))).epsilon(1e-14));
    const double v = phi_w_cdf(t, 1.3);
    CHECK(v >= prev);  // monotone in t at fixed W
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
}

TEST_CASE("category pmf given eta") {
  const auto p1 = category_pmf_given_eta(cuts({0.0}), 0.0);
  CHECK(p1[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p1[1] == doctest::Approx(0.5).epsilon(1e-15));

  const auto p2 = category_pmf_given_eta(cuts({-1.0, 1.0}), 0.0);
  CHECK(p2[0] == doctest::Approx(0.15866).epsilon(1e-4));
  CHECK(p2[1] == doctest::Approx(0.68269).epsilon(1e-4));
  CHECK(p2[2] == doctest::Approx(0.15866).epsilon(1e-4));

  const auto p3 = category_pmf_given_eta(cuts({-1.0, 1.0}), 10.0);
  CHECK(p3[0] < 1e-10);
  CHECK(p3[1] < 1e-10);
  CHECK(p3[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p3[0] + p3[1] + p3[2] == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS(category_pmf_given_eta(cuts({1.0, -1.0}), 0.0));
}

TEST_CASE("category pmf given w") {
  const auto p1 = category_pmf_given_w(cuts({1.0}), 3.0);
  CHECK(p1[0] == doctest::Approx(0.69146).epsilon(1e-4));
  CHECK(p1[1] == doctest::Approx(0.30854).epsilon(1e-4));

  const auto p2 = category_pmf_given_w(cuts({1.0}), 0.0);
  CHECK(p2[0] == doctest::Approx(0.84134).epsilon(1e-4));
  CHECK(p2[1] == doctest::Approx(0.15866).epsilon(1e-4));

  // Phi_0 = Phi: agrees with the eta version at W = 0, eta = 0
  Rng rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const double t1 = -2.0 + 3.0 * rng.uniform();
    const double t2 = t1 + 0.1 + 2.0 * rng.uniform();
    const auto a = category_pmf_given_w(cuts({t1, t2}), 0.0);
    const auto b = category_pmf_given_eta(cuts({t1, t2}), 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == b[k]);
  }
}

TEST_CASE("pmf entries in [0,1] and sum to 1 (property)") {
  Rng rng(99);
  for (int rep = 0; rep < 200; ++rep) {
    const int K = 2 + static_cast<int>(rng.uniform_int(5));
    CutPoints tau;
    double t = -3.0 + 2.0 * rng.uniform();
    for (int k = 1; k < K; ++k) {
      tau.tau.push_back(t);
      t += 0.05 + 2.0 * rng.uniform();
    }
    const double w = 5.0 * rng.uniform();
    const double eta = 4.0 * rng.normal();
    for (const auto& pmf : {category_pmf_given_w(tau, w), category_pmf_given_eta(tau, eta)}) {
      double sum = 0.0;
      for (double q : pmf) {
        CHECK(q >= 0.0);
        CHECK(q <= 1.0);
        sum += q;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("log likelihoods") {
  const std::vector<int> y{1, 2};
  const CutPoints tau = cuts({1.0});
  // hand computation from the normal CDF oracle
  const double expected_full = std::log(phi_oracle(0.5)) + std::log(1.0 - phi_oracle(0.5));
  const double expected_null = std::log(phi_oracle(1.0)) + std::log(1.0 - phi_oracle(1.0));
  CHECK(log_likelihood_full(y, tau, 3.0) == doctest::Approx(expected_full).epsilon(1e-12));
  CHECK(expected_full == doctest::Approx(-1.5451).epsilon(1e-4));
  CHECK(log_likelihood_null(y, tau) == doctest::Approx(expected_null).epsilon(1e-12));
  CHECK(expected_null == doctest::Approx(-2.0138).epsilon(1e-4));

  CHECK(log_likelihood_full({}, tau, 3.0) == 0.0);
  CHECK(log_likelihood_null({}, tau) == 0.0);
  CHECK(log_likelihood_full(y, tau, 0.0) == log_likelihood_null(y, tau));

  // all mass in category 1 as tau_1 grows: null log-likelihood tends to 0
  CHECK(log_likelihood_null({1, 1, 1}, cuts({8.0})) == doctest::Approx(0.0).epsilon(1e-10));

  // an observation in a category of zero probability gives -inf
  const CutPoints extreme = cuts({1e200, 2e200});
  CHECK(log_likelihood_full({3}, extreme, 0.0) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("mcfadden r2") {
  const std::vector<int> y{1, 2};
  const CutPoints tau = cuts({1.0});
  const double llm = std::log(phi_oracle(0.5)) + std::log(1.0 - phi_oracle(0.5));
  const double ll0 = std::log(phi_oracle(1.0)) + std::log(1.0 - phi_oracle(1.0));
  CHECK(mcfadden_r2(y, tau, 3.0) == doctest::Approx(1.0 - llm / ll0).epsilon(1e-12));
  CHECK(mcfadden_r2(y, tau, 3.0) == doctest::Approx(0.2327).epsilon(1e-3));

  // exactly zero at W = 0 no matter the data
  Rng rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    const int K = 2 + static_cast<int>(rng.uniform_int(4));
    CutPoints t;
    double v = -2.0 + rng.uniform();
    for (int k = 1; k < K; ++k) {
      t.tau.push_back(v);
      v += 0.2 + rng.uniform();
    }
    std::vector<int> yy;
    for (int i = 0; i < 7; ++i)
      yy.push_back(1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(K))));
    CHECK(mcfadden_r2(yy, t, 0.0) == 0.0);
  }

  // balanced two categories at tau = 0: both probabilities are 1/2 under any W
  for (double w : {0.0, 0.3, 2.0, 17.0}) {
    CHECK(mcfadden_r2({1, 2, 1, 2}, cuts({0.0}), w) == 0.0);
  }

  CHECK_THROWS_AS(mcfadden_r2({}, tau, 1.0), std::invalid_argument);
  // null likelihood exactly 1: undefined
  CHECK_THROWS_AS(mcfadden_r2({1, 1}, cuts({1e9}), 1.0), std::domain_error);
}

TEST_CASE("likelihood falls when mass moves away from observed categories") {
  // brute force over all Y tuples (K = 3, n <= 4) whose support leaves room
  // to push probability toward an unobserved category
  const CutPoints base = cuts({-0.7, 0.9});
  for (int n = 1; n <= 4; ++n) {
    std::vector<int> y(static_cast<std::size_t>(n), 1);
    for (;;) {
      bool has3 = false;
      for (int v : y) has3 = has3 || v == 3;
      if (!has3) {
        // moving the upper cut-point down moves mass into category 3 only
        CutPoints shifted = base;
        shifted.tau[1] = 0.5;
        CHECK(log_likelihood_full(y, shifted, 0.8) <= log_likelihood_full(y, base, 0.8));
      }
      bool has1 = false;
      for (int v : y) has1 = has1 || v == 1;
      if (!has1) {
        CutPoints shifted = base;
        shifted.tau[0] = -0.2;  // grows category 1 at the expense of 2
        CHECK(log_likelihood_full(y, shifted, 0.8) <= log_likelihood_full(y, base, 0.8));
      }
      // next tuple
      int i = 0;
      while (i < n && y[static_cast<std::size_t>(i)] == 3) {
        y[static_cast<std::size_t>(i)] = 1;
        ++i;
      }
      if (i == n) break;
      ++y[static_cast<std::size_t>(i)];
    }
  }
}

TEST_CASE("bin_latent") {
  const CutPoints tau = cuts({0.0, 1.0});
  CHECK(bin_latent(tau, -0.2) == 1);
  CHECK(bin_latent(tau, 0.5) == 2);
  CHECK(bin_latent(tau, 1.5) == 3);
  CHECK(bin_latent(tau, 0.0) == 2);  // boundary goes up
  CHECK(bin_latent(tau, 1.0) == 3);
}
