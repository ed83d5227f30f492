#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "pr2d2ord/gig.hpp"
#include "pr2d2ord/math/quadrature.hpp"
#include "pr2d2ord/math/special.hpp"
#include "pr2d2ord/math/stats.hpp"
#include "pr2d2ord/rng.hpp"

using namespace pr2d2ord;
namespace pm = pr2d2ord::math;

namespace {
// integral of exp(gig_log_pdf) over (0, inf), on the log scale around the mode
double normalization(const GigParams& p, double tol) {
  auto logf = [&](double t) { return gig_log_pdf(std::exp(t), p) + t; };
  const double lmode = std::log(std::max(gig_mode(p), 1e-290));
  const double peak = logf(lmode);
  double lo = lmode, hi = lmode;
  while (logf(lo) > peak - 50.0) lo -= 0.5;
  while (logf(hi) > peak - 50.0) hi += 0.5;
  auto f = [&](double t) { return std::exp(logf(t)); };
  return pm::adaptive_simpson(f, lo, hi, tol);
}

double gamma_log_pdf(double x, double shape, double rate) {
  return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) -
         rate * x;
}
}  // namespace

TEST_CASE("density normalizes for tabled parameter sets") {
  const std::vector<GigParams> sets = {
      {1.10, 1.41, 0.15}, {0.67, 3.76, 0.14}, {1.23, 2.64, 0.19}, {0.85, 1.80, 0.14},
      {0.67, 1.19, 0.77}, {0.36, 1.50, 0.65}, {0.01, 1.00, 1.04}, {0.00, 1.00, 1.00},
  };
  for (const auto& p : sets) {
    CHECK(normalization(p, 1e-10) == doctest::Approx(1.0).epsilon(1e-6));
  }
  // near-boundary case
  CHECK(normalization({2.0, 3.0, 1e-10}, 1e-10) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("gamma limit of the density") {
  const GigParams p{2.0, 3.0, 1e-10};
  for (double x : {0.05, 0.3, 1.0, 2.5, 8.0}) {
    CHECK(gig_log_pdf(x, p) == doctest::Approx(gamma_log_pdf(x, 2.0, 1.5)).epsilon(1e-4));
  }
}

TEST_CASE("mode matches the stationary point") {
  Rng rng(12);
  for (int rep = 0; rep < 30; ++rep) {
    GigParams p;
    p.lambda = -2.0 + 5.0 * rng.uniform();
    p.rho = 0.2 + 4.0 * rng.uniform();
    p.chi = 0.05 + 3.0 * rng.uniform();
    const double m = gig_mode(p);
    const double h = 1e-7 * std::max(1.0, m);
    const double up = gig_log_pdf(m + h, p);
    const double at = gig_log_pdf(m, p);
    const double dn = gig_log_pdf(m - h, p);
    CHECK(at >= up - 1e-8);
    CHECK(at >= dn - 1e-8);
    // closed-form root of the derivative
    const double lm1 = p.lambda - 1.0;
    const double root = (lm1 + std::sqrt(lm1 * lm1 + p.rho * p.chi)) / p.rho;
    CHECK(m == doctest::Approx(root).epsilon(1e-12));
  }
}

TEST_CASE("sampler mean matches the Bessel-ratio expectation") {
  const GigParams p{1.10, 1.41, 0.15};
  Rng rng(100);
  const int n = 100000;
  double mean = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_gig(p, rng);
    CHECK(x > 0.0);
    mean += x / n;
  }
  CHECK(mean == doctest::Approx(gig_mean(p)).epsilon(0.02));
}

TEST_CASE("sampler matches the density across parameter regimes (KS)") {
  Rng rng(200);
  const std::vector<GigParams> sets = {
      {1.10, 1.41, 0.15},   // ROU no-shift region
      {3.50, 2.00, 1.00},   // ROU shift region (lambda > 2)
      {0.10, 0.02, 0.02},   // small-omega decomposition region
      {-1.30, 1.00, 2.00},  // negative order via inversion
  };
  for (const auto& p : sets) {
    const int n = 30000;
    std::vector<double> draws(n);
    for (double& d : draws) d = sample_gig(p, rng);
    const double z = normalization(p, 1e-10);
    auto cdf = [&](double x) {
      if (x <= 0.0) return 0.0;
      auto f = [&](double t) { return std::exp(gig_log_pdf(std::exp(t), p) + t); };
      const double lo = std::log(std::max(gig_mode(p), 1e-290)) - 40.0;
      if (std::log(x) <= lo) return 0.0;
      return pm::adaptive_simpson(f, lo, std::log(x), 1e-9) / z;
    };
    // KS against the numeric CDF on a thinned subset (the full CDF is costly)
    std::vector<double> sub(draws.begin(), draws.begin() + 4000);
    const auto ks = pm::ks_one_sample(sub, cdf);
    CHECK(ks.p_value > 0.01);
  }
}

TEST_CASE("half-integer order reduces to inverse Gaussian") {
  Rng rng(300);
  const double rho = 1.7, chi = 0.9;
  const int n = 30000;
  std::vector<double> a(n), b(n);
  // GIG(-1/2, rho, chi) is InvGauss(sqrt(chi/rho), chi)
  for (int i = 0; i < n; ++i) {
    a[i] = sample_gig({-0.5, rho, chi}, rng);
    b[i] = sample_inverse_gaussian(std::sqrt(chi / rho), chi, rng);
  }
  CHECK(pm::ks_two_sample(a, b).p_value > 0.01);
  // lambda = +1/2: the reciprocal is InvGauss(sqrt(rho/chi), rho)
  for (int i = 0; i < n; ++i) {
    a[i] = 1.0 / sample_gig({0.5, rho, chi}, rng);
    b[i] = sample_inverse_gaussian(std::sqrt(rho / chi), rho, rng);
  }
  CHECK(pm::ks_two_sample(a, b).p_value > 0.01);
}

TEST_CASE("chi -> 0 limit matches a gamma sampler") {
  Rng rng(400);
  const int n = 30000;
  std::vector<double> a(n), b(n);
  for (int i = 0; i < n; ++i) {
    a[i] = sample_gig({2.0, 3.0, 1e-12}, rng);
    b[i] = rng.gamma(2.0, 1.5);
  }
  CHECK(pm::ks_two_sample(a, b).p_value > 0.01);
}

TEST_CASE("inverse Gaussian moments and support") {
  Rng rng(500);
  std::vector<double> big(10000);
  for (double& x : big) x = sample_inverse_gaussian(1.0, 1e6, rng);
  CHECK(std::sqrt(pm::variance(big)) < 0.01);
  CHECK(pm::mean(big) == doctest::Approx(1.0).epsilon(1e-3));

  std::vector<double> d(100000);
  for (double& x : d) {
    x = sample_inverse_gaussian(2.0, 3.0, rng);
    CHECK(x > 0.0);
  }
  CHECK(pm::mean(d) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(pm::variance(d) == doctest::Approx(8.0 / 3.0).epsilon(0.05));
  CHECK_THROWS(sample_inverse_gaussian(-1.0, 1.0, rng));
  CHECK_THROWS(sample_inverse_gaussian(1.0, 0.0, rng));
}

TEST_CASE("auxiliary Gibbs chain has the GIG stationary law") {
  const GigParams p{1.10, 1.41, 0.15};
  Rng rng(600);
  AuxState s;
  s.w = gig_mode(p);
  s.xi = 1.0;
  // burn in, then keep every 5th sweep
  for (int i = 0; i < 2000; ++i) s = gibbs_step_aux(s, p, rng);
  const int keep = 20000;
  std::vector<double> chain(keep), direct(keep);
  double mean_w = 0.0;
  for (int i = 0; i < keep; ++i) {
    for (int t = 0; t < 5; ++t) s = gibbs_step_aux(s, p, rng);
    CHECK(s.w > 0.0);
    chain[static_cast<std::size_t>(i)] = s.w;
    direct[static_cast<std::size_t>(i)] = sample_gig(p, rng);
    mean_w += s.w / keep;
  }
  CHECK(pm::ks_two_sample(chain, direct).p_value > 0.01);
  CHECK(mean_w == doctest::Approx(gig_mean(p)).epsilon(0.02));

  CHECK_THROWS_AS(gibbs_step_aux(s, {-0.7, 1.0, 1.0}, rng), std::domain_error);
}

TEST_CASE("gig_median: half the mass on each side") {
  for (const auto& p : {GigParams{1.10, 1.41, 0.15}, GigParams{-0.8, 2.0, 1.3}}) {
    const double med = gig_median(p);
    auto logf = [&](double t) { return gig_log_pdf(std::exp(t), p) + t; };
    const double lmode = std::log(std::max(gig_mode(p), 1e-290));
    double lo = lmode;
    while (logf(lo) > logf(lmode) - 50.0) lo -= 0.5;
    auto f = [&](double t) { return std::exp(logf(t)); };
    const double below = pm::adaptive_simpson(f, lo, std::log(med), 1e-10);
    CHECK(below / normalization(p, 1e-10) == doctest::Approx(0.5).epsilon(1e-6));
  }
}
