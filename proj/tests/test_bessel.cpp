#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pr2d2ord/math/bessel.hpp"
#include "pr2d2ord/math/quadrature.hpp"
#include "pr2d2ord/rng.hpp"

using pr2d2ord::Rng;
namespace pm = pr2d2ord::math;

namespace {

// Independent oracle: log K_lambda(z) from the integral representation
// int_0^inf exp(-z cosh t) cosh(lambda t) dt, integrated on a shifted log
// scale so large orders do not overflow.
double bessel_k_log_oracle(double lambda, double z) {
  lambda = std::fabs(lambda);
  auto log_integrand = [&](double t) {
    // log cosh(x) = |x| + log1p(exp(-2|x|)) - log 2
    const double x = std::fabs(lambda * t);
    const double log_cosh = x + std::log1p(std::exp(-2.0 * x)) - std::log(2.0);
    return -z * std::cosh(t) + log_cosh;
  };
  // locate the maximum by coarse scan, then integrate only the window where
  // the integrand is within e^{-70} of the peak (it is a narrow spike for
  // large order / small z, which a full-range quadrature would miss)
  double tmax = 0.0, fmax = log_integrand(0.0);
  for (double t = 0.0; t <= 60.0; t += 0.005) {
    const double f = log_integrand(t);
    if (f > fmax) {
      fmax = f;
      tmax = t;
    }
  }
  double hi = tmax;
  while (log_integrand(hi) > fmax - 70.0) hi += 0.05;
  double lo = tmax;
  while (lo > 0.0 && log_integrand(lo) > fmax - 70.0) lo = std::max(0.0, lo - 0.05);
  auto f = [&](double t) { return std::exp(log_integrand(t) - fmax); };
  const double integral = pm::adaptive_simpson(f, lo, hi, 1e-14);
  return fmax + std::log(integral);
}

double half_integer_k_log(int m, double z) {
  // K_{1/2}(z) = sqrt(pi/(2z)) e^{-z}; recurrence upward for m + 1/2
  const double k_half = std::sqrt(M_PI / (2.0 * z)) * std::exp(-z);
  if (m == 0) return std::log(k_half);
  double k0 = k_half, k1 = k_half * (1.0 + 1.0 / z);  // K_{3/2}
  for (int i = 1; i < m; ++i) {
    const double v = i + 0.5;
    const double kn = k0 + (2.0 * v / z) * k1;
    k0 = k1;
    k1 = kn;
  }
  return std::log(k1);
}

}  // namespace

TEST_CASE("half-integer closed forms") {
  // K_{1/2}(2) = sqrt(pi/4) e^{-2}
  const double expected = std::log(std::sqrt(M_PI / 4.0) * std::exp(-2.0));
  CHECK(pm::bessel_k_log(0.5, 2.0) == doctest::Approx(expected).epsilon(1e-13));
  for (double z : {0.03, 0.7, 2.0, 11.0, 60.0}) {
    for (int m : {0, 1, 2, 5, 11}) {
      CHECK(pm::bessel_k_log(m + 0.5, z) ==
            doctest::Approx(half_integer_k_log(m, z)).epsilon(1e-11));
    }
  }
}

TEST_CASE("K_0(1) against the integral oracle value") {
  // numerical integration gives K_0(1) = 0.421024438...
  CHECK(std::exp(pm::bessel_k_log(0.0, 1.0)) == doctest::Approx(0.42102).epsilon(1e-4));
  CHECK(pm::bessel_k_log(0.0, 1.0) ==
        doctest::Approx(bessel_k_log_oracle(0.0, 1.0)).epsilon(1e-12));
}

TEST_CASE("reflection in the order") {
  Rng rng(2024);
  for (int i = 0; i < 50; ++i) {
    const double z = 0.01 + 5.0 * rng.uniform();
    CHECK(pm::bessel_k_log(-1.3, z) ==
          doctest::Approx(pm::bessel_k_log(1.3, z)).epsilon(1e-12));
    const double lam = 4.0 * rng.uniform() - 2.0;
    CHECK(pm::bessel_k_log(-lam, z) ==
          doctest::Approx(pm::bessel_k_log(lam, z)).epsilon(1e-12));
  }
}

TEST_CASE("oracle agreement over the working domain") {
  // orders in [-5, 50], z in [1e-6, 100]; target 1e-10 relative on the log
  for (double lam : {-5.0, -1.7, -0.49, 0.0, 0.3, 1.0, 2.5, 7.0, 20.0, 50.0}) {
    for (double z : {1e-6, 1e-3, 0.05, 0.5, 1.9, 2.1, 10.0, 100.0}) {
      const double mine = pm::bessel_k_log(lam, z);
      const double ref = bessel_k_log_oracle(lam, z);
      CHECK(mine == doctest::Approx(ref).epsilon(1e-10));
    }
  }
}

TEST_CASE("ratio helper") {
  const double r = pm::bessel_k_ratio(0.5, 2.0);
  // K_{3/2}/K_{1/2} = 1 + 1/z
  CHECK(r == doctest::Approx(1.5).epsilon(1e-12));
}
