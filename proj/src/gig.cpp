#include "pr2d2ord/gig.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pr2d2ord/math/bessel.hpp"
#include "pr2d2ord/math/quadrature.hpp"

namespace pr2d2ord {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

// mode of the two-parameter form x^{lambda-1} exp(-omega (x + 1/x)/2)
double gig_mode_std(double lambda, double omega) {
  if (lambda >= 1.0)
    return (std::sqrt((lambda - 1.0) * (lambda - 1.0) + omega * omega) + (lambda - 1.0)) /
           omega;
  return omega /
         (std::sqrt((1.0 - lambda) * (1.0 - lambda) + omega * omega) + (1.0 - lambda));
}

// Ratio-of-uniforms without shift; lambda in [0,1), moderate omega.
double rgig_rou_noshift(double lambda, double omega, Rng& rng) {
  const double t = 0.5 * (lambda - 1.0);
  const double s = 0.25 * omega;
  const double xm = gig_mode_std(lambda, omega);
  const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);
  const double ym =
      ((lambda + 1.0) + std::sqrt((lambda + 1.0) * (lambda + 1.0) + omega * omega)) / omega;
  const double um = std::exp(0.5 * (lambda + 1.0) * std::log(ym) - s * (ym + 1.0 / ym) - nc);

  double x;
  do {
    const double u = um * rng.uniform_pos();
    const double v = rng.uniform_pos();
    x = u / v;
    if (std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) break;
  } while (true);
  return x;
}

// Ratio-of-uniforms with mode shift (Dagpunar); lambda >= 1 or omega > 1.
double rgig_rou_shift(double lambda, double omega, Rng& rng) {
  const double t = 0.5 * (lambda - 1.0);
  const double s = 0.25 * omega;
  const double xm = gig_mode_std(lambda, omega);
  const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);

  // bounding rectangle via the roots of a cubic (Cardano, casus irreducibilis)
  const double a = -(2.0 * (lambda + 1.0) / omega + xm);
  const double b = 2.0 * (lambda - 1.0) * xm / omega - 1.0;
  const double c = xm;
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double fi = std::acos(-q / (2.0 * std::sqrt(-(p * p * p) / 27.0)));
  const double fak = 2.0 * std::sqrt(-p / 3.0);
  const double y1 = fak * std::cos(fi / 3.0) - a / 3.0;
  const double y2 = fak * std::cos(fi / 3.0 + 4.0 / 3.0 * kPi) - a / 3.0;
  const double uplus = (y1 - xm) * std::exp(t * std::log(y1) - s * (y1 + 1.0 / y1) - nc);
  const double uminus = (y2 - xm) * std::exp(t * std::log(y2) - s * (y2 + 1.0 / y2) - nc);

  double x;
  do {
    const double u = uminus + rng.uniform() * (uplus - uminus);
    const double v = rng.uniform_pos();
    x = u / v + xm;
    if (x > 0.0 && std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) break;
  } while (true);
  return x;
}

// Constant/tail hat decomposition (Hormann-Leydold); 0 <= lambda < 1, small omega.
double rgig_new_approach(double lambda, double omega, Rng& rng) {
  const double xm = gig_mode_std(lambda, omega);
  const double x0 = omega / (1.0 - lambda);

  double a0, a1, a2, k0, k1, k2;
  k0 = std::exp((lambda - 1.0) * std::log(xm) - 0.5 * omega * (xm + 1.0 / xm));
  a0 = k0 * x0;
  if (x0 >= 2.0 / omega) {
    k1 = 0.0;
    a1 = 0.0;
    k2 = std::pow(x0, lambda - 1.0);
    a2 = k2 * 2.0 * std::exp(-omega * x0 / 2.0) / omega;
  } else {
    k1 = std::exp(-omega);
    a1 = (lambda == 0.0)
             ? k1 * std::log(2.0 / (omega * omega))
             : k1 / lambda * (std::pow(2.0 / omega, lambda) - std::pow(x0, lambda));
    k2 = std::pow(2.0 / omega, lambda - 1.0);
    a2 = k2 * 2.0 * std::exp(-1.0) / omega;
  }
  const double atot = a0 + a1 + a2;

  for (;;) {
    double v = rng.uniform_pos() * atot;
    double x, hx;
    if (v <= a0) {
      x = x0 * v / a0;
      hx = k0;
    } else if ((v -= a0) <= a1) {
      if (lambda == 0.0) {
        x = omega * std::exp(std::exp(omega) * v);
        hx = k1 / x;
      } else {
        x = std::pow(std::pow(x0, lambda) + lambda / k1 * v, 1.0 / lambda);
        hx = k1 * std::pow(x, lambda - 1.0);
      }
    } else {
      v -= a1;
      const double xsplit = std::max(x0, 2.0 / omega);
      x = -2.0 / omega *
          std::log(std::exp(-omega / 2.0 * xsplit) - omega / (2.0 * k2) * v);
      hx = k2 * std::exp(-omega / 2.0 * x);
    }
    const double u = rng.uniform_pos() * hx;
    if (std::log(u) <= (lambda - 1.0) * std::log(x) - omega / 2.0 * (x + 1.0 / x)) {
      return x;
    }
  }
}

// standard two-parameter draw, lambda >= 0
double rgig_standard(double lambda, double omega, Rng& rng) {
  if (lambda > 2.0 || omega > 3.0) return rgig_rou_shift(lambda, omega, rng);
  if (lambda >= 1.0 - 2.25 * omega * omega || omega > 0.2)
    return rgig_rou_noshift(lambda, omega, rng);
  return rgig_new_approach(lambda, omega, rng);
}
}  // namespace

void GigParams::validate() const {
  if (!std::isfinite(lambda) || !(rho > 0.0) || !(chi > 0.0))
    throw std::domain_error("GigParams: requires finite lambda, rho > 0, chi > 0");
}

double gig_log_pdf(double x, const GigParams& p) {
  p.validate();
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  const double omega = std::sqrt(p.rho * p.chi);
  return 0.5 * p.lambda * (std::log(p.rho) - std::log(p.chi)) - std::log(2.0) -
         math::bessel_k_log(p.lambda, omega) + (p.lambda - 1.0) * std::log(x) -
         0.5 * (p.rho * x + p.chi / x);
}

double gig_mean(const GigParams& p) {
  p.validate();
  const double omega = std::sqrt(p.rho * p.chi);
  return std::sqrt(p.chi / p.rho) * math::bessel_k_ratio(p.lambda, omega);
}

double gig_mode(const GigParams& p) {
  p.validate();
  const double lm1 = p.lambda - 1.0;
  return (lm1 + std::sqrt(lm1 * lm1 + p.rho * p.chi)) / p.rho;
}

double gig_median(const GigParams& p) {
  p.validate();
  // normalizer cancels in the mass ratio; integrate the unnormalized density
  // on the log scale around the mode
  auto log_kernel = [&](double t) {
    const double x = std::exp(t);
    return p.lambda * t - 0.5 * (p.rho * x + p.chi / x);  // includes log Jacobian
  };
  const double lmode = std::log(std::max(gig_mode(p), 1e-300));
  const double peak = log_kernel(lmode);
  double lo = lmode, hi = lmode;
  while (log_kernel(lo) > peak - 45.0) lo -= 1.0;
  while (log_kernel(hi) > peak - 45.0) hi += 1.0;
  auto f = [&](double t) { return std::exp(log_kernel(t) - peak); };
  const double total = math::adaptive_simpson(f, lo, hi, 1e-10);
  double a = lo, b = hi;
  for (int it = 0; it < 100 && b - a > 1e-12; ++it) {
    const double mid = 0.5 * (a + b);
    const double mass = math::adaptive_simpson(f, lo, mid, 1e-10) / total;
    if (mass < 0.5) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return std::exp(0.5 * (a + b));
}

double sample_gig(const GigParams& p, Rng& rng) {
  p.validate();
  const double omega = std::sqrt(p.rho * p.chi);
  const double scale = std::sqrt(p.chi / p.rho);
  // near-boundary cases degenerate to (inverse-)gamma
  if (omega < 1e-8) {
    if (p.lambda > 0.0) return rng.gamma(p.lambda, 0.5 * p.rho);
    if (p.lambda < 0.0) return 1.0 / rng.gamma(-p.lambda, 0.5 * p.chi);
  }
  const double lam = std::fabs(p.lambda);
  const double x = rgig_standard(lam, omega, rng);
  return (p.lambda < 0.0) ? scale / x : scale * x;
}

double sample_inverse_gaussian(double mu, double shape, Rng& rng) {
  if (!(mu > 0.0) || !(shape > 0.0))
    throw std::domain_error("sample_inverse_gaussian: mu and shape must be positive");
  const double nu = rng.normal();
  const double y = nu * nu;
  // smaller root of the quadratic, written without cancellation
  const double t = 0.5 * mu * y / shape;
  const double x = mu / (1.0 + t + std::sqrt(t * (t + 2.0)));
  const double u = rng.uniform();
  if (u <= mu / (mu + x)) return x;
  return mu * mu / x;
}

AuxState gibbs_step_aux(const AuxState& state, const GigParams& p, Rng& rng) {
  p.validate();
  if (!(p.lambda > -0.5))
    throw std::domain_error(
        "gibbs_step_aux: requires lambda > -1/2; use sample_gig directly otherwise");
  if (!(state.w > 0.0)) throw std::domain_error("gibbs_step_aux: W must be positive");
  AuxState next;
  next.xi = rng.gamma(p.lambda + 0.5, 1.0 / state.w);
  const double s = p.chi + 2.0 * next.xi;
  next.w = sample_inverse_gaussian(std::sqrt(s / p.rho), s, rng);
  return next;
}

}  // namespace pr2d2ord
