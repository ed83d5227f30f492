#include "pr2d2ord/math/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace pr2d2ord::math {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kEps = 2.2204460492503131e-16;

// lgamma(1+x) - lgamma(1-x) for |x| <= 1/2, via
//   -2 gamma x - 2(atanh(x) - x) - 2 sum_m (zeta(2m+1)-1) x^{2m+1}/(2m+1).
// The (zeta-1) series converges like 4^{-m} so 14 terms reach machine
// precision; avoids the cancellation a direct lgamma difference has near 0.
double lgamma_ratio_odd(double x) {
  // zeta(3)-1, zeta(5)-1, ..., zeta(29)-1
  static const double zm1[] = {
      2.0205690315959428540e-01, 3.6927755143369926331e-02,
      8.3492773819228268397e-03, 2.0083928260822144179e-03,
      4.9418860411946455870e-04, 1.2271334757848914675e-04,
      3.0588236307020493551e-05, 7.6371976378997622736e-06,
      1.9082127165539389256e-06, 4.7693298678780646311e-07,
      1.1921992596531107306e-07, 2.9803503514652280186e-08,
      7.4507117898354294919e-09, 1.8626597235130490064e-09};
  const double x2 = x * x;
  double term = x;  // x^{2m+1}
  double sum = 0.0;
  for (int m = 0; m < 14; ++m) {
    term *= x2;
    const double add = zm1[m] * term / (2.0 * m + 3.0);
    sum += add;
    if (std::fabs(add) < 1e-20) break;
  }
  return -2.0 * (0.57721566490153286061 * x + (std::atanh(x) - x) + sum);
}

// Temme auxiliaries:
//   gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)
//   gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2
//   gpl  = 1/Gamma(1+mu),  gmi = 1/Gamma(1-mu)
void temme_gammas(double mu, double& gam1, double& gam2, double& gpl, double& gmi) {
  gpl = std::exp(-std::lgamma(1.0 + mu));
  gmi = std::exp(-std::lgamma(1.0 - mu));
  const double delta = lgamma_ratio_odd(mu);  // log(gmi) - log(gpl) = lgamma(1+mu)-lgamma(1-mu)
  if (std::fabs(mu) < 1e-14) {
    gam1 = -0.57721566490153286061;
  } else {
    gam1 = gpl * std::expm1(delta) / (2.0 * mu);
  }
  gam2 = 0.5 * (gmi + gpl);
}

// K_mu(z), K_{mu+1}(z) for z <= 2, |mu| <= 1/2 (Temme 1975). Unscaled; no
// overflow risk in this range.
void k_temme(double mu, double z, double& kmu, double& kmu1) {
  const double x2 = 0.5 * z;
  const double pimu = kPi * mu;
  const double fact = (std::fabs(pimu) < 1e-14) ? 1.0 : pimu / std::sin(pimu);
  double d = -std::log(x2);
  double e = mu * d;
  const double fact2 = (std::fabs(e) < 1e-14) ? 1.0 : std::sinh(e) / e;
  double gam1, gam2, gpl, gmi;
  temme_gammas(mu, gam1, gam2, gpl, gmi);
  double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
  double sum = ff;
  e = std::exp(e);
  double p = 0.5 * e / gpl;
  double q = 0.5 / (e * gmi);
  double c = 1.0;
  d = x2 * x2;
  double sum1 = p;
  for (int i = 1; i <= 500; ++i) {
    ff = (i * ff + p + q) / (i * i - mu * mu);
    c *= d / i;
    p /= (i - mu);
    q /= (i + mu);
    const double del = c * ff;
    sum += del;
    const double del1 = c * (p - i * ff);
    sum1 += del1;
    if (std::fabs(del) < std::fabs(sum) * kEps) break;
  }
  kmu = sum;
  kmu1 = sum1 * (2.0 / z);
}

// e^z K_mu(z), e^z K_{mu+1}(z) for z > 2, |mu| <= 1/2 (Thompson-Barnett CF2).
void k_cf2_scaled(double mu, double z, double& kmu, double& kmu1) {
  const double mu2 = mu * mu;
  double b = 2.0 * (1.0 + z);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25 - mu2;
  double q = a1, c = a1, a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i <= 10000; ++i) {
    a -= 2 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::fabs(dels / s) < kEps) break;
  }
  h = a1 * h;
  kmu = std::sqrt(kPi / (2.0 * z)) / s;
  kmu1 = kmu * (mu + z + 0.5 - h) / z;
}
}  // namespace

double bessel_k_log(double lambda, double z) {
  if (!(z > 0.0)) throw std::domain_error("bessel_k_log: requires z > 0");
  double nu = std::fabs(lambda);  // K is even in the order
  const int n = static_cast<int>(nu + 0.5);
  const double mu = nu - n;  // in [-1/2, 1/2)

  double k0, k1, log_scale;
  if (z <= 2.0) {
    k_temme(mu, z, k0, k1);
    log_scale = 0.0;
  } else {
    k_cf2_scaled(mu, z, k0, k1);
    log_scale = -z;
  }

  if (n == 0) return std::log(k0) + log_scale;

  // upward recurrence K_{v+1} = K_{v-1} + (2v/z) K_v, renormalized so large
  // orders stay in range; after the loop k1 = K_{mu+n} = K_nu
  double v = mu;
  for (int i = 1; i < n; ++i) {
    v += 1.0;
    const double knew = k0 + (2.0 * v / z) * k1;
    k0 = k1;
    k1 = knew;
    if (k1 > 1e250) {
      k0 /= k1;
      log_scale += std::log(k1);
      k1 = 1.0;
    }
  }
  return std::log(k1) + log_scale;
}

double bessel_k_ratio(double lambda, double z) {
  return std::exp(bessel_k_log(lambda + 1.0, z) - bessel_k_log(lambda, z));
}

}  // namespace pr2d2ord::math
