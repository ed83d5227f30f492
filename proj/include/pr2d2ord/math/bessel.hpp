#pragma once

namespace pr2d2ord::math {

/// log K_lambda(z), the modified Bessel function of the second kind, for
/// real order and z > 0. Even in the order: K_{-lambda} = K_lambda.
///
/// Method: reduce to mu in [-1/2, 1/2); Temme's series for z <= 2 and the
/// Thompson-Barnett continued fraction (computed on the e^z-scaled function)
/// for z > 2; then the upward order recurrence carried with a running log
/// scale factor so arbitrarily large orders never overflow.
double bessel_k_log(double lambda, double z);

/// K_{lambda+1}(z) / K_lambda(z), computed on the log scale.
double bessel_k_ratio(double lambda, double z);

}  // namespace pr2d2ord::math
