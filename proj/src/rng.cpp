#include "pr2d2ord/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace pr2d2ord {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t s = seed;
  gen_.seed(splitmix64(s));
}

Rng Rng::derive(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  for (std::uint64_t k : keys) {
    s = h ^ (k + 0x9e3779b97f4a7c15ULL);
    h = splitmix64(s);
  }
  return Rng(h);
}

std::uint64_t Rng::next_u64() { return gen_(); }

double Rng::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_pos() {
  double u;
  do {
    u = uniform();
  } while (u == 0.0);
  return u;
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_int: n must be positive");
  // rejection to avoid modulo bias
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = gen_();
  } while (v >= limit);
  return v % n;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

double Rng::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0))
    throw std::invalid_argument("gamma: shape and rate must be positive");
  if (shape < 1.0) {
    // boost: G(a) = G(a+1) * U^{1/a}
    const double u = uniform_pos();
    return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_pos();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
      return d * v / rate;
    }
  }
}

double Rng::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be positive");
  return -std::log(uniform_pos()) / rate;
}

double Rng::chi_square(double df) { return gamma(0.5 * df, 0.5); }

}  // namespace pr2d2ord
