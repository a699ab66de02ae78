#include "subid/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace subid {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::uniform_int(int n) {
  if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
  // Rejection to kill the modulo bias; n is tiny compared to 2^64.
  uint64_t span = static_cast<uint64_t>(n);
  uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return static_cast<int>(r % span);
}

int Rng::uniform_int(int lo, int hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
  return lo + uniform_int(hi - lo + 1);
}

bool Rng::bernoulli(double p) { return uniform() < p; }

double Rng::normal() {
  double u1 = 1.0 - uniform();  // (0, 1]
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double Rng::gamma(double shape) {
  if (shape <= 0) throw std::invalid_argument("gamma: shape must be positive");
  if (shape < 1.0) {
    // Boost to shape+1 and scale back (Marsaglia-Tsang trick).
    double u = 1.0 - uniform();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze method.
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0) continue;
    v = v * v * v;
    double u = 1.0 - uniform();  // (0, 1], safe to log
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::vector<double> Rng::dirichlet(int n, double concentration) {
  if (n <= 0) throw std::invalid_argument("dirichlet: need at least one cell");
  if (concentration <= 0)
    throw std::invalid_argument("dirichlet: concentration must be positive");
  std::vector<double> out(n);
  double total = 0;
  for (double& v : out) {
    v = gamma(concentration);
    total += v;
  }
  if (total <= 0) {
    // Astronomically unlikely underflow; fall back to uniform.
    for (double& v : out) v = 1.0 / n;
    return out;
  }
  for (double& v : out) v /= total;
  return out;
}

}  // namespace subid
