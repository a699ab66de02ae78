#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace subid {

// Seeded random source with hand-rolled transforms on top of mt19937_64, so a
// committed seed reproduces the same stream on any standard library (the std
// distributions are implementation-defined; the engine is not).
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  double uniform();                      // [0, 1), 53-bit resolution
  double uniform(double lo, double hi);  // [lo, hi)
  int uniform_int(int n);                // {0, ..., n-1}
  int uniform_int(int lo, int hi);       // {lo, ..., hi}, inclusive
  bool bernoulli(double p);
  double normal();                       // standard normal, Box-Muller
  double gamma(double shape);            // shape > 0, unit scale
  std::vector<double> dirichlet(int n, double concentration);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace subid
