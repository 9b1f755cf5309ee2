#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace sed {

// Deterministic random source. All sampling algorithms are implemented here
// rather than with std:: distributions so that a given seed produces the same
// byte-identical results on every platform and standard library.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Derives an independent seed for a named sub-stream. Mixing is splitmix64,
  // so (seed, stream) pairs map to well-separated engine states.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform();

  // Uniform in [lo, hi).
  double uniform(double lo, double hi);

  // Uniform integer in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n);

  // Standard normal via Box-Muller; caches the second deviate.
  double normal();
  double normal(double mean, double sd);

  // Normal clipped to [lo, hi] by rejection.
  double truncated_normal(double mean, double sd, double lo, double hi);

  // Gamma(shape k, scale theta) via Marsaglia-Tsang; k < 1 handled with the
  // standard u^(1/k) boost.
  double gamma(double shape, double scale);

  // Poisson via Knuth's product-of-uniforms (fine for the small means used
  // here).
  unsigned poisson(double mean);

  bool bernoulli(double p) { return uniform() < p; }

  // Fisher-Yates; deterministic order for a given seed.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

private:
  std::mt19937_64 engine_;
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace sed
