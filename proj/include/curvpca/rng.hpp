#ifndef CURVPCA_RNG_HPP
#define CURVPCA_RNG_HPP

// Seedable, splittable random numbers and Halton low-discrepancy points.
//
// Algorithm (fixed so that clouds are reproducible):
//   engine    std::mt19937_64 seeded with a single 64-bit word
//   uniform   top 53 bits of one engine draw, times 2^-53, in [0, 1)
//   normal    Box-Muller on two uniforms (cosine branch only)
//   split(k)  child seed = splitmix64(seed ^ splitmix64(k + 1))

#include "curvpca/errors.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace curvpca {

/// One step of the SplitMix64 mixer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class Rng {
public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Independent child stream; the parent state is not touched.
  Rng split(std::uint64_t stream) const {
    return Rng(splitmix64(seed_ ^ splitmix64(stream + 1)));
  }

  std::uint64_t next_u64() { return engine_(); }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    double u1 = 1.0 - uniform(); // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

namespace detail {

inline std::vector<unsigned> first_primes(int count) {
  std::vector<unsigned> primes;
  for (unsigned c = 2; static_cast<int>(primes.size()) < count; ++c) {
    bool prime = true;
    for (unsigned p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

} // namespace detail

/// Halton sequence in [0,1)^dim using the first dim primes as bases.
class Halton {
public:
  static constexpr int max_dim = 128;

  explicit Halton(int dim) : dim_(dim) {
    if (dim < 1 || dim > max_dim) throw validation_error("Halton: dimension out of range");
    bases_ = detail::first_primes(dim);
  }

  int dim() const { return dim_; }

  /// Radical inverse of index in base bases_[coord].
  double value(std::uint64_t index, int coord) const {
    const unsigned b = bases_[coord];
    const double inv_b = 1.0 / b;
    double f = inv_b, r = 0.0;
    while (index > 0) {
      r += f * static_cast<double>(index % b);
      index /= b;
      f *= inv_b;
    }
    return r;
  }

  void point(std::uint64_t index, double* out) const {
    for (int k = 0; k < dim_; ++k) out[k] = value(index, k);
  }

private:
  int dim_;
  std::vector<unsigned> bases_;
};

} // namespace curvpca

#endif // CURVPCA_RNG_HPP
