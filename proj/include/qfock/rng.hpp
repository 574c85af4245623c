#pragma once

#include "qfock/types.hpp"

#include <cstdint>
#include <random>

namespace qfock {

/// Deterministic random source used for every sampled quantity.
/// Backed by std::mt19937_64; uniform doubles are derived from raw 64-bit
/// draws (top 53 bits) so streams are identical across platforms and do not
/// depend on library distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(raw() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return raw() % n; }

  Complex complex_in_disk(double radius) {
    // rejection keeps the distribution rotation invariant
    for (;;) {
      double x = uniform(-1.0, 1.0), y = uniform(-1.0, 1.0);
      if (x * x + y * y <= 1.0) return radius * Complex(x, y);
    }
  }

  Vector complex_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i)
      v[i] = Complex(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
    return v;
  }

  Matrix complex_matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i)
        m(i, j) = Complex(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
    return m;
  }

  /// Sub-stream for an independent purpose; offsets are fixed so report
  /// content depends only on (seed, purpose).
  static Rng derive(std::uint64_t seed, std::uint64_t purpose) {
    return Rng(seed * 0x9E3779B97F4A7C15ULL + purpose);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace qfock
