#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace circlex {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Division guard: only true poles are rejected, near-poles are left to
// the defect analysis.
inline constexpr double kMachineZero = 1e-300;

// Exclusion radius around the origin when sampling functions on C \ {0}.
inline constexpr double kOriginExclusion = 1e-9;

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SamplingError : std::runtime_error {
  std::size_t sample_index;
  SamplingError(const std::string& what, std::size_t k)
      : std::runtime_error(what), sample_index(k) {}
};

constexpr bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Deterministic RNG helpers shared by the property suites and the tests.
inline std::mt19937_64 make_rng(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  rng.discard(8);
  return rng;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Complex unit_complex(std::mt19937_64& rng) {
  return std::polar(1.0, uniform(rng, 0.0, 2.0 * kPi));
}

// Modulus drawn log-uniformly in [lo, hi], uniform angle.
inline Complex random_complex(std::mt19937_64& rng, double mod_lo, double mod_hi) {
  const double m = std::exp(uniform(rng, std::log(mod_lo), std::log(mod_hi)));
  return std::polar(m, uniform(rng, 0.0, 2.0 * kPi));
}

inline Complex complex_in_box(std::mt19937_64& rng, double lo, double hi) {
  const double re = uniform(rng, lo, hi);
  const double im = uniform(rng, lo, hi);
  return {re, im};
}

}  // namespace circlex
