#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "circlex/common.hpp"
#include "circlex/expr.hpp"

namespace circlex {

struct Circle {
  Complex center{};
  double radius = 1.0;

  bool surrounds_origin() const { return std::abs(center) < radius; }
  bool passes_through_origin(double tol = 1e-12) const {
    return std::abs(std::abs(center) - radius) <= tol * std::max(1.0, radius);
  }
};

/// Values of a function at count equispaced points of a circle, together
/// with the half-step offset applied when a raw grid point fell inside the
/// origin-exclusion radius.
struct CircleSamples {
  Circle circle;
  std::size_t count = 0;
  double offset = 0.0;  // fraction of one grid step, 0 or 0.5
  std::vector<Complex> values;
};

/// Samples f at circle.center + radius * e^{2*pi*i*(k+offset)/n}.
/// n must be a power of two >= 8.  Throws SamplingError naming the
/// offending index when a point falls within the origin exclusion radius
/// even after the half-step offset.
CircleSamples sample_on_circle(const FunctionModel& f, Circle c, std::size_t n);

/// DFT coefficients c_n = (1/N) sum_k f_k e^{-2*pi*i*k*n/N} for signed
/// indices n in (-N/2, N/2], corrected for any sampling offset so they
/// estimate the true Fourier coefficients of the boundary function.
class BoundarySpectrum {
 public:
  BoundarySpectrum() = default;
  BoundarySpectrum(Circle c, std::vector<Complex> dft_order_coefficients);

  const Circle& circle() const { return circle_; }
  std::size_t sample_count() const { return coeff_.size(); }

  /// Coefficient for signed index n in (-N/2, N/2].
  Complex coefficient(long n) const;

  double total_energy() const { return total_energy_; }
  double negative_energy() const { return negative_energy_; }

  /// sqrt(negative_energy / total_energy); 0 when the total is below the
  /// absolute zero threshold.
  double defect() const;

  /// Fraction of energy carried by the top octave |n| in (N/4, N/2],
  /// returned as sqrt(octave_energy / total_energy).
  double top_octave_tail() const;

 private:
  Circle circle_{};
  std::vector<Complex> coeff_;  // DFT order: index j holds n = j or j - N
  double total_energy_ = 0.0;
  double negative_energy_ = 0.0;
};

BoundarySpectrum spectrum(const CircleSamples& samples);

enum class Verdict { extends, does_not_extend, inconclusive };

const char* to_string(Verdict v);

struct DefectReport {
  Circle circle{};
  double defect = 0.0;
  double aliasing_floor = 0.0;
  std::size_t n_used = 0;
  Verdict verdict = Verdict::inconclusive;
};

/// Relative L2 mass of negative-index Fourier coefficients of f on c,
/// recomputed at 2n to estimate the aliasing floor.  The verdict is
/// `extends` only when the defect is below the tolerance and does not rise
/// above the aliasing floor.
DefectReport extension_defect(const FunctionModel& f, Circle c, std::size_t n = 4096,
                              double tolerance = 1e-8);

struct ExtensionValue {
  Complex value{};
  double truncation_tail = 0.0;  // |c_{N/2}| r^{N/2} / (1 - r)
};

/// Interior value sum_{n>=0} c_n ((p-a)/rho)^n truncated at n = N/2.
/// Requires |p - a| < rho and a spectrum whose defect is small enough for
/// the extension to be meaningful.
ExtensionValue spectral_extension_eval(const BoundarySpectrum& s, Complex p);

/// Exact meromorphic extension of a rational model from the circle:
/// P(p, conj(a) + rho^2/(p-a)) / Q(p, conj(a) + rho^2/(p-a)).
/// Accepts rational models and models whose root is polynomial (Q = 1).
Complex rational_extension_eval(const FunctionModel& f, Circle c, Complex p);

struct NearPole {
  Complex location{};
  double denominator_modulus = 0.0;
};

/// Grid search for interior zeros of the substituted denominator
/// Q(z, conj(a) + rho^2/(z-a)) over the open disc, with local refinement.
std::vector<NearPole> rational_pole_scan(const FunctionModel& f, Circle c,
                                         std::size_t grid_resolution = 96);

namespace detail {
/// In-place radix-2 FFT; n must be a power of two.  Forward uses the
/// e^{-2*pi*i*k*n/N} kernel; inverse divides by n.
void fft_pow2(std::vector<Complex>& data, bool inverse);

/// Rational view used by the extension operations: the model's (P, Q) if it
/// is rational, or (root, 1) when the root is itself polynomial.
struct RationalView {
  ExprPtr numerator;
  ExprPtr denominator;
};
RationalView rational_view(const FunctionModel& f);
}  // namespace detail

}  // namespace circlex
