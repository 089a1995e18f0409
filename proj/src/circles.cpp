#include "circlex/circles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace circlex {

namespace detail {

void fft_pow2(std::vector<Complex>& data, bool inverse) {
  const std::size_t n = data.size();
  if (!is_power_of_two(n)) throw DomainError("FFT size must be a power of two");
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
    std::vector<Complex> w(len / 2);
    for (std::size_t k = 0; k < len / 2; ++k)
      w[k] = std::polar(1.0, ang * static_cast<double>(k));
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Complex u = data[i + k];
        const Complex v = data[i + k + len / 2] * w[k];
        data[i + k] = u + v;
        data[i + k + len / 2] = u - v;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& x : data) x *= inv;
  }
}

RationalView rational_view(const FunctionModel& f) {
  if (f.kind() == ModelKind::rational) return {f.numerator(), f.denominator()};
  if (f.root() && is_polynomial(f.root())) return {f.root(), make_const({1.0, 0.0})};
  throw DomainError("function model has no rational form");
}

}  // namespace detail

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::vector<Complex> circle_points(const Circle& c, std::size_t n, double offset) {
  std::vector<Complex> pts(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = 2.0 * kPi * (static_cast<double>(k) + offset) / static_cast<double>(n);
    pts[k] = c.center + std::polar(c.radius, theta);
  }
  return pts;
}

// Index of a point within the origin exclusion radius, or npos.
std::size_t offending_index(const std::vector<Complex>& pts) {
  for (std::size_t k = 0; k < pts.size(); ++k)
    if (std::abs(pts[k]) < kOriginExclusion) return k;
  return static_cast<std::size_t>(-1);
}

}  // namespace

CircleSamples sample_on_circle(const FunctionModel& f, Circle c, std::size_t n) {
  if (!is_power_of_two(n) || n < 8)
    throw DomainError("sample count must be a power of two >= 8");
  if (!(c.radius > 0.0)) throw DomainError("circle radius must be positive");

  double offset = 0.0;
  auto pts = circle_points(c, n, offset);
  std::size_t bad = offending_index(pts);
  if (bad != static_cast<std::size_t>(-1)) {
    // A grid point fell essentially onto the origin; shift the grid by half
    // a step, which clears it for circles passing through 0.
    offset = 0.5;
    pts = circle_points(c, n, offset);
    bad = offending_index(pts);
    if (bad != static_cast<std::size_t>(-1))
      throw SamplingError("sample point " + std::to_string(bad) +
                              " lies within the origin exclusion radius",
                          bad);
  }

  CircleSamples out;
  out.circle = c;
  out.count = n;
  out.offset = offset;
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.values[k] = f.eval(pts[k]);
  return out;
}

BoundarySpectrum::BoundarySpectrum(Circle c, std::vector<Complex> dft_order_coefficients)
    : circle_(c), coeff_(std::move(dft_order_coefficients)) {
  const std::size_t n = coeff_.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double e = std::norm(coeff_[j]);
    total_energy_ += e;
    if (j > n / 2) negative_energy_ += e;  // j > N/2 holds indices n = j - N < 0
  }
}

Complex BoundarySpectrum::coefficient(long n) const {
  const long N = static_cast<long>(coeff_.size());
  if (n <= -N / 2 || n > N / 2) throw DomainError("coefficient index out of range");
  return coeff_[static_cast<std::size_t>(n >= 0 ? n : n + N)];
}

double BoundarySpectrum::defect() const {
  if (total_energy_ <= 1e-30) return 0.0;
  return std::sqrt(negative_energy_ / total_energy_);
}

double BoundarySpectrum::top_octave_tail() const {
  if (total_energy_ <= 1e-30) return 0.0;
  const long N = static_cast<long>(coeff_.size());
  double e = 0.0;
  for (long n = N / 4 + 1; n <= N / 2; ++n) e += std::norm(coefficient(n));
  for (long n = -N / 4 - 1; n > -N / 2; --n) e += std::norm(coefficient(n));
  return std::sqrt(e / total_energy_);
}

BoundarySpectrum spectrum(const CircleSamples& samples) {
  const std::size_t n = samples.count;
  if (!is_power_of_two(n) || samples.values.size() != n)
    throw DomainError("sample count must match a power-of-two grid");
  std::vector<Complex> c = samples.values;
  detail::fft_pow2(c, false);
  const double inv = 1.0 / static_cast<double>(n);
  for (auto& x : c) x *= inv;
  if (samples.offset != 0.0) {
    // Undo the phase the half-step grid shift puts on each coefficient.
    const long N = static_cast<long>(n);
    for (long j = 0; j < N; ++j) {
      const long sn = j <= N / 2 ? j : j - N;
      c[static_cast<std::size_t>(j)] *=
          std::polar(1.0, -2.0 * kPi * samples.offset * static_cast<double>(sn) /
                              static_cast<double>(N));
    }
  }
  return BoundarySpectrum(samples.circle, std::move(c));
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::extends: return "extends";
    case Verdict::does_not_extend: return "does_not_extend";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

Verdict classify(double defect, double floor, double tolerance) {
  if (defect < tolerance && defect <= floor) return Verdict::extends;
  if (defect >= tolerance && defect > 10.0 * floor) return Verdict::does_not_extend;
  return Verdict::inconclusive;
}

// Mean squared first-order rounding-error bound of the samples.  Used to
// recognize boundary data that is numerically the zero function: there the
// raw samples are pure evaluation noise and their spectrum is meaningless.
double mean_square_noise(const FunctionModel& f, const Circle& c, std::size_t n,
                         double offset) {
  const double point_err = 2.0 * kEps * (std::abs(c.center) + c.radius);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = 2.0 * kPi * (static_cast<double>(k) + offset) / static_cast<double>(n);
    const Complex z = c.center + std::polar(c.radius, theta);
    const auto ve = f.eval_with_error(z, point_err);
    acc += ve.error * ve.error;
  }
  return acc / static_cast<double>(n);
}

}  // namespace

DefectReport extension_defect(const FunctionModel& f, Circle c, std::size_t n,
                              double tolerance) {
  const CircleSamples s1 = sample_on_circle(f, c, n);
  const CircleSamples s2 = sample_on_circle(f, c, 2 * n);
  const BoundarySpectrum sp1 = spectrum(s1);
  const BoundarySpectrum sp2 = spectrum(s2);

  DefectReport rep;
  rep.circle = c;
  rep.n_used = n;

  const double noise_floor = 32.0 * kEps * std::sqrt(static_cast<double>(n));

  // Boundary data indistinguishable from evaluation rounding noise is the
  // zero function at this resolution and extends trivially.
  if (sp1.total_energy() < 1e-12 &&
      sp1.total_energy() <= std::max(1e-30, 16.0 * mean_square_noise(f, c, n, s1.offset))) {
    rep.defect = 0.0;
    rep.aliasing_floor = noise_floor;
    rep.verdict = Verdict::extends;
    return rep;
  }

  const double d1 = sp1.defect();
  const double d2 = sp2.defect();
  rep.defect = d1;
  rep.aliasing_floor = std::abs(d1 - d2) + sp2.top_octave_tail() + noise_floor;
  rep.verdict = classify(d1, rep.aliasing_floor, tolerance);
  return rep;
}

ExtensionValue spectral_extension_eval(const BoundarySpectrum& s, Complex p) {
  const Circle& c = s.circle();
  const Complex q = (p - c.center) / c.radius;
  const double r = std::abs(q);
  if (r >= 1.0) throw DomainError("evaluation point lies outside the open disc");
  if (s.defect() > 1e-3)
    throw DomainError("spectrum carries a large extension defect; interior evaluation "
                      "is not meaningful");
  const long N = static_cast<long>(s.sample_count());
  Complex acc{0.0, 0.0};
  Complex qn{1.0, 0.0};
  for (long k = 0; k <= N / 2; ++k) {
    acc += s.coefficient(k) * qn;
    qn *= q;
  }
  ExtensionValue out;
  out.value = acc;
  const double top = std::abs(s.coefficient(N / 2));
  out.truncation_tail = r < 1.0 ? top * std::pow(r, static_cast<double>(N / 2)) / (1.0 - r)
                                : std::numeric_limits<double>::infinity();
  return out;
}

Complex rational_extension_eval(const FunctionModel& f, Circle c, Complex p) {
  const auto view = detail::rational_view(f);
  if (p == c.center)
    throw DomainError("the substitution has a node at the circle center");
  const Complex w = std::conj(c.center) + c.radius * c.radius / (p - c.center);
  const Complex den = eval_zw(view.denominator, p, w);
  if (std::abs(den) < 1e-12)
    throw DomainError("pole at the evaluation point: substituted denominator vanishes");
  return eval_zw(view.numerator, p, w) / den;
}

namespace {

double substituted_den_modulus(const ExprPtr& q, const Circle& c, Complex z) {
  const Complex w = std::conj(c.center) + c.radius * c.radius / (z - c.center);
  return std::abs(eval_zw(q, z, w));
}

}  // namespace

std::vector<NearPole> rational_pole_scan(const FunctionModel& f, Circle c,
                                         std::size_t grid_resolution) {
  const auto view = detail::rational_view(f);
  const std::size_t m = std::max<std::size_t>(grid_resolution, 16);
  const double step = 2.0 * c.radius / static_cast<double>(m - 1);
  const double rim = c.radius * (1.0 - 1e-9);

  const auto grid_point = [&](std::size_t ix, std::size_t iy) {
    return c.center + Complex{-c.radius + static_cast<double>(ix) * step,
                              -c.radius + static_cast<double>(iy) * step};
  };

  constexpr double kInvalid = std::numeric_limits<double>::infinity();
  std::vector<double> field(m * m, kInvalid);
  std::vector<double> finite_values;
  for (std::size_t iy = 0; iy < m; ++iy) {
    for (std::size_t ix = 0; ix < m; ++ix) {
      const Complex z = grid_point(ix, iy);
      if (std::abs(z - c.center) >= rim) continue;
      if (std::abs(z - c.center) < 1e-14 * c.radius) continue;  // substitution pole
      const double v = substituted_den_modulus(view.denominator, c, z);
      field[iy * m + ix] = v;
      finite_values.push_back(v);
    }
  }
  if (finite_values.empty()) return {};
  std::nth_element(finite_values.begin(), finite_values.begin() + finite_values.size() / 2,
                   finite_values.end());
  const double scale = finite_values[finite_values.size() / 2];

  std::vector<NearPole> found;
  for (std::size_t iy = 1; iy + 1 < m; ++iy) {
    for (std::size_t ix = 1; ix + 1 < m; ++ix) {
      const double v = field[iy * m + ix];
      if (v == kInvalid) continue;
      bool is_min = true;
      for (int dy = -1; dy <= 1 && is_min; ++dy)
        for (int dx = -1; dx <= 1 && is_min; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const std::size_t jx = ix + static_cast<std::size_t>(dx + 1) - 1u;
          const std::size_t jy = iy + static_cast<std::size_t>(dy + 1) - 1u;
          const double u = field[jy * m + jx];
          if (u != kInvalid && u < v) is_min = false;
        }
      if (!is_min) continue;

      // Pattern-search polish: repeated 3x3 probing with shrinking step.
      Complex zbest = grid_point(ix, iy);
      double vbest = v;
      double h = step;
      for (int level = 0; level < 90; ++level) {
        bool moved = true;
        int guard = 0;
        while (moved && guard++ < 24) {
          moved = false;
          for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
              if (dx == 0 && dy == 0) continue;
              const Complex zc = zbest + Complex{h * dx, h * dy};
              if (std::abs(zc - c.center) >= rim) continue;
              if (std::abs(zc - c.center) < 1e-14 * c.radius) continue;
              const double vc = substituted_den_modulus(view.denominator, c, zc);
              if (vc < vbest) {
                vbest = vc;
                zbest = zc;
                moved = true;
              }
            }
        }
        h *= 0.62;
        if (h < 1e-14 * c.radius) break;
      }

      if (scale > 0.0 && vbest >= 1e-6 * scale) continue;
      bool duplicate = false;
      for (const auto& p : found)
        if (std::abs(p.location - zbest) < 1e-5 * c.radius) duplicate = true;
      if (!duplicate) found.push_back({zbest, vbest});
    }
  }
  return found;
}

}  // namespace circlex
