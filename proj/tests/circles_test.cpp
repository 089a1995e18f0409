#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "circlex/circles.hpp"

using namespace circlex;

namespace {

bool close(Complex a, Complex b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// Independent O(N^2) oracle for the spectrum definition.
std::vector<Complex> naive_dft_coefficients(const std::vector<Complex>& samples) {
  const std::size_t n = samples.size();
  std::vector<Complex> c(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k)
      acc += samples[k] *
             std::polar(1.0, -2.0 * kPi * static_cast<double>(j) * static_cast<double>(k) /
                                 static_cast<double>(n));
    c[j] = acc / static_cast<double>(n);
  }
  return c;
}

}  // namespace

TEST_CASE("circle predicates") {
  CHECK(Circle{{0.3, 0.0}, 1.0}.surrounds_origin());
  CHECK_FALSE(Circle{{2.0, 0.0}, 1.0}.surrounds_origin());
  CHECK(Circle{{0.6, 0.8}, 1.0}.passes_through_origin());
  CHECK_FALSE(Circle{{0.3, 0.0}, 1.0}.passes_through_origin());
}

TEST_CASE("samples of the coordinate functions on the unit circle") {
  const FunctionModel f = parse("z");
  const auto s = sample_on_circle(f, {{0.0, 0.0}, 1.0}, 8);
  CHECK(close(s.values[0], Complex{1.0, 0.0}));
  CHECK(close(s.values[2], Complex{0.0, 1.0}));
  CHECK(close(s.values[4], Complex{-1.0, 0.0}));
  CHECK(close(s.values[6], Complex{0.0, -1.0}));

  const FunctionModel g = parse("conj(z)");
  const auto t = sample_on_circle(g, {{0.0, 0.0}, 1.0}, 8);
  CHECK(close(t.values[2], Complex{0.0, -1.0}));
  CHECK(close(t.values[6], Complex{0.0, 1.0}));
}

TEST_CASE("samples match direct evaluation") {
  const FunctionModel f = parse("z^2/conj(z)");
  const Circle c{{0.3, 0.0}, 1.0};
  const auto s = sample_on_circle(f, c, 8);
  for (std::size_t k = 0; k < 8; ++k) {
    const Complex z = c.center + std::polar(c.radius, 2.0 * kPi * static_cast<double>(k) / 8.0);
    CHECK(close(s.values[k], z * z / std::conj(z)));
  }
}

TEST_CASE("sampling guards the origin and offsets circles through it") {
  const FunctionModel f = parse("z");
  // Circle through 0 whose grid hits the origin exactly: center 0.5, radius 0.5.
  const auto s = sample_on_circle(f, {{0.5, 0.0}, 0.5}, 16);
  CHECK(s.offset == 0.5);
  for (const Complex& v : s.values) CHECK(std::abs(v) > kOriginExclusion);
  // A circle passing within the exclusion radius without touching it fails.
  CHECK_THROWS_AS(sample_on_circle(f, {{0.5 + 1e-12, 0.0}, 0.5}, 16), SamplingError);
  CHECK_THROWS_AS(sample_on_circle(f, {{0.0, 0.0}, 1.0}, 4), DomainError);  // N too small
}

TEST_CASE("spectrum of monomials is a single coefficient") {
  const FunctionModel f = parse("z");
  const auto sp = spectrum(sample_on_circle(f, {{0.0, 0.0}, 1.0}, 64));
  CHECK(std::abs(sp.coefficient(1) - Complex{1.0, 0.0}) < 1e-15);
  for (long n = -31; n <= 32; ++n)
    if (n != 1) CHECK(std::abs(sp.coefficient(n)) < 1e-15);

  const FunctionModel g = parse("conj(z)");
  const auto sq = spectrum(sample_on_circle(g, {{0.0, 0.0}, 1.0}, 64));
  CHECK(std::abs(sq.coefficient(-1) - Complex{1.0, 0.0}) < 1e-15);

  const FunctionModel c5 = parse("5");
  const auto sc = spectrum(sample_on_circle(c5, {{0.0, 0.0}, 1.0}, 64));
  CHECK(std::abs(sc.coefficient(0) - Complex{5.0, 0.0}) < 1e-14);
}

TEST_CASE("monomial purity across the resolvable band") {
  auto rng = make_rng(3);
  for (const int n : {2, 5, 9, 15}) {
    const FunctionModel f = parse("z^" + std::to_string(n));
    const auto sp = spectrum(sample_on_circle(f, {{0.0, 0.0}, 1.0}, 64));
    CHECK(std::abs(sp.coefficient(n) - Complex{1.0, 0.0}) < 1e-13);
    for (long j = -31; j <= 32; ++j)
      if (j != n) CHECK(std::abs(sp.coefficient(j)) < 1e-13);
    const FunctionModel g = parse("conj(z)^" + std::to_string(n));
    const auto sq = spectrum(sample_on_circle(g, {{0.0, 0.0}, 1.0}, 64));
    CHECK(std::abs(sq.coefficient(-n) - Complex{1.0, 0.0}) < 1e-13);
  }
  (void)rng;
}

TEST_CASE("fft agrees with the naive DFT oracle") {
  auto rng = make_rng(17);
  CircleSamples s;
  s.circle = {{0.0, 0.0}, 1.0};
  s.count = 64;
  s.offset = 0.0;
  for (int k = 0; k < 64; ++k) s.values.push_back(complex_in_box(rng, -2.0, 2.0));
  const auto sp = spectrum(s);
  const auto oracle = naive_dft_coefficients(s.values);
  for (long j = 0; j < 64; ++j) {
    const long n = j <= 32 ? j : j - 64;
    CHECK(std::abs(sp.coefficient(n) - oracle[static_cast<std::size_t>(j)]) < 1e-12);
  }
}

TEST_CASE("inverse FFT reproduces samples") {
  auto rng = make_rng(19);
  std::vector<Complex> data;
  for (int k = 0; k < 128; ++k) data.push_back(complex_in_box(rng, -1.0, 1.0));
  auto copy = data;
  detail::fft_pow2(copy, false);
  detail::fft_pow2(copy, true);
  for (int k = 0; k < 128; ++k) CHECK(close(copy[static_cast<std::size_t>(k)], data[static_cast<std::size_t>(k)]));
}

TEST_CASE("Parseval ties sample energy to coefficient energy") {
  const FunctionModel f = parse("z^2/conj(z)");
  const auto s = sample_on_circle(f, {{0.4, 0.2}, 1.3}, 256);
  const auto sp = spectrum(s);
  double sample_energy = 0.0;
  for (const Complex& v : s.values) sample_energy += std::norm(v);
  sample_energy /= static_cast<double>(s.count);
  CHECK(std::abs(sample_energy - sp.total_energy()) <= 1e-12 * sample_energy);
}

TEST_CASE("offset sampling leaves coefficients in place") {
  const FunctionModel f = parse("z^3");
  const Circle c{{0.5, 0.0}, 0.5};  // through the origin; forces the offset
  const auto sp = spectrum(sample_on_circle(f, c, 64));
  // z^3 on this circle expands in powers of e^{i theta} with fixed
  // coefficients; compare against the direct binomial expansion
  // (0.5 + 0.5 e^{i t})^3 = 1/8 + 3/8 e + 3/8 e^2 + 1/8 e^3.
  CHECK(close(sp.coefficient(0), Complex{0.125, 0.0}));
  CHECK(close(sp.coefficient(1), Complex{0.375, 0.0}));
  CHECK(close(sp.coefficient(2), Complex{0.375, 0.0}));
  CHECK(close(sp.coefficient(3), Complex{0.125, 0.0}));
  CHECK(std::abs(sp.coefficient(-1)) < 1e-14);
}

TEST_CASE("extension defect of the counterexample function") {
  const FunctionModel f = parse("z^2/conj(z)");
  const auto good = extension_defect(f, {{0.3, 0.0}, 1.0}, 4096);
  CHECK(good.defect < 1e-12);
  CHECK(good.verdict == Verdict::extends);

  const auto bad = extension_defect(f, {{2.0, 0.0}, 1.0}, 4096);
  CHECK(bad.defect > 0.01);
  CHECK(bad.verdict == Verdict::does_not_extend);

  const auto conj_defect = extension_defect(parse("conj(z)"), {{0.0, 0.0}, 1.0}, 1024);
  CHECK(std::abs(conj_defect.defect - 1.0) < 1e-12);
  CHECK(conj_defect.verdict == Verdict::does_not_extend);
}

TEST_CASE("rotation covariance of the defect") {
  // defect(f, b-Delta(a,rho)) = defect(z -> f(e^{i theta} z), b-Delta(e^{-i theta} a, rho))
  const FunctionModel f = parse("z^2/conj(z)");
  auto rng = make_rng(29);
  for (int i = 0; i < 5; ++i) {
    const double theta = uniform(rng, 0.0, 2.0 * kPi);
    const Complex rot = std::polar(1.0, theta);
    const ExprPtr rz = make_mul(make_const(rot), make_var());
    const FunctionModel rotated =
        FunctionModel::from_ast(make_div(make_pow(rz, 2), make_conj(rz)));
    const Circle c{{1.7, 0.4}, 0.9};
    const Circle rotated_circle{c.center * std::conj(rot), c.radius};
    const double d1 = extension_defect(f, c, 1024).defect;
    const double d2 = extension_defect(rotated, rotated_circle, 1024).defect;
    CHECK(std::abs(d1 - d2) < 1e-12);
  }
}

TEST_CASE("spectral extension at interior points") {
  const FunctionModel id = parse("z");
  const auto sp = spectrum(sample_on_circle(id, {{0.0, 0.0}, 1.0}, 256));
  CHECK(close(spectral_extension_eval(sp, {0.5, 0.0}).value, Complex{0.5, 0.0}));

  const FunctionModel f = parse("z^2/conj(z)");
  const auto spf = spectrum(sample_on_circle(f, {{0.0, 0.0}, 1.0}, 256));
  CHECK(close(spectral_extension_eval(spf, {0.5, 0.0}).value, Complex{0.125, 0.0}));

  const FunctionModel c7 = parse("7");
  const auto spc = spectrum(sample_on_circle(c7, {{0.4, -0.1}, 2.0}, 256));
  CHECK(close(spectral_extension_eval(spc, {1.0, 0.5}).value, Complex{7.0, 0.0}));

  CHECK_THROWS_AS(spectral_extension_eval(sp, {2.0, 0.0}), DomainError);
}

TEST_CASE("rational extension via the center substitution") {
  const FunctionModel f = parse("z^2/conj(z)");
  CHECK(close(rational_extension_eval(f, {{0.0, 0.0}, 1.0}, {0.5, 0.0}), Complex{0.125, 0.0}));

  // General model with polynomial root promotes to P = conj(z), Q = 1.
  const FunctionModel cbar = parse("conj(z)");
  const Circle c{{0.7, 0.3}, 1.4};
  const Complex p{0.9, 0.1};
  const Complex expected = std::conj(c.center) + c.radius * c.radius / (p - c.center);
  CHECK(close(rational_extension_eval(cbar, c, p), expected));

  // Near the interior pole the substituted denominator is still well away
  // from zero at p = 1.8, while the pole itself sits at 1.5.
  CHECK(close(rational_extension_eval(f, {{2.0, 0.0}, 1.0}, {1.8, 0.0}),
              Complex{1.8 * 1.8, 0.0} / Complex{-3.0, 0.0}));
  CHECK_THROWS_AS(rational_extension_eval(f, {{2.0, 0.0}, 1.0}, {1.5, 0.0}), DomainError);
  CHECK_THROWS_AS(rational_extension_eval(f, {{2.0, 0.0}, 1.0}, {2.0, 0.0}), DomainError);
}

TEST_CASE("pole scan finds the interior pole of the counterexample") {
  const FunctionModel f = parse("z^2/conj(z)");
  const auto poles = rational_pole_scan(f, {{2.0, 0.0}, 1.0});
  REQUIRE(poles.size() == 1);
  CHECK(std::abs(poles[0].location - Complex{1.5, 0.0}) < 1e-8);

  CHECK(rational_pole_scan(f, {{0.3, 0.0}, 1.0}).empty());
  CHECK(rational_pole_scan(parse("z/1"), {{0.0, 0.0}, 1.0}).empty());
}

TEST_CASE("spectral and rational extensions agree for pole-free circles") {
  const FunctionModel f = parse("z^2/conj(z)");
  const Circle c{{0.25, -0.15}, 1.1};
  REQUIRE(rational_pole_scan(f, c).empty());
  const auto rep = extension_defect(f, c, 2048);
  REQUIRE(rep.defect < 1e-10);
  const auto sp = spectrum(sample_on_circle(f, c, 2048));
  auto rng = make_rng(41);
  for (int i = 0; i < 20; ++i) {
    const Complex p = c.center + random_complex(rng, 0.01, 0.8 * c.radius);
    const Complex a = spectral_extension_eval(sp, p).value;
    const Complex b = rational_extension_eval(f, c, p);
    CHECK(std::abs(a - b) < 1e-9);
  }
}

TEST_CASE("ray-scale invariance of the defect for ray-constant models") {
  const FunctionModel f = parse("let g(w)=w^3+0.5*w in g(z/abs(z))");
  auto rng = make_rng(43);
  for (int i = 0; i < 5; ++i) {
    const double t = uniform(rng, 0.3, 3.0);
    const Circle c{{0.4, 0.3}, 1.2};
    const Circle scaled{t * c.center, t * c.radius};
    const double d1 = extension_defect(f, c, 1024).defect;
    const double d2 = extension_defect(f, scaled, 1024).defect;
    CHECK(std::abs(d1 - d2) < 1e-12);
  }
}

TEST_CASE("zero boundary data reports a zero defect") {
  // (z-2)(conj(z)-2)-4... choose the bracket vanishing on the sampled circle:
  // f = (z-a)(conj(z)-conj(a)) - rho^2 is identically zero on b-Delta(a,rho)
  // and its samples are pure rounding noise.
  const FunctionModel f = parse("(z-2)*(conj(z)-2)-1");
  const auto rep = extension_defect(f, {{2.0, 0.0}, 1.0}, 1024);
  CHECK(rep.defect == 0.0);
  CHECK(rep.verdict == Verdict::extends);
}
