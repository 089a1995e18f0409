#include "circlex/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "circlex/characterize.hpp"
#include "circlex/circles.hpp"
#include "circlex/expr.hpp"
#include "circlex/geometry.hpp"

namespace circlex {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

PropertyResult residual_result(std::string name, std::size_t trials, double worst,
                               double threshold, std::string note = {}) {
  PropertyResult r;
  r.name = std::move(name);
  r.trials = trials;
  r.metric = worst;
  r.threshold = threshold;
  r.pass = worst < threshold;
  r.note = std::move(note);
  return r;
}

VarietyPoint random_off_sigma(std::mt19937_64& rng) {
  for (;;) {
    const Complex z = complex_in_box(rng, -3.0, 3.0);
    const Complex w = complex_in_box(rng, -3.0, 3.0);
    if (std::abs(z - std::conj(w)) > 1e-3) return {z, w};
  }
}

}  // namespace

std::vector<PropertyResult> run_geometry_suite(std::size_t trials, std::uint64_t seed,
                                               double tol) {
  std::vector<PropertyResult> out;
  auto rng = make_rng(seed);

  {  // Center formula roundtrip: the found circle carries the point.
    double worst = 0.0;
    std::size_t misses = 0;
    for (std::size_t i = 0; i < trials; ++i) {
      const VarietyPoint p = random_off_sigma(rng);
      const double R = uniform(rng, 0.1, 3.0);
      const Complex a = circle_through(p, R);
      if (!lambda_contains(p, a, R)) ++misses;
      const double rel =
          std::abs((p.z - a) * (p.w - std::conj(a)) - R * R) / std::max(1.0, R * R);
      worst = std::max(worst, rel);
    }
    auto r = residual_result("lambda_roundtrip", trials, worst, tol,
                             misses ? std::to_string(misses) + " membership misses" : "");
    r.pass = r.pass && misses == 0;
    out.push_back(std::move(r));
  }

  {  // Recovered parameter t reproduces the radius.
    double worst = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
      const VarietyPoint p = random_off_sigma(rng);
      const double R = uniform(rng, 0.1, 3.0);
      const Complex a = circle_through(p, R);
      const double s = std::abs(p.z - std::conj(p.w));
      const double t = std::abs(a - p.z) / s;
      worst = std::max(worst, std::abs(R * R - t * (t + 1.0) * s * s) / std::max(1.0, R * R));
    }
    out.push_back(residual_result("parametric_t_recovery", trials, worst, tol));
  }

  {  // Perpendicular slice: closed form agrees with the generic center formula.
    double worst = 0.0;
    std::size_t misses = 0;
    for (std::size_t i = 0; i < trials; ++i) {
      const Complex z = complex_in_box(rng, -2.0, 2.0);
      const double t = uniform(rng, 0.05, 2.0);
      const double phi = uniform(rng, 0.0, 2.0 * kPi);
      const double R = uniform(rng, 0.1, 3.0);
      const Complex a = perpendicular_slice_center(z, t, phi, R);
      const VarietyPoint p{z + t * std::polar(1.0, phi),
                           std::conj(z) - t * std::polar(1.0, -phi)};
      if (!lambda_contains(p, a, R)) ++misses;
      worst = std::max(worst, std::abs(circle_through(p, R) - a) / std::max(1.0, std::abs(a)));
    }
    auto r = residual_result("perpendicular_slice_consistency", trials, worst, tol,
                             misses ? std::to_string(misses) + " membership misses" : "");
    r.pass = r.pass && misses == 0;
    out.push_back(std::move(r));
  }

  {  // Halfplane criterion matches membership of the slice point.
    std::size_t mismatches = 0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < trials; ++i) {
      const Complex z = complex_in_box(rng, -2.0, 2.0);
      const Complex zeta = complex_in_box(rng, -2.0, 2.0);
      if (std::abs(z) < 1e-9 || std::abs(zeta) < 1e-12) continue;
      // Skip draws inside the rounding band of the boundary line.
      if (std::abs((std::conj(z) * zeta).real()) < 1e-12 * std::abs(z) * std::abs(zeta))
        continue;
      ++used;
      const VarietyPoint p{z + zeta, std::conj(z) - std::conj(zeta)};
      if (halfplane_criterion(z, zeta) != omega_contains(p)) ++mismatches;
    }
    PropertyResult r;
    r.name = "halfplane_slice_identity";
    r.trials = used;
    r.metric = static_cast<double>(mismatches);
    r.threshold = 1.0;
    r.pass = mismatches == 0;
    out.push_back(std::move(r));
  }

  {  // Gap factorization identity.
    double worst = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
      const Complex z = complex_in_box(rng, -3.0, 3.0);
      Complex a = complex_in_box(rng, -3.0, 3.0);
      if (std::abs(z - a) < 1e-6) a += Complex{0.5, 0.0};
      const double rho = uniform(rng, 0.1, 3.0);
      worst = std::max(worst, omega_gap_factorization_residual(z, a, rho) /
                                  omega_gap_factorization_scale(z, a, rho));
    }
    out.push_back(residual_result("omega_gap_identity", trials, worst, tol));
  }

  {  // Component labels sit on the right side of Omega.
    std::size_t bad = 0;
    std::size_t labeled = 0;
    for (std::size_t i = 0; i < trials; ++i) {
      const double r = uniform(rng, 0.1, 1.5);
      const Complex a = std::polar(r * uniform(rng, 1.05, 3.0), uniform(rng, 0.0, 2.0 * kPi));
      const Complex z = a + random_complex(rng, 0.05 * r, 4.0 * r);
      if (std::abs(z - a) < 1e-9) continue;
      const VarietyPoint p{z, std::conj(a) + r * r / (z - a)};
      const ComponentLabel label = v_component_membership(p, a, r);
      if (label == ComponentLabel::none) continue;
      ++labeled;
      const bool inside = omega_contains(p);
      const bool strictly_outside = std::abs(p.w) < std::abs(p.z);
      if (label == ComponentLabel::V3 || label == ComponentLabel::V4) {
        if (!inside) ++bad;
      } else {
        if (!strictly_outside) ++bad;
      }
    }
    PropertyResult r;
    r.name = "component_consistency";
    r.trials = labeled;
    r.metric = static_cast<double>(bad);
    r.threshold = 1.0;
    r.pass = bad == 0 && labeled > trials / 4;
    out.push_back(std::move(r));
  }

  {  // Boundary factorization: ray roots land on the two circles, which meet
     // at right angles.
    const std::size_t cases = std::max<std::size_t>(50, trials / 200);
    double worst_dist = 0.0;
    double worst_dot = 0.0;
    std::size_t total_roots = 0;
    for (std::size_t i = 0; i < cases; ++i) {
      const double rho = uniform(rng, 0.2, 1.5);
      const Complex a = std::polar(rho * uniform(rng, 1.1, 3.0), uniform(rng, 0.0, 2.0 * kPi));
      const auto check = variety_omega_boundary_verify(a, rho, 720, 1024);
      worst_dist = std::max(worst_dist, check.max_root_distance);
      worst_dot = std::max(worst_dot, check.max_tangent_dot);
      total_roots += check.roots_found;
    }
    auto r = residual_result("boundary_factorization", cases,
                             std::max(worst_dist, worst_dot), 1e-9,
                             std::to_string(total_roots) + " roots located");
    r.pass = r.pass && total_roots > cases;
    out.push_back(std::move(r));
  }

  {  // Slab containment inside Omega(A(0,1,3)).
    const Annulus A{Complex{0.0, 0.0}, 1.0, 3.0};
    const bool ok = slab_containment_check(A, 0.05, 50.0, std::max<std::size_t>(trials, 100),
                                           seed ^ 0x51abu);
    PropertyResult r;
    r.name = "slab_containment";
    r.trials = std::max<std::size_t>(trials, 100);
    r.metric = ok ? 0.0 : 1.0;
    r.threshold = 1.0;
    r.pass = ok;
    r.note = "delta=0.05 M=50 inside A(0,1,3)";
    out.push_back(std::move(r));
  }

  {  // Deformed disc boundaries stay inside Omega until t = 1.
    bool ok = true;
    double min_margin = std::numeric_limits<double>::infinity();
    for (const double t : {0.0, 0.25, 0.5, 0.75, 0.99}) {
      const auto rep = deformation_boundary_check({2.0, 0.0}, 1.0, t, 1024);
      ok = ok && rep.all_in_omega && rep.min_margin > 0.0;
      min_margin = std::min(min_margin, rep.min_margin);
    }
    PropertyResult r;
    r.name = "deformation_boundary";
    r.trials = 5;
    r.metric = min_margin;
    r.threshold = 0.0;
    r.pass = ok;
    r.note = "b=2 r=1, t in {0,0.25,0.5,0.75,0.99}; min margin " + fmt(min_margin);
    out.push_back(std::move(r));
  }

  {  // The squeezed disc always captures the origin.
    std::size_t bad = 0;
    const std::size_t cases = 100;
    for (std::size_t i = 0; i < cases; ++i) {
      const double r = uniform(rng, 0.1, 2.0);
      const Complex b = std::polar(r * uniform(rng, 1.05, 4.0), uniform(rng, 0.0, 2.0 * kPi));
      if (!deformation_origin_check(b, r)) ++bad;
    }
    PropertyResult r;
    r.name = "deformation_origin";
    r.trials = cases;
    r.metric = static_cast<double>(bad);
    r.threshold = 1.0;
    r.pass = bad == 0;
    out.push_back(std::move(r));
  }

  return out;
}

namespace {

Circle random_circle_surrounding_origin(std::mt19937_64& rng, double max_center_ratio) {
  const double rho = uniform(rng, 0.3, 2.5);
  const Complex a =
      std::polar(rho * uniform(rng, 0.0, max_center_ratio), uniform(rng, 0.0, 2.0 * kPi));
  return {a, rho};
}

Circle random_circle_through_origin(std::mt19937_64& rng) {
  const double rho = uniform(rng, 0.3, 2.0);
  return {std::polar(rho, uniform(rng, 0.0, 2.0 * kPi)), rho};
}

}  // namespace

std::vector<PropertyResult> run_characterize_suite(std::size_t n, std::uint64_t seed) {
  std::vector<PropertyResult> out;
  auto rng = make_rng(seed);

  {  // Vanishing example: zero on its circle, extendible from circles
     // surrounding or passing through the origin.
    const Complex a{2.0, 0.0};
    const double rho = 1.0;
    const FunctionModel f = make_vanishing_example(a, rho);
    double max_on_circle = 0.0;
    for (std::size_t k = 0; k < 1024; ++k) {
      const Complex z = a + std::polar(rho, 2.0 * kPi * static_cast<double>(k) / 1024.0);
      max_on_circle = std::max(max_on_circle, std::abs(f.eval(z)));
    }
    const double scale = std::pow(1.0 + std::abs(a) + rho, 4);
    bool ok = max_on_circle < 1e-12 * scale;
    double worst_defect = extension_defect(f, {a, rho}, n).defect;
    ok = ok && extension_defect(f, {a, rho}, n).verdict == Verdict::extends;
    for (int i = 0; i < 10; ++i) {
      const double d = extension_defect(f, random_circle_surrounding_origin(rng, 0.9), n).defect;
      worst_defect = std::max(worst_defect, d);
    }
    for (int i = 0; i < 5; ++i) {
      const double d = extension_defect(f, random_circle_through_origin(rng), n).defect;
      worst_defect = std::max(worst_defect, d);
    }
    auto r = residual_result("vanishing_example", 16, worst_defect, 1e-10,
                             "max |f| on its circle " + fmt(max_on_circle));
    r.pass = r.pass && ok;
    out.push_back(std::move(r));
  }

  {  // Product form: extends from each factor circle, fails elsewhere.
    const std::vector<std::pair<Complex, double>> factors{{{2.0, 0.0}, 1.0},
                                                          {{-3.0, 0.0}, 1.0}};
    const FunctionModel f = make_vanishing_product(factors);
    double worst = 0.0;
    for (const Circle c : {Circle{{2.0, 0.0}, 1.0}, Circle{{-3.0, 0.0}, 1.0},
                           Circle{{0.2, 0.0}, 1.0}, Circle{{0.5, 0.0}, 0.5}})
      worst = std::max(worst, extension_defect(f, c, n).defect);
    const double off_defect = extension_defect(f, {{2.0, 0.0}, 0.3}, n).defect;

    const FunctionModel single = make_vanishing_product({factors[0]});
    const FunctionModel reference = make_vanishing_example(factors[0].first, factors[0].second);
    double reduction = 0.0;
    for (int i = 0; i < 64; ++i) {
      const Complex z = random_complex(rng, 0.2, 4.0);
      reduction = std::max(reduction, std::abs(single.eval(z) - reference.eval(z)) /
                                          std::max(1.0, std::abs(reference.eval(z))));
    }
    auto r = residual_result("vanishing_product", 5, std::max(worst, reduction), 1e-10,
                             "defect on b-Delta(2,0.3): " + fmt(off_defect));
    r.pass = r.pass && off_defect > 0.01;
    out.push_back(std::move(r));
  }

  {  // Line-constant lifts extend from every circle surrounding the origin.
    double worst_defect = 0.0;
    double worst_transport = 0.0;
    for (const char* text : {"w", "w^2", "w^3+0.2*w"}) {
      const FunctionModel g = parse_single_variable(text);
      const FunctionModel f = FunctionModel::line_constant("g", g);
      for (int i = 0; i < 25; ++i) {
        const Circle c = random_circle_surrounding_origin(rng, 0.8);
        worst_defect = std::max(worst_defect, extension_defect(f, c, n).defect);
      }
      worst_transport = std::max(worst_transport,
                                 line_boundary_transport(g, {0.3, 0.0}, 1.0, 1024));
      const Circle c = random_circle_surrounding_origin(rng, 0.8);
      worst_transport = std::max(worst_transport,
                                 line_boundary_transport(g, c.center, c.radius, 1024));
    }
    auto r = residual_result("line_constant_family", 75, worst_defect, 1e-9,
                             "worst transport residual " + fmt(worst_transport));
    r.pass = r.pass && worst_transport < 1e-13;
    out.push_back(std::move(r));
  }

  {  // Automorphism composition identity.
    double worst = 0.0;
    for (int i = 0; i < 20; ++i)
      worst = std::max(worst, mobius_composition_identity(uniform(rng, 0.05, 0.95), 1024));
    out.push_back(residual_result("mobius_composition", 20, worst, 1e-13));
  }

  {  // Parameter map inverse identity 2t/(1+t^2) = d.
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double d = uniform(rng, 0.0, 0.999999);
      const double t = t_from_d(d);
      worst = std::max(worst, std::abs(2.0 * t / (1.0 + t * t) - d));
    }
    out.push_back(residual_result("t_inverse_identity", 1000, worst, 1e-14));
  }

  {  // Branch-lifted transport reproduces the direct circle defect.
    const FunctionModel f = make_two_circle_example(0.5);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double d = uniform(rng, 0.0, 0.85);
      const double alpha = uniform(rng, 0.0, 2.0 * kPi);
      const auto transport = ray_boundary_transport(alpha, d, f, n);
      const auto direct = extension_defect(f, {std::polar(d, alpha), 1.0}, n);
      worst = std::max(worst,
                       std::abs(transport.q_spectrum.defect() - direct.defect));
    }
    out.push_back(residual_result("ray_transport_consistency", 10, worst, 1e-10));
  }

  {  // Two-circle example: inverse diffeomorphism and the two extending circles.
    const double a = 0.5;
    const FunctionModel f = make_two_circle_example(a);
    double worst_inv = 0.0;
    double worst_boundary = 0.0;
    for (std::size_t k = 0; k < 1024; ++k) {
      const Complex zeta = std::polar(1.0, 2.0 * kPi * static_cast<double>(k) / 1024.0);
      const Complex u = (a + zeta) / std::abs(a + zeta);
      worst_inv = std::max(worst_inv,
                           std::abs((a + circle_diffeo_inverse(a, u)) /
                                        std::abs(a + circle_diffeo_inverse(a, u)) -
                                    u));
      worst_boundary = std::max(worst_boundary, std::abs(f.eval(a + zeta) - zeta));
    }
    const double d_plus = extension_defect(f, {{a, 0.0}, 1.0}, n).defect;
    const double d_minus = extension_defect(f, {{-a, 0.0}, 1.0}, n).defect;
    const double d_off = extension_defect(f, {{0.2, 0.0}, 1.0}, n).defect;
    auto r = residual_result("two_circle_example", 1024,
                             std::max({worst_inv, worst_boundary, d_plus, d_minus}), 1e-10,
                             "control defect at center 0.2: " + fmt(d_off));
    r.pass = worst_inv < 1e-13 && worst_boundary < 1e-12 && d_plus < 1e-10 &&
             d_minus < 1e-10 && d_off > 0.01;
    out.push_back(std::move(r));
  }

  {  // Non-even ray lift: extends from the unit circle only; even g rejected.
    const FunctionModel g = parse_single_variable("w^3");
    const FunctionModel f = make_noneven_ray_example(g);
    const double d0 = extension_defect(f, {{0.0, 0.0}, 1.0}, n).defect;
    const double d1 = extension_defect(f, {{0.4, 0.0}, 1.0}, n).defect;
    bool rejected = false;
    try {
      make_noneven_ray_example(parse_single_variable("w^2"));
    } catch (const DomainError&) {
      rejected = true;
    }
    auto r = residual_result("noneven_ray_example", 2, d0, 1e-10,
                             "defect at center 0.4: " + fmt(d1));
    r.pass = r.pass && d1 > 0.01 && rejected;
    out.push_back(std::move(r));
  }

  {  // Evenness defect reference values.
    const double e1 = evenness_defect(parse_single_variable("w^2"), 1024);
    const double e2 = evenness_defect(parse_single_variable("w"), 1024);
    const double e3 = evenness_defect(parse_single_variable("w^2+0.5*w^3"), 1024);
    const double worst = std::max({e1, std::abs(e2 - 1.0), std::abs(e3 - std::sqrt(0.2))});
    out.push_back(residual_result("evenness_reference", 3, worst, 1e-12));
  }

  {  // Substitution chain closes with the fitted constant.
    double worst_res = 0.0;
    double worst_conj_gap = 0.0;
    double worst_plain_gap = 0.0;
    double worst_mu = 0.0;
    for (int i = 0; i < 10; ++i) {
      const auto p1 = MobiusParams::from(uniform(rng, 0.1, 0.9), uniform(rng, 0.0, 2.0 * kPi));
      const auto p2 = MobiusParams::from(uniform(rng, 0.1, 0.9), uniform(rng, 0.0, 2.0 * kPi));
      const auto chain = ray_substitution_chain(p1, p2, 512);
      worst_res = std::max(worst_res, chain.max_residual);
      worst_conj_gap = std::max(worst_conj_gap,
                                std::abs(chain.determined_c - chain.candidate_conjugate));
      worst_plain_gap = std::max(worst_plain_gap,
                                 std::abs(chain.determined_c - chain.candidate_plain));
      worst_mu = std::max(worst_mu, std::abs(std::abs(chain.unimodular_factor) - 1.0));
    }
    auto r = residual_result("substitution_chain", 10, worst_res, 1e-11,
                             "determined C vs conjugate-form candidate: " + fmt(worst_conj_gap) +
                                 ", vs plain-form candidate: " + fmt(worst_plain_gap) +
                                 ", | |mu|-1 |: " + fmt(worst_mu));
    r.pass = r.pass && worst_mu < 1e-11;
    out.push_back(std::move(r));
  }

  {  // Evenness witness on the spec'd configurations.
    const FunctionModel h = parse_single_variable("w");
    const FunctionModel line_f = FunctionModel::line_constant("h", h);
    const auto w1 = evenness_witness(line_f, {{0.3, 0.0}, 1.0}, {{-0.1, 0.25}, 1.0});
    const FunctionModel f = make_two_circle_example(0.5);
    const auto w2 = evenness_witness(f, {{0.5, 0.0}, 1.0}, {{0.3, 0.0}, 1.0});
    bool rejected = false;
    try {
      evenness_witness(f, {{0.5, 0.0}, 1.0}, {{-0.5, 0.0}, 1.0});
    } catch (const DomainError&) {
      rejected = true;
    }
    PropertyResult r;
    r.name = "evenness_witness";
    r.trials = 3;
    r.metric = w1.evenness;
    r.threshold = 1e-10;
    r.pass = w1.consistent && w1.evenness < 1e-10 && w2.consistent && rejected &&
             w2.second.verdict != Verdict::extends;
    r.note = "line-constant lift evenness " + fmt(w1.evenness);
    out.push_back(std::move(r));
  }

  return out;
}

}  // namespace circlex
