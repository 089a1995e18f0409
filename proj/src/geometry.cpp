#include "circlex/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace circlex {

namespace {

double clamp01(double x) { return std::min(1.0, std::max(-1.0, x)); }

double second_radius(Complex a, double r) {
  return std::sqrt(std::abs(a) * std::abs(a) - r * r);
}

}  // namespace

void validate(const Annulus& a) {
  if (!(0.0 < a.r1 && a.r1 < a.r2))
    throw DomainError("annulus radii must satisfy 0 < r1 < r2");
}

bool lambda_contains(const VarietyPoint& p, Complex a, double R) {
  if (!(R > 0.0)) throw DomainError("variety radius must be positive");
  const double eq = std::abs((p.z - a) * (p.w - std::conj(a)) - R * R);
  if (eq >= 1e-10 * std::max(1.0, R * R)) return false;
  const double d = std::abs(p.z - a);
  return d > 0.0 && d < R;
}

Complex circle_through(const VarietyPoint& p, double R) {
  if (!(R > 0.0)) throw DomainError("variety radius must be positive");
  const Complex s = p.z - std::conj(p.w);
  const double m2 = std::norm(s);
  if (m2 == 0.0) throw DomainError("point lies on Sigma; no variety passes through it");
  // t = [sqrt(1 + 4R^2/|s|^2) - 1]/2, in the cancellation-free form.
  const double q = 4.0 * R * R / m2;
  const double t = q / (2.0 * (1.0 + std::sqrt(1.0 + q)));
  return p.z + t * s;
}

Complex perpendicular_slice_center(Complex z, double t, double phi, double R) {
  if (!(t > 0.0)) throw DomainError("slice parameter t must be positive");
  if (!(R > 0.0)) throw DomainError("variety radius must be positive");
  return z + std::sqrt(t * t + R * R) * std::polar(1.0, phi);
}

bool omega_contains(const VarietyPoint& p) { return std::abs(p.w) > std::abs(p.z); }

bool halfplane_criterion(Complex z, Complex zeta) {
  if (z == Complex{0.0, 0.0}) throw DomainError("halfplane criterion requires z != 0");
  return (std::conj(z) * zeta).real() < 0.0;
}

bool omega_annulus_contains(const VarietyPoint& p, const Annulus& A) {
  validate(A);
  if (p.on_sigma()) throw DomainError("point lies on Sigma");
  const double gamma = 0.5 * (A.r1 + A.r2);
  const Complex b = circle_through(p, gamma);
  const double d = std::abs(b - A.center);
  // The circle must surround the annulus center and stay inside Int A.
  return d < gamma && gamma - d > A.r1 && gamma + d < A.r2;
}

bool slab_containment_check(const Annulus& A, double delta, double M, std::size_t trials,
                            std::uint64_t seed) {
  validate(A);
  if (!(delta > 0.0) || !(M > 0.0)) throw DomainError("slab parameters must be positive");
  auto rng = make_rng(seed);
  for (std::size_t i = 0; i < trials; ++i) {
    const Complex z = std::sqrt(uniform(rng, 0.0, 1.0)) * delta * unit_complex(rng);
    const Complex w = uniform(rng, M, 10.0 * M) * unit_complex(rng);
    if (std::abs(w - std::conj(z)) < 1e-12) continue;  // grazing Sigma, resample-free skip
    if (!omega_annulus_contains({z, w}, A)) return false;
  }
  return true;
}

RegionLabel region_classify(Complex z, Complex a, double r) {
  if (!(r > 0.0)) throw DomainError("disc radius must be positive");
  if (!(std::abs(a) > r))
    throw DomainError("region classification requires |a| > r");
  const double r2 = second_radius(a, r);
  const double band1 = 1e-12 * std::max(1.0, r);
  const double band2 = 1e-12 * std::max(1.0, r2);
  const double da = std::abs(z - a);
  const double d0 = std::abs(z);
  if (std::abs(da - r) <= band1 || std::abs(d0 - r2) <= band2) return RegionLabel::boundary;
  const bool in_a = da < r;
  const bool in_0 = d0 < r2;
  if (in_a && in_0) return RegionLabel::D1;
  if (!in_a && !in_0) return RegionLabel::D2;
  if (in_0) return RegionLabel::D3;
  return RegionLabel::D4;
}

namespace {

// Left side |z-a|^2 (|w|^2 - |z|^2) with w = conj(a) + rho^2/(z-a), and the
// factored right side.
double gap_lhs(Complex z, Complex a, double rho) {
  const Complex w = std::conj(a) + rho * rho / (z - a);
  return std::norm(z - a) * (std::norm(w) - std::norm(z));
}

double gap_rhs(Complex z, Complex a, double rho) {
  const double f1 = std::norm(a) - rho * rho - std::norm(z);
  const double f2 = std::norm(z - a) - rho * rho;  // (z-a)(conj(z)-conj(a)) is real
  return f1 * f2;
}

}  // namespace

double omega_gap_factorization_residual(Complex z, Complex a, double rho) {
  if (z == a) throw DomainError("the identity is undefined at z = a");
  return std::abs(gap_lhs(z, a, rho) - gap_rhs(z, a, rho));
}

double omega_gap_factorization_scale(Complex z, Complex a, double rho) {
  if (z == a) throw DomainError("the identity is undefined at z = a");
  return std::max({1.0, std::abs(gap_lhs(z, a, rho)), std::abs(gap_rhs(z, a, rho)),
                   std::norm(z - a) * (std::norm(z) + rho * rho)});
}

std::vector<Circle> variety_omega_boundary(Complex a, double rho) {
  if (!(rho > 0.0)) throw DomainError("circle radius must be positive");
  const double m = std::abs(a);
  if (m == rho)
    throw DomainError("|a| = rho is degenerate: the second boundary circle collapses "
                      "to the origin and the factorization does not apply");
  if (m < rho) return {Circle{a, rho}};
  return {Circle{a, rho}, Circle{Complex{0.0, 0.0}, second_radius(a, rho)}};
}

namespace {

double distance_to_circles(Complex z, const std::vector<Circle>& circles) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : circles)
    best = std::min(best, std::abs(std::abs(z - c.center) - c.radius));
  return best;
}

// Intersection points of two circles known to meet.
std::vector<Complex> circle_intersections(const Circle& c1, const Circle& c2) {
  const Complex d = c2.center - c1.center;
  const double dist = std::abs(d);
  if (dist == 0.0) return {};
  const double x = (dist * dist + c1.radius * c1.radius - c2.radius * c2.radius) / (2.0 * dist);
  const double h2 = c1.radius * c1.radius - x * x;
  if (h2 < 0.0) return {};
  const double h = std::sqrt(h2);
  const Complex u = d / dist;
  const Complex base = c1.center + x * u;
  const Complex off = h * Complex{-u.imag(), u.real()};
  if (h == 0.0) return {base};
  return {base + off, base - off};
}

}  // namespace

FactorizationCheck variety_omega_boundary_verify(Complex a, double rho,
                                                 std::size_t directions,
                                                 std::size_t steps_per_ray) {
  const auto circles = variety_omega_boundary(a, rho);
  FactorizationCheck out;

  const double s_max = std::abs(a) + rho + 0.5;
  const auto h = [&](double s, Complex e) {
    const Complex z = s * e;
    return std::abs(std::conj(a) + rho * rho / (z - a)) - s;
  };

  for (std::size_t d = 0; d < directions; ++d) {
    const Complex e = std::polar(1.0, 2.0 * kPi * static_cast<double>(d) /
                                          static_cast<double>(directions));
    double prev_s = 0.0;
    double prev_h = 0.0;
    bool have_prev = false;
    for (std::size_t i = 1; i <= steps_per_ray; ++i) {
      const double s = s_max * static_cast<double>(i) / static_cast<double>(steps_per_ray);
      if (std::abs(s * e - a) < 1e-9) {  // substitution pole on this ray
        have_prev = false;
        continue;
      }
      const double v = h(s, e);
      if (have_prev && ((prev_h < 0.0 && v > 0.0) || (prev_h > 0.0 && v < 0.0))) {
        double lo = prev_s, hi = s, flo = prev_h;
        for (int it = 0; it < 80; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = h(mid, e);
          if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        const Complex root = 0.5 * (lo + hi) * e;
        ++out.roots_found;
        out.max_root_distance = std::max(out.max_root_distance,
                                         distance_to_circles(root, circles));
      }
      prev_s = s;
      prev_h = v;
      have_prev = true;
    }
  }

  if (circles.size() == 2) {
    out.intersections = circle_intersections(circles[0], circles[1]);
    for (const Complex& x : out.intersections) {
      const Complex t1 = Complex{0.0, 1.0} * (x - circles[0].center);
      const Complex t2 = Complex{0.0, 1.0} * x;
      const double dot = std::abs((t1 * std::conj(t2)).real()) /
                         (std::abs(t1) * std::abs(t2));
      out.max_tangent_dot = std::max(out.max_tangent_dot, dot);
    }
  }
  return out;
}

ComponentLabel v_component_membership(const VarietyPoint& p, Complex a, double r) {
  const double eq = std::abs((p.z - a) * (p.w - std::conj(a)) - r * r);
  if (eq > 1e-10 * std::max(1.0, r * r)) return ComponentLabel::none;
  switch (region_classify(p.z, a, r)) {
    case RegionLabel::D1: return ComponentLabel::V1;
    case RegionLabel::D2: return ComponentLabel::V2;
    case RegionLabel::D3: return ComponentLabel::V3;
    case RegionLabel::D4: return ComponentLabel::V4;
    case RegionLabel::boundary: return ComponentLabel::none;
  }
  return ComponentLabel::none;
}

DeformationBoundaryReport deformation_boundary_check(Complex b, double r, double t,
                                                     std::size_t samples) {
  if (!(std::abs(b) > r) || !(r > 0.0))
    throw DomainError("deformation checks require |b| > r > 0");
  const double r2 = second_radius(b, r);
  const double beta = std::arg(b);
  const double half1 = std::acos(clamp01(r / std::abs(b)));
  const double half2 = std::acos(clamp01(r2 / std::abs(b)));
  const std::size_t m = std::max<std::size_t>(samples / 2, 8);

  DeformationBoundaryReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  const auto visit = [&](Complex z) {
    const Complex w = std::conj(b) + r * r / (z - b);
    rep.min_margin = std::min(rep.min_margin, std::abs(w) - t * std::abs(z));
  };
  for (std::size_t j = 0; j < m; ++j) {
    const double u = (static_cast<double>(j) + 0.5) / static_cast<double>(m);
    // Arc of b-Delta(b,r) inside the origin-centered disc.
    visit(b + std::polar(r, beta + kPi + half1 * (2.0 * u - 1.0)));
    // Arc of b-Delta(0, r2) inside Delta(b,r).
    visit(std::polar(r2, beta + half2 * (2.0 * u - 1.0)));
  }
  rep.all_in_omega = rep.min_margin > 0.0;
  return rep;
}

bool deformation_origin_check(Complex b, double r) {
  if (!(std::abs(b) > r) || !(r > 0.0))
    throw DomainError("deformation checks require |b| > r > 0");
  const Complex zstar = b - r * r / std::conj(b);
  const double r2 = second_radius(b, r);
  const double cushion = 1e-12;
  return std::abs(zstar - b) <= r + cushion && std::abs(zstar) <= r2 + cushion;
}

}  // namespace circlex
