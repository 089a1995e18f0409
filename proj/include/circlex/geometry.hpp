#pragma once

#include <cstddef>
#include <vector>

#include "circlex/circles.hpp"
#include "circlex/common.hpp"

namespace circlex {

/// A point (z, w) of C^2.  The totally real plane Sigma = {(z, conj(z))}
/// carries plane functions as F(z, conj(z)).
struct VarietyPoint {
  Complex z{};
  Complex w{};

  bool on_sigma() const { return w == std::conj(z); }
};

/// Closed annulus r1 <= |zeta - center| <= r2.
struct Annulus {
  Complex center{};
  double r1 = 0.0;
  double r2 = 0.0;
};

void validate(const Annulus& a);  // throws DomainError unless 0 < r1 < r2

/// Membership in Lambda_{a,R} = {(z,w): (z-a)(w-conj(a)) = R^2,
/// 0 < |z-a| < R}, with relative tolerance 1e-10 on the defining equation.
bool lambda_contains(const VarietyPoint& p, Complex a, double R);

/// Center a of the unique Lambda_{a,R} through a point off Sigma:
/// a = z + [sqrt(1 + 4R^2/|z-conj(w)|^2) - 1]/2 * (z - conj(w)).
Complex circle_through(const VarietyPoint& p, double R);

/// Center of the variety slicing the plane perpendicular to Sigma at z:
/// (z + t e^{i phi}, conj(z) - t e^{-i phi}) lies on Lambda_{a,R} exactly
/// for a = z + sqrt(t^2 + R^2) e^{i phi}.
Complex perpendicular_slice_center(Complex z, double t, double phi, double R);

/// Omega = {(z,w): |w| > |z|}, the union of the Lambda over circles
/// surrounding the origin.
bool omega_contains(const VarietyPoint& p);

/// Slice criterion: (z + zeta, conj(z) - conj(zeta)) lies in Omega iff
/// Re(conj(z) * zeta) < 0.  Requires z != 0.
bool halfplane_criterion(Complex z, Complex zeta);

/// Membership in Omega(A), the union of Lambda_{b,gamma} over circles
/// b-Delta(b,gamma) inside Int A surrounding the annulus center, using the
/// disjoint-union decomposition with gamma = (r1+r2)/2.
bool omega_annulus_contains(const VarietyPoint& p, const Annulus& A);

/// Randomized check that {|z| <= delta, |w| >= M} (with |w| sampled up to
/// 10 M) sits inside Omega(A) for an annulus centered at the origin.
bool slab_containment_check(const Annulus& A, double delta, double M, std::size_t trials,
                            std::uint64_t seed);

enum class RegionLabel { D1, D2, D3, D4, boundary };

/// Classifies z against the two discs Delta(a,r) and
/// Delta(0, sqrt(|a|^2 - r^2)); requires |a| > r.  Points within 1e-12 of
/// either bounding circle report `boundary`.
RegionLabel region_classify(Complex z, Complex a, double r);

/// Residual of the algebraic identity factorizing the gap |w|^2 - |z|^2 on
/// the variety w = conj(a) + rho^2/(z-a):
///   |z-a|^2 (|w|^2 - |z|^2)  =  (|a|^2 - rho^2 - |z|^2)((z-a)(conj(z)-conj(a)) - rho^2).
/// Returns the absolute difference of the two sides (mathematically zero).
double omega_gap_factorization_residual(Complex z, Complex a, double rho);

/// Magnitude scale of the two sides above, for relative comparisons.
double omega_gap_factorization_scale(Complex z, Complex a, double rho);

/// The set where the variety V_{a,rho} meets the boundary of Omega:
/// the circle itself when |a| < rho, and additionally
/// b-Delta(0, sqrt(|a|^2 - rho^2)) when |a| > rho.  The tangent case
/// |a| = rho is rejected.
std::vector<Circle> variety_omega_boundary(Complex a, double rho);

struct FactorizationCheck {
  std::size_t roots_found = 0;
  double max_root_distance = 0.0;   // worst distance of a found root to the circles
  double max_tangent_dot = 0.0;     // worst |t1 . t2| at circle intersections
  std::vector<Complex> intersections;
};

/// Ray search for roots of |conj(a) + rho^2/(z-a)| = |z| along `directions`
/// rays from the origin, confirming every root lies on the circles returned
/// by variety_omega_boundary, plus the right-angle check at the circle
/// intersections when |a| > rho.
FactorizationCheck variety_omega_boundary_verify(Complex a, double rho,
                                                 std::size_t directions = 720,
                                                 std::size_t steps_per_ray = 1024);

enum class ComponentLabel { V1, V2, V3, V4, none };

/// Component of V_{a,r} relative to Omega for a point on the variety
/// (within tolerance); `none` off the variety or on a component boundary.
ComponentLabel v_component_membership(const VarietyPoint& p, Complex a, double r);

struct DeformationBoundaryReport {
  bool all_in_omega = false;
  double min_margin = 0.0;  // min over samples of |w| - |t z|
};

/// Samples the boundary of D1(b,r) (both circular arcs), maps z to
/// (t z, conj(b) + r^2/(z-b)) and reports whether every image point has
/// |w| > |t z| together with the minimal margin.
DeformationBoundaryReport deformation_boundary_check(Complex b, double r, double t,
                                                     std::size_t samples = 512);

/// True when z* = b - r^2/conj(b), the unique plane point the squeezed
/// disc maps to (0, 0), lies in the closed region D1(b,r).
bool deformation_origin_check(Complex b, double r);

}  // namespace circlex
