#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "circlex/circles.hpp"
#include "circlex/common.hpp"
#include "circlex/expr.hpp"

namespace circlex {

/// Parameters of the disc-automorphism ladder used for radius-one circles
/// centered at d e^{i alpha}: t = (1 - sqrt(1 - d^2))/d and the induced
/// Blaschke-square constant A = e^{2 i alpha} t^2.
struct MobiusParams {
  double d = 0.0;
  double t = 0.0;
  double alpha = 0.0;

  Complex blaschke_square() const { return std::polar(t * t, 2.0 * alpha); }
  static MobiusParams from(double d, double alpha);
};

/// t = (1 - sqrt(1 - d^2))/d, evaluated in the cancellation-free form
/// d / (1 + sqrt(1 - d^2)); satisfies 2t/(1+t^2) = d.  Requires 0 <= d < 1.
double t_from_d(double d);

/// Max residual over the boundary circle of the automorphism composition
/// (a + M(xi)) / (1 + a M(xi)) = (xi + t)/(1 + t xi) with
/// M(xi) = (xi - t)/(1 - t xi) and t = t_from_d(a).  Requires 0 < a < 1.
double mobius_composition_identity(double a, std::size_t samples = 1024);

/// Max residual over zeta on the unit circle of
/// g((a + zeta rho)/conj(a + zeta rho)) = g(zeta (zeta + a/rho)/(1 + (conj(a)/rho) zeta)),
/// the boundary transport of the line-constant lift f = g(z/conj(z)) on
/// b-Delta(a, rho).  Requires |a| < rho.
double line_boundary_transport(const FunctionModel& g, Complex a, double rho,
                               std::size_t samples = 1024);

struct RayTransport {
  std::vector<Complex> q;        // boundary samples q(zeta_k)
  BoundarySpectrum q_spectrum;   // their spectrum on the unit circle
};

/// Boundary function q(zeta) = f(e^{i alpha} sqrt(zeta (d+zeta)/(1+d zeta)))
/// with the square root lifted continuously along the sampled circle
/// (cumulative argument unwrapping, branch fixed by sqrt(1) = 1 at zeta = 1).
/// Requires a ray- or line-constant f, |d| < 1 and samples >= 1024.
RayTransport ray_boundary_transport(double alpha, double d, const FunctionModel& f,
                                    std::size_t samples = 2048);

/// Relative L2 mass of odd-index Fourier coefficients of g on the unit
/// circle; zero iff g is even (up to discretization).
double evenness_defect(const FunctionModel& g, std::size_t n = 1024);

struct GridSpec {
  double re0 = 0.0, re1 = 0.0;
  double im0 = 0.0, im1 = 0.0;
  double step = 0.0;
};

struct DefectCell {
  Complex center{};
  double defect = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::string error;  // non-empty when sampling failed; not fatal to the scan
};

struct DefectMap {
  double radius = 0.0;
  GridSpec grid{};
  std::size_t cols = 0, rows = 0;
  std::vector<DefectCell> cells;   // row-major, re fastest
  std::vector<Complex> minima;     // centers with verdict `extends`
};

/// Extension defect of f over a rectangular lattice of circle centers at a
/// fixed radius.  Cells evaluate independently; `workers` = 0 picks the
/// environment default.
DefectMap defect_scan(const FunctionModel& f, double radius, const GridSpec& grid,
                      std::size_t n = 4096, double tolerance = 1e-8,
                      std::size_t workers = 0);

/// f(z) = (z^2/conj(z)) [(z-a)(conj(z)-conj(a)) - rho^2] for |a| > rho:
/// continuous across 0, vanishes identically on b-Delta(a,rho), and extends
/// from every circle surrounding or passing through the origin.
FunctionModel make_vanishing_example(Complex a, double rho);

/// Product form (z^2/conj(z))^n prod_j [(z-a_j)(conj(z)-conj(a_j)) - rho_j^2]
/// over factors with |a_j| > rho_j; extends additionally from each
/// b-Delta(a_j, rho_j).
FunctionModel make_vanishing_product(const std::vector<std::pair<Complex, double>>& factors);

/// Ray-constant f(z) = Phi^{-1}(z/|z|) for the circle diffeomorphism
/// Phi(zeta) = (a + zeta)/|a + zeta|, 0 < a < 1, with Phi^{-1} in closed
/// form.  Extends from the radius-one circles centered at +-a and from no
/// other circle of radius one.
FunctionModel make_two_circle_example(double a);

/// The closed-form inverse used above: Phi^{-1}(u) = s u - a with
/// s = Re(a conj(u)) + sqrt(Re(a conj(u))^2 + 1 - a^2).
Complex circle_diffeo_inverse(double a, Complex u);

/// Ray-constant lift f(z) = g(z/|z|) of a boundary function g that is not
/// even; rejects numerically even g (evenness defect below 1e-10), since an
/// even g would make f extend from every circle surrounding the origin.
FunctionModel make_noneven_ray_example(const FunctionModel& g);

struct WitnessReport {
  bool consistent = false;
  double evenness = 0.0;
  DefectReport first{}, second{};
};

/// For a ray-constant f and two admissible radius-one circles (centers in
/// the unit disc, distinct and non-antipodal): if f extends from both, its
/// boundary restriction to the unit circle must be even.  `consistent` is
/// that implication at the given evenness tolerance.
WitnessReport evenness_witness(const FunctionModel& f, Circle c1, Circle c2,
                               double tolerance = 1e-10);

struct SubstitutionChain {
  Complex determined_c{};       // fitted Moebius constant
  Complex unimodular_factor{};  // fitted rotation; modulus 1 up to rounding
  double max_residual = 0.0;
  Complex candidate_conjugate{};  // (A2 - A1)/(1 - conj(A1) A2)
  Complex candidate_plain{};      // (A2 - A1)/(1 - A1 A2)
};

/// Closes the two-circle substitution chain numerically: with
/// W^2 = (Z^2 + A1)/(1 + conj(A1) Z^2), fits mu and C such that
/// (Z^2 + A2)/(1 + conj(A2) Z^2) = mu (W^2 + C)/(1 + conj(C) W^2) on the
/// sampled unit circle, and reports C against both closed-form candidates.
SubstitutionChain ray_substitution_chain(const MobiusParams& p1, const MobiusParams& p2,
                                         std::size_t samples = 512);

}  // namespace circlex
