#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "circlex/common.hpp"

namespace circlex {

struct PropertyResult {
  std::string name;
  bool pass = false;
  std::size_t trials = 0;
  double metric = 0.0;     // worst residual / failure count, per property
  double threshold = 0.0;  // bound the metric is held against
  std::string note;
};

/// Randomized verification of the plane/variety geometry: roundtrips of the
/// center formulas, the halfplane slice identity, the gap factorization,
/// component consistency, the boundary factorization with its right-angle
/// intersection, slab containment and the disc-deformation checks.
/// `tol` is the relative tolerance of the algebraic identities (default
/// 1e-10); thresholds that are fixed elsewhere (1e-9 root distance and
/// orthogonality) stay pinned.
std::vector<PropertyResult> run_geometry_suite(std::size_t trials, std::uint64_t seed,
                                               double tol = 1e-10);

/// Verification of the example families and boundary-transport identities:
/// the vanishing and product examples, the line-constant family, the
/// two-circle and non-even ray examples, the automorphism composition
/// identity, the parameter inverse identity, branch-lift consistency and
/// the two-circle substitution chain.
std::vector<PropertyResult> run_characterize_suite(std::size_t n, std::uint64_t seed);

inline bool all_pass(const std::vector<PropertyResult>& rs) {
  for (const auto& r : rs)
    if (!r.pass) return false;
  return true;
}

}  // namespace circlex
