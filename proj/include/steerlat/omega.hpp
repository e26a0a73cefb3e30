#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "steerlat/bases.hpp"
#include "steerlat/common.hpp"
#include "steerlat/majorization.hpp"

namespace steerlat::omega {

// Maximum over selections of L vectors (drawn across the bases, at most d
// per basis implicitly by construction) of the largest eigenvalue of the
// summed projector X = sum |v><v|.
struct OmegaResult {
  int L = 0;
  double value = 0.0;      // Omega_L
  double value_bar = 0.0;  // Omega_L / L
  // Chosen vectors as (basis, index) pairs, lexicographically smallest among
  // optimal selections, sorted ascending.
  std::vector<std::pair<int, int>> selection;
  CVector optimal_state;  // top eigenvector of the optimal X
};

struct SearchOptions {
  // Basis-relabelling symmetry reduction at the search root.  Unset = auto
  // (enabled when the set is detected mutually unbiased).  The returned
  // result is independent of this switch.
  std::optional<bool> symmetry_reduction;
  // Invoked from the search roughly every few million nodes.
  std::function<void(std::uint64_t nodes, double incumbent)> progress;
};

// Exact Omega_L by branch-and-bound over selections (OpenMP over root
// subtrees).  Analytic shortcuts: L=1 -> 1; L=2 -> 1 + max overlap;
// L > d(N-1) -> N with the lexicographically smallest selection.
OmegaResult omega_exact(const bases::BasisSet& bs, int L,
                        const SearchOptions& opts = {});

// Value of Omega_L only, skipping the deterministic tie-break pass that
// reconstructs the lexicographically smallest selection.  Same value as
// omega_exact; used by optimization loops that evaluate many sets.
double omega_value(const bases::BasisSet& bs, int L,
                   const SearchOptions& opts = {});

// Greedy lower estimate of Omega_L (best pair extended by maximal marginal
// gain).  Cheap screening surrogate for optimizers; never a certificate.
double omega_greedy(const bases::BasisSet& bs, int L);

// Omega_L for every L = 1..N*d.
std::vector<OmegaResult> omega_profile(const bases::BasisSet& bs,
                                       const SearchOptions& opts = {});

// The vector s(B) with components s_L = Omega_L - Omega_{L-1} (Omega_0 = 0),
// nonincreasing and summing to N; any admissible assemblage's aggregated
// distribution is majorized by it.
majorization::ProbVector ur_bound_vector(const bases::BasisSet& bs,
                                         const SearchOptions& opts = {});

// Exact two-basis Omega_L via the singular values of the cross-overlap
// block: the best selection maximizes 1 + sigma_max(O[I1, I2]) over splits.
OmegaResult omega_two_bases(const bases::Basis& b1, const bases::Basis& b2,
                            int L);

// Checks the balanced-split guess for two mutually unbiased bases against
// the exact search.  Reported, never assumed by any other code path.
struct ConjectureReport {
  int d = 0;
  int L = 0;
  double balanced_value = 0.0;
  double exact_value = 0.0;
  bool agrees = false;
};
ConjectureReport conjecture_check(int d, int L);

// Serial exhaustive enumeration over all C(N*d, L) selections.  Reference
// implementation for testing the search and the benchmark baseline.
OmegaResult enumerate_reference(const bases::BasisSet& bs, int L);

}  // namespace steerlat::omega
