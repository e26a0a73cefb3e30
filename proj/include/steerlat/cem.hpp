#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "steerlat/bases.hpp"
#include "steerlat/states.hpp"
#include "steerlat/thresholds.hpp"

namespace steerlat::cem {

struct CEMConfig {
  int population = 200;
  double elite_fraction = 0.1;  // in (0,1); resulting elite count >= 2
  double smoothing = 0.7;       // in (0,1]: weight of the refit moments
  int max_iters = 300;
  double init_stddev = 1.0;
  std::uint64_t seed = 0;
  int stall_patience = 30;  // generations without 1e-9 improvement
  int restarts = 3;         // independent runs with derived seeds
};

struct CEMResult {
  bases::BasisSet best_basis_set;
  double best_omega_bar = 0;
  // Global best-so-far after each generation, all restarts concatenated;
  // nonincreasing by construction.
  std::vector<double> history;
  std::uint64_t evaluations = 0;  // exact objective evaluations
};

enum class Objective { omega_bar, tr_x2_relaxation };

// Columns of exp(i sum_mu params_mu pi_mu); params has length d^2-1.
bases::Basis parametrize_basis(const RVector& params,
                               const states::GeneratorBasis& gens);

// Minimize Omega_L/L (or the sqrt(max Tr[X^2])/L relaxation) over N-basis
// measurement settings by the cross-entropy method in the N(d^2-1)-dim
// generator coefficient space.  Bit-reproducible for a fixed seed
// independently of the worker count; the reported best is re-verified by
// an independent exact evaluation.
CEMResult cem_minimize(int d, int n, int L, const CEMConfig& config,
                       Objective objective = Objective::omega_bar);

struct CurvePoint {
  int n = 0;
  thresholds::ThresholdReport report;
  CEMResult result;
};

// Optimized steering thresholds over a range of setting counts;
// family isotropic uses L=N, werner L=N(d-1).
std::vector<CurvePoint> threshold_curve(states::Family family, int d,
                                        std::pair<int, int> n_range,
                                        const CEMConfig& config);

}  // namespace steerlat::cem
