#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "steerlat/bases.hpp"

namespace steerlat::thresholds {

// Thresholds at or beyond 1 are reported with this cap flag set: the bound
// cannot detect the family at any noise level.
inline constexpr double kCapTolerance = 1e-8;

struct ThresholdReport {
  std::string family;  // "isotropic" | "werner" | "two_qubit_werner"
  int d = 0;
  int n = 0;
  std::string bound_source;  // "exact" | "gamma" | "theta" | "lambda"
  double value = 0;
  bool capped = false;
  std::optional<double> lhs_reference;
};

// Noise thresholds from a bound omega_bar on Omega_L/L; omega_bar must lie
// in [1/d, 1].  isotropic uses L=N, werner L=N(d-1), two-qubit L=N.
double iso_threshold(int d, double omega_bar_n);
double werner_threshold(int d, double omega_bar_l);
double two_qubit_threshold(double omega_bar_n);

// Known local-hidden-state critical values for comparison columns.
std::optional<double> lhs_reference(const std::string& family, int d);

ThresholdReport make_report(const std::string& family, int d, int n,
                            const std::string& source, double value);

// The six closed-form approximate thresholds (both families, three bound
// sources each) for N mutually unbiased bases in dimension d.
std::vector<ThresholdReport> approx_thresholds(int d, int n);

// Exact Omega_L for qubit bases given by Bloch directions:
// L/2 + max |(1/2) sum of +-b_mu| over sign assignments and subset choices
// (a direction used twice contributes a full basis: count 2, vector 0).
// Exhaustive for N <= 20, greedy sign-flip local search beyond.
double two_qubit_omega_bloch(
    const std::vector<std::array<double, 3>>& directions, int L);

// The qubit basis measuring spin along the given unit direction.
bases::Basis basis_from_direction(const std::array<double, 3>& dir);

// Omega_N/N for N = grid_size directions covering the hemisphere
// (equal-area spiral) or the half-plane (equal-angle fan), all-positive
// signs refined by greedy sign flips.  grid_size >= 100.
enum class LimitScenario { hemisphere, half_plane };
double infinite_settings_limit(LimitScenario scenario, int grid_size);

std::string threshold_csv_header();
std::string threshold_csv_row(const ThresholdReport& r);

}  // namespace steerlat::thresholds
