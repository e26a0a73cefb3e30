#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "steerlat/bases.hpp"
#include "steerlat/common.hpp"
#include "steerlat/majorization.hpp"
#include "steerlat/omega.hpp"

namespace steerlat::states {

// Bipartite density matrix on C^{dimA} (x) C^{dimB}; row-major kron
// convention, index i*dimB + j.  Validated Hermitian (1e-10), unit trace
// (1e-10), min eigenvalue >= -1e-9.
class DensityMatrix {
 public:
  DensityMatrix(int dim_a, int dim_b, CMatrix entries);

  int dim_a() const { return da_; }
  int dim_b() const { return db_; }
  int dim() const { return da_ * db_; }
  const CMatrix& matrix() const { return m_; }

 private:
  int da_, db_;
  CMatrix m_;
};

// Maximally entangled state mixed with white noise, weight w on the
// entangled part.
DensityMatrix isotropic_state(int d, double w);
// U(x)U-invariant family from identity and swap, parameter eta.
DensityMatrix werner_state(int d, double eta);
// (1-w) * I/4 + w |psi-><psi-|.
DensityMatrix two_qubit_werner(double w);

// Generalized Gell-Mann generators, orthogonality Tr[pi_mu pi_nu] = 2 delta.
// Ordering: the d(d-1)/2 antisymmetric ones (pi^T = -pi) first, then the
// d(d-1)/2 symmetric off-diagonal ones, then the d-1 diagonal ones.
class GeneratorBasis {
 public:
  explicit GeneratorBasis(int d);

  int dim() const { return d_; }
  int count() const { return static_cast<int>(g_.size()); }
  const CMatrix& matrix(int mu) const { return g_[static_cast<std::size_t>(mu)]; }
  int antisymmetric_count() const { return d_ * (d_ - 1) / 2; }
  // +1 if pi^T = pi, -1 if pi^T = -pi.
  int transpose_sign(int mu) const { return mu < antisymmetric_count() ? -1 : 1; }

 private:
  int d_;
  std::vector<CMatrix> g_;
};

// p(i,j) = Tr[rho |a_i><a_i| (x) |b_j><b_j|].  Entries below -1e-10 are a
// hard error; small negatives are clamped to zero.  Rows index Alice.
RMatrix joint_probability(const DensityMatrix& rho, const bases::Basis& a,
                          const bases::Basis& b);

enum class Provenance { numeric, closed_form };

// d components, block order: index 0 is the main-diagonal block of the
// cyclic partition (not sorted).
struct AggregatedDistribution {
  std::vector<double> upsilon;
  Provenance provenance = Provenance::numeric;
};

AggregatedDistribution aggregated_upsilon(const DensityMatrix& rho,
                                          const bases::Basis& a,
                                          const bases::Basis& b);

enum class Family { isotropic, werner, two_qubit_werner };

// Closed forms for the named families under their canonical measurement
// strategies (conjugate pairs for isotropic, equal bases for Werner,
// aligned equal directions for the two-qubit family).
AggregatedDistribution upsilon_closed_form(Family family, int d, double param);

// T(mu,nu) = Tr[rho pi_mu (x) pi_nu]; real for Hermitian generators.
RMatrix correlation_matrix(const DensityMatrix& rho, const GeneratorBasis& gens);

// Descending singular values of the 3x3 two-qubit correlation matrix.
std::array<double, 3> two_qubit_singular_values(const DensityMatrix& rho);

// S_L: mean of the L largest components of the direct sum of the N
// aggregated distributions, measurements taken exactly as given.
double steering_parameter(const DensityMatrix& rho,
                          const bases::BasisSet& settings_a,
                          const bases::BasisSet& settings_b, int L);

// Local pre-measurement strategy applied inside the witness.
enum class BobTransform {
  automatic,  // two-qubit -> svd_align, everything else -> identity
  identity,
  conjugate,  // Bob measures the entrywise conjugate of each basis
  svd_align,  // two-qubit only: both sides rotated into the frame that
              // diagonalizes the correlation matrix
};

struct WitnessOptions {
  BobTransform transform = BobTransform::automatic;
  // Optional local unitaries applied to every Alice / Bob basis.
  std::optional<CMatrix> alice_unitary;
  std::optional<CMatrix> bob_unitary;
  // Precomputed bound profile for Bob's (transformed) settings; recomputed
  // when absent.  Caller owns the lifetime.
  const std::vector<omega::OmegaResult>* omega_profile = nullptr;
  double tolerance = 1e-9;  // S_L must exceed the bound by this to flag
  omega::SearchOptions search;
};

struct Verdict {
  bool steerable = false;
  int best_L = 0;      // L of the maximal margin
  double margin = 0;   // max_L (S_L - Omega_bar_L)
  std::vector<double> s_profile;          // S_L for L = 2..N*d
  std::vector<double> omega_bar_profile;  // matching bounds
};

// A positive verdict certifies steerability from Alice to Bob; a negative
// one only means not-detected.
Verdict witness(const DensityMatrix& rho, const bases::BasisSet& settings_a,
                const bases::BasisSet& settings_b,
                const WitnessOptions& opts = {});

// CLI state mini-language: "iso:<d>:<w>", "werner:<d>:<eta>",
// "werner2q:<w>", or a path to a density-matrix JSON file.
struct ParsedState {
  DensityMatrix rho;
  std::optional<Family> family;
  double param = 0;
};
ParsedState parse_state_spec(const std::string& spec);

void save_density_matrix(const DensityMatrix& rho, const std::string& path);
DensityMatrix load_density_matrix(const std::string& path);

}  // namespace steerlat::states
