#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "steerlat/common.hpp"

namespace steerlat::bases {

// Orthonormal basis of C^d; columns of matrix() are the basis vectors.
class Basis {
 public:
  explicit Basis(CMatrix columns);  // validates orthonormality to 1e-8

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  CVector vector(int i) const { return m_.col(i); }

 private:
  CMatrix m_;
};

// N bases of equal dimension.  Candidate order "basis-major" means the flat
// index mu*d + i refers to vector i of basis mu.
class BasisSet {
 public:
  explicit BasisSet(std::vector<Basis> bs);  // N >= 1, equal dims

  int dim() const { return bs_.front().dim(); }
  int count() const { return static_cast<int>(bs_.size()); }
  const Basis& basis(int mu) const { return bs_[static_cast<std::size_t>(mu)]; }
  const std::vector<Basis>& bases() const { return bs_; }

  // d x (N*d) matrix of all vectors in basis-major order.
  CMatrix stacked() const;

 private:
  std::vector<Basis> bs_;
};

Basis standard_basis(int d);
Basis fourier_basis(int d);

// N mutually unbiased bases of C^d.  Prime and prime-power dimensions up to
// the complete set of d+1; composite non-prime-power dimensions support the
// standard/Fourier/chirp triple only (N <= 3), beyond which a
// CapabilityError is thrown.  The first basis is always the standard one.
BasisSet mub_set(int d, int n);

// O(i,j) = <b1_i|b2_j>.
CMatrix overlap_matrix(const Basis& b1, const Basis& b2);

// Largest |<a|b>| over vectors from distinct bases of the set.
double max_overlap(const BasisSet& bs);

// Haar-distributed unitary, deterministic in the seed.
Basis random_unitary(int d, std::uint64_t seed);

// JSON round-trip of a basis set.  Distinct ValidationError messages for
// unreadable file, malformed JSON, structural mismatch, and failed
// orthonormality so callers can tell the failure modes apart.
std::string serialize_basis_set(const BasisSet& bs);
void save_basis_set(const BasisSet& bs, const std::string& path);
BasisSet load_basis_set(const std::string& path);

// True when the set is mutually unbiased: all cross-basis overlap moduli
// equal 1/sqrt(d) within tol.
bool is_mub_set(const BasisSet& bs, double tol = 1e-8);

}  // namespace steerlat::bases
