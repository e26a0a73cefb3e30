#pragma once

#include "steerlat/common.hpp"

namespace steerlat::numerics {

struct MaxEig {
  double value = 0.0;
  CVector vector;
};

// Checks m is finite and Hermitian within tol; throws ValidationError naming
// `what` otherwise.
void require_hermitian(const CMatrix& m, const char* what, double tol = 1e-10);

// Largest eigenvalue/eigenvector of a Hermitian matrix.  The input is
// symmetrized before decomposition; dimensions <= 64 use a full solve,
// larger ones a shifted power iteration (tol 1e-10) with a dense fallback
// if the iteration stalls.
MaxEig herm_max_eig(const CMatrix& m);

double max_singular_value(const CMatrix& m);

// Gram matrix G(i,j) = <v_i|v_j> of the columns of `vectors`.
// Columns must be unit norm within 1e-10.
CMatrix gram(const CMatrix& vectors);

// exp(i*h) for Hermitian h; the result is unitary by construction.
CMatrix herm_expi(const CMatrix& h);

}  // namespace steerlat::numerics
