#pragma once

#include <string>

#include "steerlat/bases.hpp"

namespace steerlat::bounds {

// Minimum of sum_mu k_mu^2 over nonnegative integer splits of L into N
// parts: the balanced split gives N*q^2 + r*(2q+1) with L = N*q + r.
long long phi(long long L, long long N);

// Closed-form upper bounds on Omega_L for N mutually unbiased bases in
// dimension d.  Stated only for 1 <= L <= N*(d-1); outside that range the
// functions refuse rather than extrapolate.
double theta_mub(int L, int d, int n);
double lambda_mub(int L, int d, int n);
double gamma_mub(int L, int d, int n);

// Exact maximum of Tr[X^2] = L + sum over cross-basis pairs of squared
// overlaps, over selections of L vectors; branch-and-bound on the additive
// objective with bound c^2 * (pairs still addable).
double max_tr_x2(const bases::BasisSet& bs, int L);

// Bounds for arbitrary basis sets.  theta = 1 + (L-1)*max_overlap, valid
// for 1 <= L <= d*(N-1); lambda = sqrt(max Tr[X^2]) and
// gamma = (L + sqrt((d-1)*(d*maxTr - L^2)))/d, valid for 1 <= L <= N*d.
double theta_general(const bases::BasisSet& bs, int L);
double lambda_general(const bases::BasisSet& bs, int L);
double gamma_general(const bases::BasisSet& bs, int L);

enum class Regime { mub_closed_form, general_enumerated };

struct BoundsProfile {
  int L = 0;
  double theta = 0, lambda = 0, gamma = 0;
  double theta_bar = 0, lambda_bar = 0, gamma_bar = 0;
  Regime regime = Regime::mub_closed_form;
};

BoundsProfile mub_profile(int L, int d, int n);
BoundsProfile general_profile(const bases::BasisSet& bs, int L);

std::string regime_name(Regime r);

}  // namespace steerlat::bounds
