#include "steerlat/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "steerlat/common.hpp"

namespace steerlat::bounds {

namespace {

void require_mub_range(int L, int d, int n, const char* who) {
  if (d < 2 || n < 2)
    throw ValidationError(std::string(who) + ": need d >= 2 and N >= 2");
  if (L < 1 || L > n * (d - 1))
    throw ValidationError(std::string(who) +
                          ": closed form holds for 1 <= L <= N*(d-1) only");
}

}  // namespace

long long phi(long long L, long long N) {
  if (N < 1 || L < 0) throw ValidationError("phi: need N >= 1 and L >= 0");
  long long q = L / N;
  long long r = L - N * q;
  return N * q * q + r * (2 * q + 1);
}

double theta_mub(int L, int d, int n) {
  require_mub_range(L, d, n, "theta_mub");
  return 1.0 + (L - 1) / std::sqrt(static_cast<double>(d));
}

double lambda_mub(int L, int d, int n) {
  require_mub_range(L, d, n, "lambda_mub");
  double f = static_cast<double>(phi(L, n));
  return std::sqrt((d * static_cast<double>(L) + static_cast<double>(L) * L - f) / d);
}

double gamma_mub(int L, int d, int n) {
  require_mub_range(L, d, n, "gamma_mub");
  double f = static_cast<double>(phi(L, n));
  double inner = (d - 1) * (d * static_cast<double>(L) - f);
  return (L + std::sqrt(std::max(0.0, inner))) / d;
}

double max_tr_x2(const bases::BasisSet& bs, int L) {
  const int d = bs.dim(), n = bs.count(), m = d * n;
  if (L < 1 || L > m)
    throw ValidationError("max_tr_x2: L must satisfy 1 <= L <= N*d");

  CMatrix stacked = bs.stacked();
  CMatrix g = stacked.adjoint() * stacked;
  RMatrix ov2(m, m);
  double c2 = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      ov2(i, j) = std::norm(g(i, j));
      if (i / d != j / d) c2 = std::max(c2, ov2(i, j));
    }

  // Maximize the additive pair sum by depth-first search; the admissible
  // bound adds c^2 for every pair a completion could still create.
  double best = 0;
  std::vector<int> chosen;
  std::function<void(int, double)> rec = [&](int start, double sum) {
    int k = static_cast<int>(chosen.size());
    if (k == L) {
      best = std::max(best, sum);
      return;
    }
    int r = L - k;
    double slack =
        c2 * (static_cast<double>(r) * k + 0.5 * static_cast<double>(r) * (r - 1));
    if (sum + slack <= best) return;
    for (int c = start; c <= m - r; ++c) {
      double ds = 0;
      for (int o : chosen)
        if (o / d != c / d) ds += ov2(o, c);
      chosen.push_back(c);
      rec(c + 1, sum + ds);
      chosen.pop_back();
    }
  };
  rec(0, 0.0);
  return L + 2.0 * best;
}

double theta_general(const bases::BasisSet& bs, int L) {
  const int d = bs.dim(), n = bs.count();
  if (n < 2) throw ValidationError("theta_general: need N >= 2");
  if (L < 1 || L > d * (n - 1))
    throw ValidationError("theta_general: valid for 1 <= L <= d*(N-1) only");
  return 1.0 + (L - 1) * bases::max_overlap(bs);
}

double lambda_general(const bases::BasisSet& bs, int L) {
  return std::sqrt(max_tr_x2(bs, L));
}

double gamma_general(const bases::BasisSet& bs, int L) {
  const int d = bs.dim();
  double t = max_tr_x2(bs, L);
  double inner = (d - 1) * (d * t - static_cast<double>(L) * L);
  return (L + std::sqrt(std::max(0.0, inner))) / d;
}

BoundsProfile mub_profile(int L, int d, int n) {
  BoundsProfile p;
  p.L = L;
  p.theta = theta_mub(L, d, n);
  p.lambda = lambda_mub(L, d, n);
  p.gamma = gamma_mub(L, d, n);
  p.theta_bar = p.theta / L;
  p.lambda_bar = p.lambda / L;
  p.gamma_bar = p.gamma / L;
  p.regime = Regime::mub_closed_form;
  return p;
}

BoundsProfile general_profile(const bases::BasisSet& bs, int L) {
  BoundsProfile p;
  p.L = L;
  p.theta = theta_general(bs, L);
  p.lambda = lambda_general(bs, L);
  p.gamma = gamma_general(bs, L);
  p.theta_bar = p.theta / L;
  p.lambda_bar = p.lambda / L;
  p.gamma_bar = p.gamma / L;
  p.regime = Regime::general_enumerated;
  return p;
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::mub_closed_form:
      return "mub_closed_form";
    case Regime::general_enumerated:
      return "general_enumerated";
  }
  return "unknown";
}

}  // namespace steerlat::bounds
