#include "steerlat/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "steerlat/bounds.hpp"
#include "steerlat/common.hpp"

namespace steerlat::thresholds {

namespace {

void require_omega_bar(double v, int d, const char* who) {
  if (!(v >= 1.0 / d - 1e-9) || v > 1 + 1e-9)
    throw ValidationError(std::string(who) + ": omega_bar outside [1/d, 1]");
}

struct Vec3 {
  double x = 0, y = 0, z = 0;
  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }
};

// Feasible single-direction count: k singles plus (L-k)/2 full pairs must
// use at most N bases.
bool feasible_k(int k, int L, int n) {
  return k <= L && (L - k) % 2 == 0 && (L - k) / 2 <= n - k;
}

double best_norm_exhaustive(const std::vector<Vec3>& dirs, int L) {
  const int n = static_cast<int>(dirs.size());
  double best_val = -1;
  // sigma in {-1, 0, +1} per direction; leaves checked for feasibility.
  std::function<void(int, int, Vec3)> rec = [&](int mu, int k, Vec3 sum) {
    double reach = sum.norm() + (n - mu);
    if (reach <= best_val) return;
    if (mu == n) {
      if (feasible_k(k, L, n)) best_val = std::max(best_val, sum.norm());
      return;
    }
    rec(mu + 1, k + 1, sum + dirs[static_cast<std::size_t>(mu)]);
    rec(mu + 1, k + 1, sum - dirs[static_cast<std::size_t>(mu)]);
    rec(mu + 1, k, sum);
  };
  rec(0, 0, {0, 0, 0});
  return std::max(best_val, 0.0);
}

double best_norm_greedy(const std::vector<Vec3>& dirs, int L) {
  const int n = static_cast<int>(dirs.size());
  const int k = std::min(L, 2 * n - L);  // parity-consistent single count
  if (k <= 0) return 0.0;

  std::vector<int> sigma(static_cast<std::size_t>(n), 0);
  Vec3 sum{0, 0, 0};
  if (k == n) {
    for (int mu = 0; mu < n; ++mu) {
      sigma[static_cast<std::size_t>(mu)] = 1;
      sum = sum + dirs[static_cast<std::size_t>(mu)];
    }
  } else {
    for (int pick = 0; pick < k; ++pick) {
      int arg = -1, args = 1;
      double best = -1;
      for (int mu = 0; mu < n; ++mu) {
        if (sigma[static_cast<std::size_t>(mu)] != 0) continue;
        for (int s : {1, -1}) {
          double v = (sum + dirs[static_cast<std::size_t>(mu)] * s).norm();
          if (v > best + 1e-15) {
            best = v;
            arg = mu;
            args = s;
          }
        }
      }
      sigma[static_cast<std::size_t>(arg)] = args;
      sum = sum + dirs[static_cast<std::size_t>(arg)] * args;
    }
  }

  for (int pass = 0; pass < 64; ++pass) {
    bool improved = false;
    for (int mu = 0; mu < n; ++mu) {
      int s = sigma[static_cast<std::size_t>(mu)];
      if (s == 0) continue;
      Vec3 flipped = sum - dirs[static_cast<std::size_t>(mu)] * (2.0 * s);
      if (flipped.norm() > sum.norm() + 1e-12) {
        sum = flipped;
        sigma[static_cast<std::size_t>(mu)] = -s;
        improved = true;
      }
    }
    if (!improved) break;
  }
  return sum.norm();
}

}  // namespace

double iso_threshold(int d, double omega_bar_n) {
  if (d < 2) throw ValidationError("iso_threshold: d must be >= 2");
  require_omega_bar(omega_bar_n, d, "iso_threshold");
  return (d * omega_bar_n - 1) / (d - 1);
}

double werner_threshold(int d, double omega_bar_l) {
  if (d < 2) throw ValidationError("werner_threshold: d must be >= 2");
  require_omega_bar(omega_bar_l, d, "werner_threshold");
  return (d - 1) * (d * omega_bar_l - 1);
}

double two_qubit_threshold(double omega_bar_n) {
  require_omega_bar(omega_bar_n, 2, "two_qubit_threshold");
  return 2 * omega_bar_n - 1;
}

std::optional<double> lhs_reference(const std::string& family, int d) {
  if (family == "isotropic") {
    double h = 0;
    for (int k = 1; k <= d; ++k) h += 1.0 / k;
    return (h - 1) / (d - 1);
  }
  if (family == "werner") return static_cast<double>(d - 1) / d;
  if (family == "two_qubit_werner") return 0.5;
  return std::nullopt;
}

ThresholdReport make_report(const std::string& family, int d, int n,
                            const std::string& source, double value) {
  ThresholdReport r;
  r.family = family;
  r.d = d;
  r.n = n;
  r.bound_source = source;
  r.value = value;
  r.capped = value >= 1.0 - kCapTolerance;
  r.lhs_reference = lhs_reference(family, d);
  return r;
}

std::vector<ThresholdReport> approx_thresholds(int d, int n) {
  std::vector<ThresholdReport> out;
  const int l_iso = n;
  const int l_w = n * (d - 1);
  auto bar = [](double bound, int L) { return bound / L; };
  out.push_back(make_report("isotropic", d, n, "gamma",
                            iso_threshold(d, bar(bounds::gamma_mub(l_iso, d, n), l_iso))));
  out.push_back(make_report("isotropic", d, n, "theta",
                            iso_threshold(d, bar(bounds::theta_mub(l_iso, d, n), l_iso))));
  out.push_back(make_report("isotropic", d, n, "lambda",
                            iso_threshold(d, bar(bounds::lambda_mub(l_iso, d, n), l_iso))));
  out.push_back(make_report("werner", d, n, "gamma",
                            werner_threshold(d, bar(bounds::gamma_mub(l_w, d, n), l_w))));
  out.push_back(make_report("werner", d, n, "theta",
                            werner_threshold(d, bar(bounds::theta_mub(l_w, d, n), l_w))));
  out.push_back(make_report("werner", d, n, "lambda",
                            werner_threshold(d, bar(bounds::lambda_mub(l_w, d, n), l_w))));
  return out;
}

double two_qubit_omega_bloch(
    const std::vector<std::array<double, 3>>& directions, int L) {
  const int n = static_cast<int>(directions.size());
  if (n < 1) throw ValidationError("two_qubit_omega_bloch: no directions");
  if (L < 1 || L > 2 * n)
    throw ValidationError("two_qubit_omega_bloch: L must satisfy 1 <= L <= 2N");
  std::vector<Vec3> dirs;
  dirs.reserve(static_cast<std::size_t>(n));
  for (const auto& a : directions) {
    Vec3 v{a[0], a[1], a[2]};
    double nm = v.norm();
    if (std::abs(nm - 1.0) > 1e-6)
      throw ValidationError("two_qubit_omega_bloch: directions must be unit "
                            "vectors");
    dirs.push_back(v * (1.0 / nm));
  }
  double norm = n <= 20 ? best_norm_exhaustive(dirs, L)
                        : best_norm_greedy(dirs, L);
  return L / 2.0 + norm / 2.0;
}

bases::Basis basis_from_direction(const std::array<double, 3>& dir) {
  Vec3 v{dir[0], dir[1], dir[2]};
  double nm = v.norm();
  if (std::abs(nm - 1.0) > 1e-6)
    throw ValidationError("basis_from_direction: direction must be a unit "
                          "vector");
  v = v * (1.0 / nm);
  double theta = std::acos(std::clamp(v.z, -1.0, 1.0));
  double phi = std::atan2(v.y, v.x);
  Complex eip(std::cos(phi), std::sin(phi));
  CMatrix m(2, 2);
  m(0, 0) = std::cos(theta / 2);
  m(1, 0) = std::sin(theta / 2) * eip;
  m(0, 1) = -std::sin(theta / 2) * std::conj(eip);
  m(1, 1) = std::cos(theta / 2);
  return bases::Basis(std::move(m));
}

double infinite_settings_limit(LimitScenario scenario, int grid_size) {
  if (grid_size < 100)
    throw ValidationError("infinite_settings_limit: grid_size must be >= 100");
  std::vector<std::array<double, 3>> dirs;
  dirs.reserve(static_cast<std::size_t>(grid_size));
  if (scenario == LimitScenario::hemisphere) {
    // Equal-area spiral on the upper hemisphere.
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < grid_size; ++i) {
      double z = (i + 0.5) / grid_size;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double phi = golden * i;
      dirs.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
  } else {
    // Equal-angle fan over the half-plane.
    for (int i = 0; i < grid_size; ++i) {
      double phi = (i + 0.5) * kPi / grid_size;
      dirs.push_back({std::cos(phi), 0.0, std::sin(phi)});
    }
  }
  return two_qubit_omega_bloch(dirs, grid_size) / grid_size;
}

std::string threshold_csv_header() {
  return "family,d,n,bound_source,threshold,capped,lhs_reference";
}

std::string threshold_csv_row(const ThresholdReport& r) {
  std::string row = r.family + "," + std::to_string(r.d) + "," +
                    std::to_string(r.n) + "," + r.bound_source + "," +
                    format_number(r.value) + "," +
                    (r.capped ? "true" : "false") + ",";
  if (r.lhs_reference) row += format_number(*r.lhs_reference);
  return row;
}

}  // namespace steerlat::thresholds
