#include "doctest.h"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "steerlat/bases.hpp"
#include "steerlat/common.hpp"
#include "steerlat/omega.hpp"
#include "steerlat/thresholds.hpp"

using namespace steerlat;

namespace {

std::array<double, 3> unit(double x, double y, double z) {
  double n = std::sqrt(x * x + y * y + z * z);
  return {x / n, y / n, z / n};
}

}  // namespace

TEST_SUITE("thresholds") {

TEST_CASE("threshold formulas at pinned points") {
  // Two mutually unbiased settings: omega_bar = (1 + 1/sqrt(d))/2.
  for (int d : {2, 3, 5, 7}) {
    double bar = (1.0 + 1.0 / std::sqrt(static_cast<double>(d))) / 2.0;
    double expect =
        (d + std::sqrt(static_cast<double>(d)) - 2) / (2.0 * (d - 1));
    CHECK(thresholds::iso_threshold(d, bar) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(thresholds::two_qubit_threshold(0.85) == doctest::Approx(0.7));
  CHECK(thresholds::werner_threshold(3, 0.55) ==
        doctest::Approx(2.0 * (3 * 0.55 - 1)).epsilon(1e-12));
}

TEST_CASE("omega_bar domain is enforced") {
  CHECK_THROWS_AS(thresholds::iso_threshold(3, 0.2), ValidationError);
  CHECK_THROWS_AS(thresholds::iso_threshold(3, 1.2), ValidationError);
  CHECK_THROWS_AS(thresholds::werner_threshold(3, 0.1), ValidationError);
  CHECK_THROWS_AS(thresholds::two_qubit_threshold(1.3), ValidationError);
  CHECK_NOTHROW(thresholds::iso_threshold(3, 1.0 / 3));
}

TEST_CASE("lhs references") {
  auto iso3 = thresholds::lhs_reference("isotropic", 3);
  REQUIRE(iso3.has_value());
  CHECK(*iso3 == doctest::Approx(5.0 / 12).epsilon(1e-12));
  auto iso2 = thresholds::lhs_reference("isotropic", 2);
  CHECK(*iso2 == doctest::Approx(0.5).epsilon(1e-12));

  CHECK(*thresholds::lhs_reference("werner", 3) ==
        doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK(*thresholds::lhs_reference("two_qubit_werner", 2) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK_FALSE(thresholds::lhs_reference("unknown", 3).has_value());
}

TEST_CASE("reports carry the cap flag") {
  auto capped = thresholds::make_report("werner", 3, 2, "exact", 1.0);
  CHECK(capped.capped);
  CHECK(capped.value == doctest::Approx(1.0));
  auto open = thresholds::make_report("isotropic", 3, 2, "exact", 0.683);
  CHECK_FALSE(open.capped);
  CHECK(open.lhs_reference.has_value());
}

TEST_CASE("approx threshold table for d=3, n=3") {
  auto reports = thresholds::approx_thresholds(3, 3);
  REQUIRE(reports.size() == 6);
  int iso = 0, werner = 0;
  for (const auto& r : reports) {
    CHECK(r.d == 3);
    CHECK(r.n == 3);
    if (r.family == "isotropic") ++iso;
    if (r.family == "werner") ++werner;
    CHECK((r.bound_source == "gamma" || r.bound_source == "theta" ||
           r.bound_source == "lambda"));
  }
  CHECK(iso == 3);
  CHECK(werner == 3);
}

TEST_CASE("qubit omega from bloch directions matches the basis search") {
  std::vector<std::array<double, 3>> dirs{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}};
  std::vector<bases::Basis> bs;
  for (const auto& dir : dirs)
    bs.push_back(thresholds::basis_from_direction(dir));
  bases::BasisSet set(bs);
  for (int L = 1; L <= 6; ++L)
    CHECK(thresholds::two_qubit_omega_bloch(dirs, L) ==
          doctest::Approx(omega::omega_value(set, L)).epsilon(1e-9));

  // Pinned: the triad at L=3 reaches 3/2 + sqrt(3)/2.
  CHECK(thresholds::two_qubit_omega_bloch(dirs, 3) ==
        doctest::Approx(1.5 + std::sqrt(3.0) / 2).epsilon(1e-12));
}

TEST_CASE("bloch omega with skew directions") {
  std::vector<std::array<double, 3>> dirs{
      unit(1, 0, 0.2), unit(-0.3, 1, 0), unit(0.1, -0.4, 1), unit(1, 1, 1)};
  std::vector<bases::Basis> bs;
  for (const auto& dir : dirs)
    bs.push_back(thresholds::basis_from_direction(dir));
  bases::BasisSet set(bs);
  for (int L : {2, 3, 5, 8})
    CHECK(thresholds::two_qubit_omega_bloch(dirs, L) ==
          doctest::Approx(omega::omega_value(set, L)).epsilon(1e-9));
}

TEST_CASE("bloch omega input validation") {
  std::vector<std::array<double, 3>> dirs{{0, 0, 1}, {1, 0, 0}};
  CHECK_THROWS_AS(thresholds::two_qubit_omega_bloch(dirs, 0), ValidationError);
  CHECK_THROWS_AS(thresholds::two_qubit_omega_bloch(dirs, 5), ValidationError);
  std::vector<std::array<double, 3>> bad{{0, 0, 2}};
  CHECK_THROWS_AS(thresholds::two_qubit_omega_bloch(bad, 1), ValidationError);
}

TEST_CASE("basis_from_direction produces the right projector") {
  // Spin along +x: first column is |+>.
  auto b = thresholds::basis_from_direction({1, 0, 0});
  CVector v = b.vector(0);
  CMatrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0);
  sy << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  sz << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(-1, 0);
  CHECK((v.adjoint() * sx * v)(0).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((v.adjoint() * sy * v)(0).real() == doctest::Approx(0.0));
  CHECK((v.adjoint() * sz * v)(0).real() == doctest::Approx(0.0));

  auto g = thresholds::basis_from_direction(unit(0.3, -0.5, 0.8));
  CHECK((g.matrix() * g.matrix().adjoint() - CMatrix::Identity(2, 2)).norm() <
        1e-12);
}

TEST_CASE("infinite settings limits approach the known constants") {
  CHECK(thresholds::infinite_settings_limit(
            thresholds::LimitScenario::hemisphere, 400) ==
        doctest::Approx(0.75).epsilon(0.01));
  CHECK(thresholds::infinite_settings_limit(
            thresholds::LimitScenario::half_plane, 400) ==
        doctest::Approx((kPi + 2) / (2 * kPi)).epsilon(0.005));
  CHECK_THROWS_AS(
      thresholds::infinite_settings_limit(thresholds::LimitScenario::hemisphere,
                                          99),
      ValidationError);
}

TEST_CASE("threshold csv layout") {
  CHECK(thresholds::threshold_csv_header() ==
        "family,d,n,bound_source,threshold,capped,lhs_reference");
  auto r = thresholds::make_report("isotropic", 3, 4, "gamma", 0.5);
  auto row = thresholds::threshold_csv_row(r);
  CHECK(row == "isotropic,3,4,gamma,0.5,false,0.416666666667");

  auto capped = thresholds::make_report("werner", 3, 2, "exact", 1.25);
  auto row2 = thresholds::threshold_csv_row(capped);
  CHECK(row2.find(",true,") != std::string::npos);
}

}  // TEST_SUITE
