#include "doctest.h"

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "steerlat/common.hpp"
#include "steerlat/numerics.hpp"
#include "steerlat/rng.hpp"

using namespace steerlat;

namespace {

CMatrix random_hermitian(int d, std::uint64_t seed) {
  Rng r(seed);
  CMatrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      a(i, j) = Complex(r.normal(), r.normal());
  return 0.5 * (a + a.adjoint().eval());
}

double dense_max_eig(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(h.rows() - 1);
}

}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("require_hermitian accepts and rejects") {
  CMatrix h = random_hermitian(4, 11);
  CHECK_NOTHROW(numerics::require_hermitian(h, "t"));

  CMatrix bad = h;
  bad(0, 1) += Complex(0, 1e-6);
  CHECK_THROWS_AS(numerics::require_hermitian(bad, "t"), ValidationError);

  CMatrix nan = h;
  nan(2, 2) = std::nan("");
  CHECK_THROWS_AS(numerics::require_hermitian(nan, "t"), ValidationError);
}

TEST_CASE("herm_max_eig on a pinned 2x2") {
  // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
  CMatrix h(2, 2);
  h << Complex(2, 0), Complex(0, 1), Complex(0, -1), Complex(2, 0);
  auto e = numerics::herm_max_eig(h);
  CHECK(e.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK((h * e.vector - e.value * e.vector).norm() < 1e-9);
  CHECK(e.vector.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("herm_max_eig matches a dense solve across sizes") {
  // 80 exceeds the dense cutoff, so the iterative path gets exercised too.
  for (int d : {3, 8, 40, 80}) {
    CMatrix h = random_hermitian(d, 100 + static_cast<std::uint64_t>(d));
    auto e = numerics::herm_max_eig(h);
    CHECK(e.value == doctest::Approx(dense_max_eig(h)).epsilon(1e-9));
    // The iterative path promises a residual of 1e-8 relative to |lambda|.
    double resid_bound = 1e-8 * std::max(1.0, std::abs(e.value)) + 1e-12;
    CHECK((h * e.vector - e.value * e.vector).norm() < resid_bound);
  }
}

TEST_CASE("max_singular_value matches an SVD") {
  Rng r(7);
  CMatrix a(5, 3);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = Complex(r.normal(), r.normal());
  Eigen::JacobiSVD<CMatrix> svd(a);
  CHECK(numerics::max_singular_value(a) ==
        doctest::Approx(svd.singularValues()(0)).epsilon(1e-10));
}

TEST_CASE("gram of orthonormal columns is the identity") {
  CMatrix u(2, 2);
  double s = 1.0 / std::sqrt(2.0);
  u << Complex(s, 0), Complex(s, 0), Complex(s, 0), Complex(-s, 0);
  CHECK((numerics::gram(u) - CMatrix::Identity(2, 2)).norm() < 1e-12);

  CMatrix bad = 2.0 * u;
  CHECK_THROWS_AS(numerics::gram(bad), ValidationError);
}

TEST_CASE("herm_expi is unitary and matches the Pauli closed form") {
  CHECK((numerics::herm_expi(CMatrix::Zero(3, 3)) - CMatrix::Identity(3, 3))
            .norm() < 1e-12);

  double t = 0.731;
  CMatrix sx(2, 2);
  sx << Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0);
  CMatrix u = numerics::herm_expi(t * sx);
  CMatrix expect = std::cos(t) * CMatrix::Identity(2, 2) +
                   Complex(0, 1) * std::sin(t) * sx;
  CHECK((u - expect).norm() < 1e-12);

  CMatrix h = random_hermitian(6, 5);
  CMatrix v = numerics::herm_expi(h);
  CHECK((v * v.adjoint() - CMatrix::Identity(6, 6)).norm() < 1e-10);
}

}  // TEST_SUITE
