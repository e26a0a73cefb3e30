#include "steerlat/numerics.hpp"

#include <cmath>
#include <string>

namespace steerlat::numerics {

namespace {

// Deterministic phase convention: scale so the largest-modulus entry is
// real positive.  Keeps eigenvectors reproducible across solver variants.
CVector fix_phase(CVector v) {
  int arg = 0;
  double best = -1.0;
  for (int i = 0; i < v.size(); ++i) {
    double a = std::abs(v(i));
    if (a > best + 1e-15) {
      best = a;
      arg = i;
    }
  }
  if (best > 0) v *= std::conj(v(arg)) / std::abs(v(arg));
  return v;
}

}  // namespace

void require_hermitian(const CMatrix& m, const char* what, double tol) {
  if (m.rows() != m.cols())
    throw ValidationError(std::string(what) + ": matrix is not square");
  if (!m.allFinite())
    throw ValidationError(std::string(what) + ": non-finite entries");
  double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol)
    throw ValidationError(std::string(what) + ": not Hermitian (deviation " +
                          std::to_string(dev) + ")");
}

MaxEig herm_max_eig(const CMatrix& m) {
  require_hermitian(m, "herm_max_eig");
  CMatrix h = 0.5 * (m + m.adjoint());
  const int n = static_cast<int>(h.rows());

  if (n <= 64) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    return {es.eigenvalues()(n - 1), fix_phase(es.eigenvectors().col(n - 1))};
  }

  // Shifted power iteration: the shift makes the target eigenvalue the one
  // of largest magnitude.
  double shift = h.cwiseAbs().rowwise().sum().maxCoeff();  // >= spectral radius
  CVector v = CVector::Ones(n);
  for (int i = 0; i < n; ++i) v(i) += Complex(0.0, 1e-3 * (i % 7));
  v.normalize();
  double prev = 0.0;
  for (int it = 0; it < 10000; ++it) {
    CVector w = h * v + shift * v;
    double norm = w.norm();
    if (norm == 0.0) break;  // h = -shift*I exactly; fall through
    v = w / norm;
    double lam = std::real(v.dot(h * v));
    if (it > 0 && std::abs(lam - prev) <= 1e-10 * std::max(1.0, std::abs(lam))) {
      double resid = (h * v - lam * v).norm();
      if (resid <= 1e-8 * std::max(1.0, std::abs(lam)))
        return {lam, fix_phase(std::move(v))};
    }
    prev = lam;
  }
  // Stalled (degenerate leading eigenvalue or adversarial start): the dense
  // solve is always correct, just slower.
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  return {es.eigenvalues()(n - 1), fix_phase(es.eigenvectors().col(n - 1))};
}

double max_singular_value(const CMatrix& m) {
  if (!m.allFinite())
    throw ValidationError("max_singular_value: non-finite entries");
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return m.jacobiSvd().singularValues()(0);
}

CMatrix gram(const CMatrix& vectors) {
  if (!vectors.allFinite())
    throw ValidationError("gram: non-finite entries");
  for (int j = 0; j < vectors.cols(); ++j) {
    if (std::abs(vectors.col(j).norm() - 1.0) > 1e-10)
      throw ValidationError("gram: column " + std::to_string(j) +
                            " is not unit norm");
  }
  return vectors.adjoint() * vectors;
}

CMatrix herm_expi(const CMatrix& h) {
  require_hermitian(h, "herm_expi");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
  const auto& vals = es.eigenvalues();
  CVector phases(vals.size());
  for (int i = 0; i < vals.size(); ++i)
    phases(i) = std::polar(1.0, vals(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace steerlat::numerics
