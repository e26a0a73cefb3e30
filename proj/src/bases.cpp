#include "steerlat/bases.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "steerlat/numerics.hpp"
#include "steerlat/rng.hpp"

namespace steerlat::bases {

namespace {

#include "mub_tables.inc"

constexpr double kOrthoTol = 1e-8;

bool is_prime(int d) {
  if (d < 2) return false;
  for (int p = 2; p * p <= d; ++p)
    if (d % p == 0) return false;
  return true;
}

bool is_prime_power(int d) {
  for (int p = 2; p * p <= d; ++p) {
    if (d % p == 0) {
      while (d % p == 0) d /= p;
      return d == 1;
    }
  }
  return true;  // prime
}

CMatrix table_basis(const int* exp_table, int q, int a, int phase_order) {
  CMatrix m(q, q);
  double norm = 1.0 / std::sqrt(static_cast<double>(q));
  for (int b = 0; b < q; ++b)
    for (int x = 0; x < q; ++x) {
      int e = exp_table[((a * q + b) * q) + x];
      m(x, b) = std::polar(norm, 2.0 * kPi * e / phase_order);
    }
  return m;
}

// Odd prime d: basis t has columns k with components w^(t*j^2 + k*j)/sqrt(d).
CMatrix prime_quadratic_basis(int d, int t) {
  CMatrix m(d, d);
  double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j) {
      long long e = (1LL * t * j * j + 1LL * k * j) % d;
      m(j, k) = std::polar(norm, 2.0 * kPi * static_cast<double>(e) / d);
    }
  return m;
}

std::vector<CMatrix> pauli_bases() {
  double s = 1.0 / std::sqrt(2.0);
  CMatrix z = CMatrix::Identity(2, 2);
  CMatrix x(2, 2), y(2, 2);
  x << s, s, s, -s;
  y << Complex(s, 0), Complex(s, 0), Complex(0, s), Complex(0, -s);
  return {z, x, y};
}

// Chirp third basis for composite d: G(j,k) = tau^(j^2) w^(jk)/sqrt(d),
// tau = exp(i*pi/d).
CMatrix chirp_basis(int d) {
  CMatrix m(d, d);
  double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j) {
      double phase = kPi * (static_cast<double>(j) * j) / d +
                     2.0 * kPi * (static_cast<double>(j) * k) / d;
      m(j, k) = std::polar(norm, phase);
    }
  return m;
}

nlohmann::json matrix_to_json(const CMatrix& m) {
  nlohmann::json cols = nlohmann::json::array();
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i)
      cols.push_back({m(i, j).real(), m(i, j).imag()});
  return cols;
}

}  // namespace

Basis::Basis(CMatrix columns) : m_(std::move(columns)) {
  if (m_.rows() < 2 || m_.rows() != m_.cols())
    throw ValidationError("Basis: need a square matrix of dimension >= 2");
  if (!m_.allFinite()) throw ValidationError("Basis: non-finite entries");
  CMatrix g = m_.adjoint() * m_;
  double dev = (g - CMatrix::Identity(m_.rows(), m_.cols())).cwiseAbs().maxCoeff();
  if (dev > kOrthoTol)
    throw ValidationError("Basis: columns not orthonormal (deviation " +
                          std::to_string(dev) + ")");
}

BasisSet::BasisSet(std::vector<Basis> bs) : bs_(std::move(bs)) {
  if (bs_.empty()) throw ValidationError("BasisSet: need at least one basis");
  for (const Basis& b : bs_)
    if (b.dim() != bs_.front().dim())
      throw ValidationError("BasisSet: bases have mixed dimensions");
}

CMatrix BasisSet::stacked() const {
  const int d = dim();
  CMatrix m(d, d * count());
  for (int mu = 0; mu < count(); ++mu)
    m.block(0, mu * d, d, d) = basis(mu).matrix();
  return m;
}

Basis standard_basis(int d) {
  if (d < 2) throw ValidationError("standard_basis: d must be >= 2");
  return Basis(CMatrix::Identity(d, d));
}

Basis fourier_basis(int d) {
  if (d < 2) throw ValidationError("fourier_basis: d must be >= 2");
  CMatrix m(d, d);
  double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j)
      m(j, k) = std::polar(norm, 2.0 * kPi * (static_cast<double>(j) * k) / d);
  return Basis(m);
}

BasisSet mub_set(int d, int n) {
  if (d < 2) throw ValidationError("mub_set: d must be >= 2");
  if (n < 2) throw ValidationError("mub_set: need at least 2 bases");

  std::vector<CMatrix> mats;
  int limit;
  std::string limit_reason;

  if (d == 2) {
    mats = pauli_bases();
    limit = 3;
    limit_reason = "d=2 has 3 mutually unbiased bases";
  } else if (is_prime(d)) {
    limit = d + 1;
    limit_reason = "prime dimension " + std::to_string(d) + " has " +
                   std::to_string(d + 1) + " mutually unbiased bases";
    mats.push_back(CMatrix::Identity(d, d));
    for (int t = 0; t < n - 1; ++t) mats.push_back(prime_quadratic_basis(d, t));
  } else if (d == 4 || d == 8 || d == 9) {
    limit = d + 1;
    limit_reason = "dimension " + std::to_string(d) + " has " +
                   std::to_string(d + 1) + " mutually unbiased bases";
    if (n <= limit) {
      mats.push_back(CMatrix::Identity(d, d));
      const int* table = d == 4 ? kGrExp4 : (d == 8 ? kGrExp8 : kGfExp9);
      int order = d == 9 ? 3 : 4;
      for (int a = 0; a < n - 1; ++a)
        mats.push_back(table_basis(table, d, a, order));
    }
  } else if (is_prime_power(d)) {
    throw CapabilityError("mub_set: construction tables cover prime-power "
                          "dimensions 4, 8 and 9 only (requested d=" +
                          std::to_string(d) + ")");
  } else {
    limit = 3;
    limit_reason = "no known construction beyond 3 mutually unbiased bases "
                   "in dimension " + std::to_string(d);
    mats = {CMatrix::Identity(d, d), fourier_basis(d).matrix(), chirp_basis(d)};
  }

  if (n > limit)
    throw CapabilityError("mub_set: " + limit_reason + " (requested N=" +
                          std::to_string(n) + ")");

  mats.resize(static_cast<std::size_t>(n));
  std::vector<Basis> out;
  out.reserve(mats.size());
  for (auto& m : mats) out.emplace_back(std::move(m));
  BasisSet bs(std::move(out));
  if (!is_mub_set(bs))
    throw CapabilityError("mub_set: constructed set failed the unbiasedness "
                          "check for d=" + std::to_string(d));
  return bs;
}

CMatrix overlap_matrix(const Basis& b1, const Basis& b2) {
  if (b1.dim() != b2.dim())
    throw ValidationError("overlap_matrix: dimension mismatch");
  return b1.matrix().adjoint() * b2.matrix();
}

double max_overlap(const BasisSet& bs) {
  if (bs.count() < 2)
    throw ValidationError("max_overlap: need at least 2 bases");
  double c = 0;
  for (int mu = 0; mu < bs.count(); ++mu)
    for (int nu = mu + 1; nu < bs.count(); ++nu)
      c = std::max(c,
                   overlap_matrix(bs.basis(mu), bs.basis(nu)).cwiseAbs().maxCoeff());
  return c;
}

bool is_mub_set(const BasisSet& bs, double tol) {
  if (bs.count() < 2) return false;
  const double target = 1.0 / std::sqrt(static_cast<double>(bs.dim()));
  for (int mu = 0; mu < bs.count(); ++mu)
    for (int nu = mu + 1; nu < bs.count(); ++nu) {
      CMatrix o = overlap_matrix(bs.basis(mu), bs.basis(nu));
      if ((o.cwiseAbs().array() - target).abs().maxCoeff() > tol) return false;
    }
  return true;
}

Basis random_unitary(int d, std::uint64_t seed) {
  if (d < 2) throw ValidationError("random_unitary: d must be >= 2");
  Rng rng(derive_seed(seed, 0x5a17u, static_cast<std::uint64_t>(d)));
  CMatrix a(d, d);
  double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      a(i, j) = Complex(rng.normal() * s, rng.normal() * s);
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Phase-fix with the R diagonal so the distribution is exactly Haar.
  for (int j = 0; j < d; ++j) {
    Complex rjj = r(j, j);
    double mag = std::abs(rjj);
    q.col(j) *= mag > 0 ? rjj / mag : Complex(1, 0);
  }
  return Basis(std::move(q));
}

std::string serialize_basis_set(const BasisSet& bs) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["d"] = bs.dim();
  nlohmann::json arr = nlohmann::json::array();
  for (int mu = 0; mu < bs.count(); ++mu)
    arr.push_back(matrix_to_json(bs.basis(mu).matrix()));
  j["bases"] = std::move(arr);
  return j.dump(1) + "\n";
}

void save_basis_set(const BasisSet& bs, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ValidationError("save_basis_set: cannot open " + path);
  f << serialize_basis_set(bs);
  if (!f) throw ValidationError("save_basis_set: write failed for " + path);
}

BasisSet load_basis_set(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("load_basis_set: cannot open " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("load_basis_set: malformed JSON in " + path + ": " +
                          e.what());
  }
  if (!j.is_object() || !j.contains("format_version") || !j.contains("d") ||
      !j.contains("bases"))
    throw ValidationError("load_basis_set: missing required fields in " + path);
  if (j["format_version"] != 1)
    throw ValidationError("load_basis_set: unsupported format_version in " +
                          path);
  int d;
  try {
    d = j["d"].get<int>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError("load_basis_set: field d is not an integer");
  }
  if (d < 2 || !j["bases"].is_array() || j["bases"].empty())
    throw ValidationError("load_basis_set: dimension inconsistency in " + path);

  std::vector<Basis> out;
  for (const auto& cols : j["bases"]) {
    if (!cols.is_array() || cols.size() != static_cast<std::size_t>(d) * d)
      throw ValidationError("load_basis_set: basis entry count does not match "
                            "dimension " + std::to_string(d));
    CMatrix m(d, d);
    std::size_t idx = 0;
    for (int jcol = 0; jcol < d; ++jcol)
      for (int i = 0; i < d; ++i, ++idx) {
        const auto& pair = cols[idx];
        if (!pair.is_array() || pair.size() != 2 ||
            !pair[0].is_number() || !pair[1].is_number())
          throw ValidationError("load_basis_set: entries must be [re,im] "
                                "number pairs");
        m(i, jcol) = Complex(pair[0].get<double>(), pair[1].get<double>());
      }
    out.emplace_back(std::move(m));  // Basis ctor reports orthonormality errors
  }
  return BasisSet(std::move(out));
}

}  // namespace steerlat::bases
