#include "steerlat/states.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "steerlat/numerics.hpp"

namespace steerlat::states {

namespace {

CVector kron_vec(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j)
      out(i * b.size() + j) = a(i) * b(j);
  return out;
}

CMatrix swap_operator(int d) {
  CMatrix f = CMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) f(i * d + j, j * d + i) = 1.0;
  return f;
}

// Bloch components of |v><v| in the generator order of `gens`.
RVector bloch_direction(const CVector& v, const GeneratorBasis& gens) {
  RVector out(gens.count());
  for (int mu = 0; mu < gens.count(); ++mu)
    out(mu) = std::real(v.dot(gens.matrix(mu) * v));
  return out;
}

bases::Basis conjugate_basis(const bases::Basis& b) {
  return bases::Basis(b.matrix().conjugate());
}

}  // namespace

DensityMatrix::DensityMatrix(int dim_a, int dim_b, CMatrix entries)
    : da_(dim_a), db_(dim_b), m_(std::move(entries)) {
  if (da_ < 2 || db_ < 2)
    throw ValidationError("DensityMatrix: subsystem dimensions must be >= 2");
  const int dim = da_ * db_;
  if (m_.rows() != dim || m_.cols() != dim)
    throw ValidationError("DensityMatrix: expected a " + std::to_string(dim) +
                          "x" + std::to_string(dim) + " matrix");
  numerics::require_hermitian(m_, "DensityMatrix", 1e-10);
  m_ = 0.5 * (m_ + m_.adjoint().eval());
  if (std::abs(m_.trace().real() - 1.0) > 1e-10 ||
      std::abs(m_.trace().imag()) > 1e-10)
    throw ValidationError("DensityMatrix: trace must be 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -1e-9)
    throw ValidationError("DensityMatrix: not positive semidefinite (min "
                          "eigenvalue " +
                          std::to_string(es.eigenvalues()(0)) + ")");
}

DensityMatrix isotropic_state(int d, double w) {
  if (d < 2) throw ValidationError("isotropic_state: d must be >= 2");
  double lo = -1.0 / (d * d - 1);
  if (w < lo - 1e-12 || w > 1 + 1e-12)
    throw ValidationError("isotropic_state: w outside the physical range");
  CVector phi = CVector::Zero(d * d);
  for (int i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(double(d));
  CMatrix m = w * (phi * phi.adjoint()) +
              (1.0 - w) / (d * d) * CMatrix::Identity(d * d, d * d);
  return DensityMatrix(d, d, std::move(m));
}

DensityMatrix werner_state(int d, double eta) {
  if (d < 2) throw ValidationError("werner_state: d must be >= 2");
  double lo = -static_cast<double>(d - 1) / (d + 1);
  if (eta < lo - 1e-12 || eta > 1 + 1e-12)
    throw ValidationError("werner_state: eta outside the physical range");
  double alpha = (d - 1.0 + eta) / (static_cast<double>(d) * d * (d - 1));
  double beta = -eta / (static_cast<double>(d) * (d - 1));
  CMatrix m = alpha * CMatrix::Identity(d * d, d * d) + beta * swap_operator(d);
  return DensityMatrix(d, d, std::move(m));
}

DensityMatrix two_qubit_werner(double w) {
  if (w < -1.0 / 3 - 1e-12 || w > 1 + 1e-12)
    throw ValidationError("two_qubit_werner: w outside the physical range");
  CVector psi = CVector::Zero(4);
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = -1.0 / std::sqrt(2.0);
  CMatrix m = w * (psi * psi.adjoint()) + (1.0 - w) / 4 * CMatrix::Identity(4, 4);
  return DensityMatrix(2, 2, std::move(m));
}

GeneratorBasis::GeneratorBasis(int d) : d_(d) {
  if (d < 2) throw ValidationError("GeneratorBasis: d must be >= 2");
  const Complex I(0, 1);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      CMatrix g = CMatrix::Zero(d, d);
      g(i, j) = -I;
      g(j, i) = I;
      g_.push_back(std::move(g));
    }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      CMatrix g = CMatrix::Zero(d, d);
      g(i, j) = 1;
      g(j, i) = 1;
      g_.push_back(std::move(g));
    }
  for (int l = 1; l < d; ++l) {
    CMatrix g = CMatrix::Zero(d, d);
    double norm = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int k = 0; k < l; ++k) g(k, k) = norm;
    g(l, l) = -l * norm;
    g_.push_back(std::move(g));
  }
}

RMatrix joint_probability(const DensityMatrix& rho, const bases::Basis& a,
                          const bases::Basis& b) {
  if (a.dim() != rho.dim_a() || b.dim() != rho.dim_b())
    throw ValidationError("joint_probability: basis dimensions must match the "
                          "state's subsystems");
  RMatrix p(a.dim(), b.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) {
      CVector v = kron_vec(a.vector(i), b.vector(j));
      double val = std::real(v.dot(rho.matrix() * v));
      if (val < -1e-10)
        throw ValidationError("joint_probability: probability " +
                              std::to_string(val) + " below tolerance");
      p(i, j) = std::max(val, 0.0);
    }
  return p;
}

AggregatedDistribution aggregated_upsilon(const DensityMatrix& rho,
                                          const bases::Basis& a,
                                          const bases::Basis& b) {
  if (rho.dim_a() != rho.dim_b())
    throw ValidationError("aggregated_upsilon: needs equal local dimensions");
  const int d = rho.dim_a();
  RMatrix p = joint_probability(rho, a, b);
  AggregatedDistribution out;
  out.upsilon.assign(static_cast<std::size_t>(d), 0.0);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      out.upsilon[static_cast<std::size_t>(k)] += p(i, (i + k) % d);
  out.provenance = Provenance::numeric;
  return out;
}

AggregatedDistribution upsilon_closed_form(Family family, int d, double param) {
  AggregatedDistribution out;
  out.provenance = Provenance::closed_form;
  switch (family) {
    case Family::isotropic: {
      if (d < 2) throw ValidationError("upsilon_closed_form: d must be >= 2");
      out.upsilon.assign(static_cast<std::size_t>(d), (1.0 - param) / d);
      out.upsilon[0] = (1.0 + (d - 1) * param) / d;
      return out;
    }
    case Family::werner: {
      if (d < 2) throw ValidationError("upsilon_closed_form: d must be >= 2");
      out.upsilon.assign(static_cast<std::size_t>(d),
                         (d - 1.0 + param) / (static_cast<double>(d) * (d - 1)));
      out.upsilon[0] = (1.0 - param) / d;
      return out;
    }
    case Family::two_qubit_werner: {
      if (d != 2)
        throw ValidationError("upsilon_closed_form: two_qubit_werner is d=2");
      out.upsilon = {(1.0 + param) / 2, (1.0 - param) / 2};
      return out;
    }
  }
  throw ValidationError("upsilon_closed_form: unknown family");
}

RMatrix correlation_matrix(const DensityMatrix& rho,
                           const GeneratorBasis& gens) {
  if (gens.dim() != rho.dim_a() || gens.dim() != rho.dim_b())
    throw ValidationError("correlation_matrix: generator dimension mismatch");
  const int d = gens.dim(), k = gens.count();
  RMatrix t(k, k);
  for (int mu = 0; mu < k; ++mu) {
    // Partial contraction over Alice: B(j,j') = sum_{i,i'} rho(ij,i'j') pi(i',i).
    CMatrix contracted = CMatrix::Zero(d, d);
    const CMatrix& pa = gens.matrix(mu);
    for (int i = 0; i < d; ++i)
      for (int ip = 0; ip < d; ++ip) {
        Complex w = pa(ip, i);
        if (w == Complex(0, 0)) continue;
        for (int j = 0; j < d; ++j)
          for (int jp = 0; jp < d; ++jp)
            contracted(j, jp) += rho.matrix()(i * d + j, ip * d + jp) * w;
      }
    for (int nu = 0; nu < k; ++nu)
      t(mu, nu) = std::real((contracted * gens.matrix(nu)).trace());
  }
  return t;
}

std::array<double, 3> two_qubit_singular_values(const DensityMatrix& rho) {
  if (rho.dim_a() != 2 || rho.dim_b() != 2)
    throw ValidationError("two_qubit_singular_values: needs a 2x2 state");
  GeneratorBasis gens(2);
  RMatrix t = correlation_matrix(rho, gens);
  Eigen::JacobiSVD<RMatrix> svd(t);
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) out[static_cast<std::size_t>(i)] = svd.singularValues()(i);
  return out;
}

double steering_parameter(const DensityMatrix& rho,
                          const bases::BasisSet& settings_a,
                          const bases::BasisSet& settings_b, int L) {
  if (settings_a.count() != settings_b.count())
    throw ValidationError("steering_parameter: Alice and Bob need the same "
                          "number of settings");
  const int n = settings_a.count(), d = rho.dim_b();
  if (rho.dim_a() != rho.dim_b())
    throw ValidationError("steering_parameter: needs equal local dimensions");
  if (L < 1 || L > n * d)
    throw ValidationError("steering_parameter: L must satisfy 1 <= L <= N*d");
  std::vector<double> pool;
  pool.reserve(static_cast<std::size_t>(n * d));
  for (int mu = 0; mu < n; ++mu) {
    auto agg = aggregated_upsilon(rho, settings_a.basis(mu), settings_b.basis(mu));
    pool.insert(pool.end(), agg.upsilon.begin(), agg.upsilon.end());
  }
  std::sort(pool.begin(), pool.end(), std::greater<>());
  double s = std::accumulate(pool.begin(), pool.begin() + L, 0.0);
  return s / L;
}

Verdict witness(const DensityMatrix& rho, const bases::BasisSet& settings_a,
                const bases::BasisSet& settings_b, const WitnessOptions& opts) {
  if (settings_a.count() != settings_b.count())
    throw ValidationError("witness: Alice and Bob need the same number of "
                          "settings");
  const int n = settings_a.count();
  const int d = rho.dim_b();

  auto apply_unitary = [](const bases::BasisSet& bs,
                          const std::optional<CMatrix>& u) {
    if (!u) return bs;
    std::vector<bases::Basis> out;
    out.reserve(static_cast<std::size_t>(bs.count()));
    for (int mu = 0; mu < bs.count(); ++mu)
      out.emplace_back(CMatrix(*u * bs.basis(mu).matrix()));
    return bases::BasisSet(std::move(out));
  };
  bases::BasisSet sa = apply_unitary(settings_a, opts.alice_unitary);
  bases::BasisSet sb = apply_unitary(settings_b, opts.bob_unitary);

  BobTransform tr = opts.transform;
  if (tr == BobTransform::automatic)
    tr = (rho.dim_a() == 2 && rho.dim_b() == 2) ? BobTransform::svd_align
                                                : BobTransform::identity;
  if (tr == BobTransform::svd_align && (rho.dim_a() != 2 || rho.dim_b() != 2))
    throw ValidationError("witness: svd_align applies to two-qubit states");

  // Pool of aggregated components across the N settings.
  std::vector<double> pool;
  pool.reserve(static_cast<std::size_t>(n * d));
  bases::BasisSet bound_set = sb;  // set whose Omega profile bounds S_L

  if (tr == BobTransform::svd_align) {
    GeneratorBasis gens(2);
    RMatrix t = correlation_matrix(rho, gens);
    Eigen::JacobiSVD<RMatrix> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
    RVector tvals = svd.singularValues();
    for (int mu = 0; mu < n; ++mu) {
      RVector a = bloch_direction(sa.basis(mu).vector(0), gens);
      RVector b = bloch_direction(sb.basis(mu).vector(0), gens);
      // Directions read in the frame that diagonalizes the correlations:
      // correlation = sum_k t_k a_k b_k, marginals cancel in the aggregate.
      // Any O(3) rotation of the settings lifts to a (anti)unitary on the
      // qubit, so the original settings carry the valid bound.
      double c = 0;
      for (int k = 0; k < 3; ++k) c += tvals(k) * a(k) * b(k);
      pool.push_back((1.0 + c) / 2);
      pool.push_back((1.0 - c) / 2);
    }
  } else {
    if (tr == BobTransform::conjugate) {
      std::vector<bases::Basis> conj;
      conj.reserve(static_cast<std::size_t>(n));
      for (int mu = 0; mu < n; ++mu) conj.push_back(conjugate_basis(sb.basis(mu)));
      bound_set = bases::BasisSet(std::move(conj));
    }
    for (int mu = 0; mu < n; ++mu) {
      auto agg = aggregated_upsilon(rho, sa.basis(mu), bound_set.basis(mu));
      pool.insert(pool.end(), agg.upsilon.begin(), agg.upsilon.end());
    }
  }

  std::sort(pool.begin(), pool.end(), std::greater<>());

  std::vector<omega::OmegaResult> local_profile;
  const std::vector<omega::OmegaResult>* profile = opts.omega_profile;
  if (!profile) {
    local_profile = omega::omega_profile(bound_set, opts.search);
    profile = &local_profile;
  }
  if (static_cast<int>(profile->size()) < n * d)
    throw ValidationError("witness: bound profile shorter than N*d");

  Verdict v;
  double run = pool[0];
  for (int L = 2; L <= n * d; ++L) {
    run += pool[static_cast<std::size_t>(L - 1)];
    double s = run / L;
    double bar = (*profile)[static_cast<std::size_t>(L - 1)].value_bar;
    v.s_profile.push_back(s);
    v.omega_bar_profile.push_back(bar);
    double margin = s - bar;
    if (v.best_L == 0 || margin > v.margin + 1e-15) {
      v.best_L = L;
      v.margin = margin;
    }
  }
  v.steerable = v.margin > opts.tolerance;
  return v;
}

ParsedState parse_state_spec(const std::string& spec) {
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      std::size_t p = s.find(':', start);
      if (p == std::string::npos) {
        parts.push_back(s.substr(start));
        break;
      }
      parts.push_back(s.substr(start, p - start));
      start = p + 1;
    }
    return parts;
  };
  auto to_int = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ValidationError("state spec: '" + s + "' is not an integer");
    }
  };
  auto to_double = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ValidationError("state spec: '" + s + "' is not a number");
    }
  };

  if (spec.rfind("iso:", 0) == 0) {
    auto parts = split(spec);
    if (parts.size() != 3)
      throw ValidationError("state spec: expected iso:<d>:<w>");
    int d = to_int(parts[1]);
    double w = to_double(parts[2]);
    return ParsedState{isotropic_state(d, w), Family::isotropic, w};
  }
  if (spec.rfind("werner2q:", 0) == 0) {
    auto parts = split(spec);
    if (parts.size() != 2)
      throw ValidationError("state spec: expected werner2q:<w>");
    double w = to_double(parts[1]);
    return ParsedState{two_qubit_werner(w), Family::two_qubit_werner, w};
  }
  if (spec.rfind("werner:", 0) == 0) {
    auto parts = split(spec);
    if (parts.size() != 3)
      throw ValidationError("state spec: expected werner:<d>:<eta>");
    int d = to_int(parts[1]);
    double eta = to_double(parts[2]);
    return ParsedState{werner_state(d, eta), Family::werner, eta};
  }
  return ParsedState{load_density_matrix(spec), std::nullopt, 0.0};
}

void save_density_matrix(const DensityMatrix& rho, const std::string& path) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["dim_a"] = rho.dim_a();
  j["dim_b"] = rho.dim_b();
  nlohmann::json entries = nlohmann::json::array();
  const int dim = rho.dim();
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c)
      entries.push_back({rho.matrix()(r, c).real(), rho.matrix()(r, c).imag()});
  j["entries"] = std::move(entries);
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << j.dump(1) << "\n";
}

DensityMatrix load_density_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open state file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("state file '" + path + "' is not valid JSON: " +
                          e.what());
  }
  for (const char* key : {"format_version", "dim_a", "dim_b", "entries"})
    if (!j.contains(key))
      throw ValidationError("state file '" + path + "' is missing field '" +
                            std::string(key) + "'");
  if (!j["format_version"].is_number_integer() ||
      j["format_version"].get<int>() != 1)
    throw ValidationError("state file '" + path +
                          "': unsupported format_version");
  if (!j["dim_a"].is_number_integer() || !j["dim_b"].is_number_integer())
    throw ValidationError("state file '" + path +
                          "': dim_a and dim_b must be integers");
  int da = j["dim_a"].get<int>(), db = j["dim_b"].get<int>();
  if (da < 2 || db < 2)
    throw ValidationError("state file '" + path + "': dimensions must be >= 2");
  const auto& entries = j["entries"];
  if (!entries.is_array() ||
      entries.size() != static_cast<std::size_t>(da * db) *
                            static_cast<std::size_t>(da * db))
    throw ValidationError("state file '" + path +
                          "': entries must hold (dim_a*dim_b)^2 pairs");
  CMatrix m(da * db, da * db);
  const int dim = da * db;
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      const auto& e = entries[static_cast<std::size_t>(r) *
                                  static_cast<std::size_t>(dim) +
                              static_cast<std::size_t>(c)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
          !e[1].is_number())
        throw ValidationError("state file '" + path +
                              "': each entry must be an [re, im] pair");
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  return DensityMatrix(da, db, std::move(m));
}

}  // namespace steerlat::states
