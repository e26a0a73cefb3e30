#include "steerlat/omega.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <omp.h>

#include "steerlat/numerics.hpp"
#include "steerlat/threading.hpp"

namespace steerlat::omega {

namespace {

constexpr double kTieSlack = 1e-12;
constexpr std::uint64_t kProgressMask = (1u << 21) - 1;

double top_eig(const CMatrix& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(x, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(x.rows() - 1);
}

double bottom_eig(const CMatrix& x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(x, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

struct AtomicMax {
  std::atomic<double> v;
  explicit AtomicMax(double init) : v(init) {}
  void update(double x) {
    double cur = v.load(std::memory_order_relaxed);
    while (x > cur && !v.compare_exchange_weak(cur, x)) {
    }
  }
  double get() const { return v.load(std::memory_order_relaxed); }
};

struct AtomicMin {
  std::atomic<double> v;
  explicit AtomicMin(double init) : v(init) {}
  void update(double x) {
    double cur = v.load(std::memory_order_relaxed);
    while (x < cur && !v.compare_exchange_weak(cur, x)) {
    }
  }
  double get() const { return v.load(std::memory_order_relaxed); }
};

// Shared per-search immutable data.  Candidates are indexed c = mu*d + i in
// natural (basis-major) order.
struct Problem {
  int d, n, m, L;
  CMatrix vecs;   // d x m stacked columns
  RMatrix ov2;    // squared overlap moduli, m x m
  double c2max;   // largest cross-basis squared overlap
  mutable std::atomic<std::uint64_t> nodes{0};
  const SearchOptions* opts;

  Problem(const bases::BasisSet& bs, int L_, const SearchOptions& o)
      : d(bs.dim()), n(bs.count()), m(bs.dim() * bs.count()), L(L_),
        vecs(bs.stacked()), ov2(m, m), c2max(0), opts(&o) {
    CMatrix g = vecs.adjoint() * vecs;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) ov2(i, j) = std::norm(g(i, j));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (i / d != j / d) c2max = std::max(c2max, ov2(i, j));
  }

  int basis_of(int c) const { return c / d; }

  void count_node(double incumbent) const {
    std::uint64_t k = nodes.fetch_add(1, std::memory_order_relaxed) + 1;
    if ((k & kProgressMask) == 0 && opts->progress)
      opts->progress(k, incumbent);
  }
};

// Candidate ordering heuristic: the lexicographically smallest pair with
// maximal overlap first, then the rest by marginal top-eigenvalue gain.
std::vector<int> heuristic_order(const Problem& p) {
  int a = 0, b = 1;
  double best = -1;
  for (int i = 0; i < p.m; ++i)
    for (int j = i + 1; j < p.m; ++j)
      if (p.basis_of(i) != p.basis_of(j) && p.ov2(i, j) > best + 1e-15) {
        best = p.ov2(i, j);
        a = i;
        b = j;
      }
  CMatrix x0 = p.vecs.col(a) * p.vecs.col(a).adjoint() +
               p.vecs.col(b) * p.vecs.col(b).adjoint();
  std::vector<double> gain(static_cast<std::size_t>(p.m), 0.0);
  for (int c = 0; c < p.m; ++c) {
    if (c == a || c == b) continue;
    gain[static_cast<std::size_t>(c)] =
        top_eig(x0 + p.vecs.col(c) * p.vecs.col(c).adjoint());
  }
  std::vector<int> ord;
  ord.reserve(static_cast<std::size_t>(p.m));
  ord.push_back(a);
  ord.push_back(b);
  for (int c = 0; c < p.m; ++c)
    if (c != a && c != b) ord.push_back(c);
  std::stable_sort(ord.begin() + 2, ord.end(), [&](int x, int y) {
    return gain[static_cast<std::size_t>(x)] > gain[static_cast<std::size_t>(y)];
  });
  return ord;
}

// Greedy incumbent: grow from the best pair by maximal marginal gain.
double greedy_value(const Problem& p) {
  std::vector<int> ord = heuristic_order(p);
  CMatrix x = CMatrix::Zero(p.d, p.d);
  std::vector<char> used(static_cast<std::size_t>(p.m), 0);
  auto add = [&](int c) {
    x += p.vecs.col(c) * p.vecs.col(c).adjoint();
    used[static_cast<std::size_t>(c)] = 1;
  };
  add(ord[0]);
  if (p.L >= 2) add(ord[1]);
  double lam = top_eig(x);
  for (int k = std::min(p.L, 2); k < p.L; ++k) {
    int bestc = -1;
    double bestlam = -1;
    for (int c = 0; c < p.m; ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      double l = top_eig(x + p.vecs.col(c) * p.vecs.col(c).adjoint());
      if (l > bestlam + 1e-15) {
        bestlam = l;
        bestc = c;
      }
    }
    add(bestc);
    lam = bestlam;
  }
  return lam;
}

// Upper bound on any completion of a partial selection: trivial growth,
// per-basis projector caps, and the trace/purity relaxations.
double completion_bound(const Problem& p, double lam, double u_cross, int k,
                        int future_bases) {
  int r = p.L - k;
  double ub = lam + r;
  ub = std::min(ub, lam + std::min(r, future_bases));
  double t_ub = p.L + 2.0 * u_cross +
                2.0 * p.c2max * (static_cast<double>(r) * k +
                                 0.5 * static_cast<double>(r) * (r - 1));
  // Final selection has trace L; purity at most t_ub.
  double inner = p.d * t_ub - static_cast<double>(p.L) * p.L;
  double gamma = (p.L + std::sqrt((p.d - 1) * std::max(0.0, inner))) / p.d;
  ub = std::min(ub, gamma);
  ub = std::min(ub, std::sqrt(std::max(0.0, t_ub)));
  return std::min(ub, static_cast<double>(p.n));
}

struct SelectState {
  CMatrix x;
  std::vector<int> chosen;
  double u_cross = 0;  // sum over chosen cross-basis pairs of ov2
};

// Maximizing DFS over the ordered candidate pool.  `suffix_bases[p]` counts
// distinct bases present in pool[p..].
void dfs_max(const Problem& p, const std::vector<int>& pool,
             const std::vector<int>& suffix_bases, std::size_t next,
             SelectState& st, AtomicMax& inc) {
  int k = static_cast<int>(st.chosen.size());
  if (k == p.L) {
    inc.update(top_eig(st.x));
    return;
  }
  std::size_t last = pool.size() - static_cast<std::size_t>(p.L - k);
  for (std::size_t pos = next; pos <= last; ++pos) {
    int c = pool[pos];
    double du = 0;
    for (int o : st.chosen)
      if (p.basis_of(o) != p.basis_of(c)) du += p.ov2(o, c);
    st.x += p.vecs.col(c) * p.vecs.col(c).adjoint();
    st.chosen.push_back(c);
    st.u_cross += du;
    p.count_node(inc.get());
    double lam = top_eig(st.x);
    if (k + 1 == p.L) {
      inc.update(lam);
    } else {
      int fb = pos + 1 < pool.size()
                   ? suffix_bases[pos + 1]
                   : 0;
      double ub = completion_bound(p, lam, st.u_cross, k + 1, fb);
      if (ub > inc.get() - kTieSlack)
        dfs_max(p, pool, suffix_bases, pos + 1, st, inc);
    }
    st.u_cross -= du;
    st.chosen.pop_back();
    st.x -= p.vecs.col(c) * p.vecs.col(c).adjoint();
  }
}

std::vector<int> suffix_base_counts(const Problem& p,
                                    const std::vector<int>& pool) {
  std::vector<int> out(pool.size() + 1, 0);
  std::vector<char> seen(static_cast<std::size_t>(p.n), 0);
  int distinct = 0;
  for (std::size_t i = pool.size(); i-- > 0;) {
    int mu = p.basis_of(pool[i]);
    if (!seen[static_cast<std::size_t>(mu)]) {
      seen[static_cast<std::size_t>(mu)] = 1;
      ++distinct;
    }
    out[i] = distinct;
  }
  return out;
}

// Search over selections.  With symmetry reduction the root branches over
// which basis holds the first (lowest-index) occupied slot; vector 0 of
// that basis can be forced because the constructions' stabilizer groups act
// transitively on labels within each basis while fixing every basis setwise.
double search_selection_value(const Problem& p, bool symmetry) {
  AtomicMax inc(greedy_value(p));
  std::vector<int> ord = heuristic_order(p);

  if (symmetry) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
    for (int mu = 0; mu < p.n; ++mu) {
      if ((p.n - mu) * p.d < p.L) continue;
      std::vector<int> pool;
      for (int c : ord)
        if (p.basis_of(c) > mu || (p.basis_of(c) == mu && c % p.d != 0))
          pool.push_back(c);
      SelectState st;
      st.x = p.vecs.col(mu * p.d) * p.vecs.col(mu * p.d).adjoint();
      st.chosen = {mu * p.d};
      auto sfx = suffix_base_counts(p, pool);
      dfs_max(p, pool, sfx, 0, st, inc);
    }
  } else {
    auto sfx = suffix_base_counts(p, ord);
    int roots = p.m - p.L + 1;
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
    for (int r = 0; r < roots; ++r) {
      int c = ord[static_cast<std::size_t>(r)];
      SelectState st;
      st.x = p.vecs.col(c) * p.vecs.col(c).adjoint();
      st.chosen = {c};
      dfs_max(p, ord, sfx, static_cast<std::size_t>(r) + 1, st, inc);
    }
  }
  return inc.get();
}

// Complement route for L > m/2: Omega_L = N - min over complements of the
// bottom eigenvalue (every basis is complete, so the full stack sums to
// N * identity).  Adding a projector never lowers the bottom eigenvalue,
// which gives the pruning rule.
void dfs_min(const Problem& p, int mc, int next, SelectState& st,
             AtomicMin& inc) {
  int k = static_cast<int>(st.chosen.size());
  if (k == mc) {
    inc.update(bottom_eig(st.x));
    return;
  }
  int last = p.m - (mc - k);
  for (int c = next; c <= last; ++c) {
    st.x += p.vecs.col(c) * p.vecs.col(c).adjoint();
    st.chosen.push_back(c);
    p.count_node(static_cast<double>(p.n) - inc.get());
    double lo = bottom_eig(st.x);
    if (lo < inc.get() + kTieSlack) {
      if (k + 1 == mc)
        inc.update(lo);
      else
        dfs_min(p, mc, c + 1, st, inc);
    }
    st.chosen.pop_back();
    st.x -= p.vecs.col(c) * p.vecs.col(c).adjoint();
  }
}

double search_complement_value(const Problem& p) {
  int mc = p.m - p.L;
  AtomicMin inc(static_cast<double>(p.n));
  int roots = p.m - mc + 1;
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
  for (int r = 0; r < roots; ++r) {
    SelectState st;
    st.x = p.vecs.col(r) * p.vecs.col(r).adjoint();
    st.chosen = {r};
    dfs_min(p, mc, r + 1, st, inc);
  }
  return static_cast<double>(p.n) - inc.get();
}

// Serial include-first DFS in natural candidate order: the first leaf
// reaching the target value is the lexicographically smallest optimal
// selection, independent of how the value search explored.
bool lex_dfs(const Problem& p, double target, int next, SelectState& st,
             std::vector<int>& out) {
  int k = static_cast<int>(st.chosen.size());
  if (k == p.L) {
    if (top_eig(st.x) >= target) {
      out = st.chosen;
      return true;
    }
    return false;
  }
  int last = p.m - (p.L - k);
  for (int c = next; c <= last; ++c) {
    double du = 0;
    for (int o : st.chosen)
      if (p.basis_of(o) != p.basis_of(c)) du += p.ov2(o, c);
    st.x += p.vecs.col(c) * p.vecs.col(c).adjoint();
    st.chosen.push_back(c);
    st.u_cross += du;
    double lam = top_eig(st.x);
    bool viable = true;
    if (k + 1 < p.L) {
      double ub = completion_bound(p, lam, st.u_cross, k + 1, p.n);
      viable = ub >= target;
    } else {
      viable = lam >= target;
    }
    if (viable && lex_dfs(p, target, c + 1, st, out)) return true;
    st.u_cross -= du;
    st.chosen.pop_back();
    st.x -= p.vecs.col(c) * p.vecs.col(c).adjoint();
  }
  return false;
}

std::vector<std::pair<int, int>> lex_smallest_selection(const Problem& p,
                                                        double value) {
  std::vector<int> found;
  for (double slack : {kTieSlack, 1e-9}) {
    SelectState st;
    st.x = CMatrix::Zero(p.d, p.d);
    if (lex_dfs(p, value - slack, 0, st, found)) break;
  }
  if (found.empty())
    throw std::runtime_error("omega: tie-break pass failed to re-locate the "
                             "optimal selection");
  std::vector<std::pair<int, int>> sel;
  sel.reserve(found.size());
  for (int c : found) sel.emplace_back(c / p.d, c % p.d);
  return sel;
}

OmegaResult finish(const bases::BasisSet& bs, int L,
                   std::vector<std::pair<int, int>> sel, double value) {
  const int d = bs.dim();
  CMatrix x = CMatrix::Zero(d, d);
  for (auto [mu, i] : sel)
    x += bs.basis(mu).vector(i) * bs.basis(mu).vector(i).adjoint();
  auto eig = numerics::herm_max_eig(x);
  OmegaResult r;
  r.L = L;
  r.value = value;
  r.value_bar = value / L;
  r.selection = std::move(sel);
  r.optimal_state = eig.vector;
  return r;
}

std::vector<std::pair<int, int>> first_l_selection(int d, int L) {
  std::vector<std::pair<int, int>> sel;
  sel.reserve(static_cast<std::size_t>(L));
  for (int c = 0; c < L; ++c) sel.emplace_back(c / d, c % d);
  return sel;
}

void validate_range(const bases::BasisSet& bs, int L) {
  if (L < 1 || L > bs.dim() * bs.count())
    throw ValidationError("omega: L must satisfy 1 <= L <= N*d (got L=" +
                          std::to_string(L) + ", N*d=" +
                          std::to_string(bs.dim() * bs.count()) + ")");
}

// Lexicographically smallest maximal-overlap pair and its value.
std::pair<std::pair<int, int>, double> best_pair(const bases::BasisSet& bs) {
  CMatrix stacked = bs.stacked();
  const int d = bs.dim(), m = d * bs.count();
  double best = -1;
  std::pair<int, int> arg{0, 1};
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      if (i / d == j / d) continue;
      double ov = std::abs(stacked.col(i).dot(stacked.col(j)));
      if (ov > best + 1e-12) {
        best = ov;
        arg = {i, j};
      }
    }
  return {arg, best};
}

double search_value(const bases::BasisSet& bs, int L,
                    const SearchOptions& opts) {
  Problem p(bs, L, opts);
  if (L > p.m - L && p.m - L >= p.d) return search_complement_value(p);
  bool symmetry = opts.symmetry_reduction.value_or(bases::is_mub_set(bs));
  return search_selection_value(p, symmetry);
}

}  // namespace

OmegaResult omega_exact(const bases::BasisSet& bs, int L,
                        const SearchOptions& opts) {
  validate_range(bs, L);
  const int d = bs.dim(), n = bs.count();

  if (L > d * (n - 1)) {
    // Fewer than d vectors missing: every selection shares a common
    // eigenvector of eigenvalue N.
    return finish(bs, L, first_l_selection(d, L), static_cast<double>(n));
  }
  if (L == 1) return finish(bs, L, {{0, 0}}, 1.0);
  if (L == 2) {
    auto [pair, c] = best_pair(bs);
    return finish(bs, L,
                  {{pair.first / d, pair.first % d},
                   {pair.second / d, pair.second % d}},
                  1.0 + c);
  }

  SearchOptions local = opts;
  double value = search_value(bs, L, local);
  Problem p(bs, L, local);
  auto sel = lex_smallest_selection(p, value);
  return finish(bs, L, std::move(sel), value);
}

double omega_value(const bases::BasisSet& bs, int L,
                   const SearchOptions& opts) {
  validate_range(bs, L);
  const int d = bs.dim(), n = bs.count();
  if (L > d * (n - 1)) return static_cast<double>(n);
  if (L == 1) return 1.0;
  if (L == 2) return 1.0 + best_pair(bs).second;
  return search_value(bs, L, opts);
}

double omega_greedy(const bases::BasisSet& bs, int L) {
  validate_range(bs, L);
  SearchOptions opts;
  Problem p(bs, L, opts);
  return greedy_value(p);
}

std::vector<OmegaResult> omega_profile(const bases::BasisSet& bs,
                                       const SearchOptions& opts) {
  std::vector<OmegaResult> out;
  const int top = bs.dim() * bs.count();
  out.reserve(static_cast<std::size_t>(top));
  for (int L = 1; L <= top; ++L) out.push_back(omega_exact(bs, L, opts));
  return out;
}

majorization::ProbVector ur_bound_vector(const bases::BasisSet& bs,
                                         const SearchOptions& opts) {
  auto profile = omega_profile(bs, opts);
  std::vector<double> inc(profile.size());
  double prev = 0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    inc[i] = profile[i].value - prev;
    prev = profile[i].value;
  }
  return majorization::ProbVector(
      majorization::flatten_increments(std::move(inc)));
}

OmegaResult omega_two_bases(const bases::Basis& b1, const bases::Basis& b2,
                            int L) {
  if (b1.dim() != b2.dim())
    throw ValidationError("omega_two_bases: dimension mismatch");
  const int d = b1.dim();
  if (L < 1 || L > 2 * d)
    throw ValidationError("omega_two_bases: L must satisfy 1 <= L <= 2d");
  bases::BasisSet bs({b1, b2});

  if (L > d)  // more vectors than the dimension: the shared-direction bound
    return finish(bs, L, first_l_selection(d, L), 2.0);

  CMatrix u = overlap_matrix(b1, b2);
  double best = 1.0;
  std::vector<std::pair<int, int>> best_sel;

  // All splits |I1| = m, |I2| = L - m; lex-smallest optimal kept.
  for (int m = 0; m <= L; ++m) {
    std::vector<int> i1(static_cast<std::size_t>(m));
    std::vector<int> i2(static_cast<std::size_t>(L - m));
    std::function<void(int, int)> loop2;
    std::function<void(int, int)> loop1;
    auto eval = [&]() {
      double sigma = 0;
      if (m > 0 && L - m > 0) {
        CMatrix sub(m, L - m);
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < L - m; ++b)
            sub(a, b) = u(i1[static_cast<std::size_t>(a)],
                          i2[static_cast<std::size_t>(b)]);
        sigma = sub.jacobiSvd().singularValues()(0);
      }
      double val = 1.0 + sigma;
      std::vector<std::pair<int, int>> sel;
      for (int a : i1) sel.emplace_back(0, a);
      for (int b : i2) sel.emplace_back(1, b);
      if (val > best + kTieSlack ||
          (val > best - kTieSlack && (best_sel.empty() || sel < best_sel))) {
        best = std::max(best, val);
        best_sel = std::move(sel);
      }
    };
    loop2 = [&](int pos, int start) {
      if (pos == L - m) {
        eval();
        return;
      }
      for (int v = start; v < d; ++v) {
        i2[static_cast<std::size_t>(pos)] = v;
        loop2(pos + 1, v + 1);
      }
    };
    loop1 = [&](int pos, int start) {
      if (pos == m) {
        loop2(0, 0);
        return;
      }
      for (int v = start; v < d; ++v) {
        i1[static_cast<std::size_t>(pos)] = v;
        loop1(pos + 1, v + 1);
      }
    };
    loop1(0, 0);
  }
  return finish(bs, L, std::move(best_sel), best);
}

ConjectureReport conjecture_check(int d, int L) {
  if (L < 1 || L > d)
    throw ValidationError("conjecture_check: L must satisfy 1 <= L <= d");
  bases::BasisSet bs = bases::mub_set(d, 2);
  CMatrix u = overlap_matrix(bs.basis(0), bs.basis(1));

  const int m = L / 2;  // balanced split floor(L/2) | ceil(L/2)
  double balanced = 1.0;
  std::vector<int> i1(static_cast<std::size_t>(m));
  std::vector<int> i2(static_cast<std::size_t>(L - m));
  std::function<void(int, int)> loop2 = [&](int pos, int start) {
    if (pos == L - m) {
      double sigma = 0;
      if (m > 0 && L - m > 0) {
        CMatrix sub(m, L - m);
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < L - m; ++b)
            sub(a, b) = u(i1[static_cast<std::size_t>(a)],
                          i2[static_cast<std::size_t>(b)]);
        sigma = sub.jacobiSvd().singularValues()(0);
      }
      balanced = std::max(balanced, 1.0 + sigma);
      return;
    }
    for (int v = start; v < d; ++v) {
      i2[static_cast<std::size_t>(pos)] = v;
      loop2(pos + 1, v + 1);
    }
  };
  std::function<void(int, int)> loop1 = [&](int pos, int start) {
    if (pos == m) {
      loop2(0, 0);
      return;
    }
    for (int v = start; v < d; ++v) {
      i1[static_cast<std::size_t>(pos)] = v;
      loop1(pos + 1, v + 1);
    }
  };
  loop1(0, 0);

  ConjectureReport rep;
  rep.d = d;
  rep.L = L;
  rep.balanced_value = balanced;
  rep.exact_value = omega_two_bases(bs.basis(0), bs.basis(1), L).value;
  rep.agrees = std::abs(rep.balanced_value - rep.exact_value) <= 1e-9;
  return rep;
}

OmegaResult enumerate_reference(const bases::BasisSet& bs, int L) {
  validate_range(bs, L);
  const int d = bs.dim(), m = d * bs.count();
  CMatrix vecs = bs.stacked();

  double best = -1;
  std::vector<int> cur(static_cast<std::size_t>(L));
  std::vector<int> best_sel;
  CMatrix x = CMatrix::Zero(d, d);

  // Plain lexicographic combination scan with incremental projector sums.
  std::function<void(int, int)> rec = [&](int pos, int start) {
    if (pos == L) {
      double lam = top_eig(x);
      if (lam > best + kTieSlack) {
        best = lam;
        best_sel = cur;
      }
      return;
    }
    for (int c = start; c <= m - (L - pos); ++c) {
      cur[static_cast<std::size_t>(pos)] = c;
      x += vecs.col(c) * vecs.col(c).adjoint();
      rec(pos + 1, c + 1);
      x -= vecs.col(c) * vecs.col(c).adjoint();
    }
  };
  rec(0, 0);

  std::vector<std::pair<int, int>> sel;
  for (int c : best_sel) sel.emplace_back(c / d, c % d);
  return finish(bs, L, std::move(sel), best);
}

}  // namespace steerlat::omega
