#include "steerlat/cem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <omp.h>

#include "steerlat/bounds.hpp"
#include "steerlat/numerics.hpp"
#include "steerlat/omega.hpp"
#include "steerlat/rng.hpp"
#include "steerlat/threading.hpp"

namespace steerlat::cem {

namespace {

void validate_config(const CEMConfig& c) {
  if (c.population < 10)
    throw ValidationError("cem: population must be >= 10");
  int elites = static_cast<int>(std::ceil(c.elite_fraction * c.population));
  if (c.elite_fraction <= 0 || c.elite_fraction >= 1 || elites < 2)
    throw ValidationError("cem: elite_fraction must keep at least 2 elites");
  if (c.smoothing <= 0 || c.smoothing > 1)
    throw ValidationError("cem: smoothing must lie in (0, 1]");
  if (c.max_iters < 1) throw ValidationError("cem: max_iters must be >= 1");
  if (c.init_stddev <= 0)
    throw ValidationError("cem: init_stddev must be positive");
  if (c.stall_patience < 1)
    throw ValidationError("cem: stall_patience must be >= 1");
  if (c.restarts < 1) throw ValidationError("cem: restarts must be >= 1");
}

bases::BasisSet build_set(const RVector& params, int d, int n,
                          const states::GeneratorBasis& gens) {
  const int per = d * d - 1;
  std::vector<bases::Basis> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int mu = 0; mu < n; ++mu)
    out.push_back(parametrize_basis(params.segment(mu * per, per), gens));
  return bases::BasisSet(std::move(out));
}

}  // namespace

bases::Basis parametrize_basis(const RVector& params,
                               const states::GeneratorBasis& gens) {
  if (params.size() != gens.count())
    throw ValidationError("parametrize_basis: expected " +
                          std::to_string(gens.count()) + " coefficients");
  const int d = gens.dim();
  CMatrix h = CMatrix::Zero(d, d);
  for (int mu = 0; mu < gens.count(); ++mu)
    h += params(mu) * gens.matrix(mu);
  return bases::Basis(numerics::herm_expi(h));
}

CEMResult cem_minimize(int d, int n, int L, const CEMConfig& config,
                       Objective objective) {
  if (d < 2 || n < 2) throw ValidationError("cem: need d >= 2 and N >= 2");
  if (L < 1 || L > n * d)
    throw ValidationError("cem: L must satisfy 1 <= L <= N*d");
  validate_config(config);

  const states::GeneratorBasis gens(d);
  const int dim = n * (d * d - 1);
  const int pop = config.population;
  const int elites = static_cast<int>(
      std::ceil(config.elite_fraction * config.population));
  const int exact_count = std::max((pop + 1) / 2, elites);

  auto exact_eval = [&](const bases::BasisSet& bs) {
    if (objective == Objective::omega_bar)
      return omega::omega_value(bs, L) / L;
    return std::sqrt(bounds::max_tr_x2(bs, L)) / L;
  };
  auto surrogate_eval = [&](const bases::BasisSet& bs) {
    return omega::omega_greedy(bs, L) / L;
  };

  double best_val = std::numeric_limits<double>::infinity();
  RVector best_params;
  bool have_best = false;
  std::vector<double> history;
  std::uint64_t evaluations = 0;

  for (int restart = 0; restart < config.restarts; ++restart) {
    RVector mean = RVector::Zero(dim);
    RVector sdev = RVector::Constant(dim, config.init_stddev);
    int stall = 0;
    // Injection and stall bookkeeping are restart-local: seeding a fresh
    // restart with the previous basin's incumbent (or stalling it against
    // the global best) would collapse every restart into the first one.
    double local_best = std::numeric_limits<double>::infinity();
    RVector local_params;
    bool have_local = false;

    for (int gen = 0; gen < config.max_iters; ++gen) {
      std::vector<RVector> cands(static_cast<std::size_t>(pop));
      // Candidate 0 re-injects this restart's incumbent; every other
      // candidate draws from its own seed-derived stream so results do not
      // depend on the worker count or evaluation order.
      for (int c = 0; c < pop; ++c) {
        if (c == 0 && have_local) {
          cands[0] = local_params;
          continue;
        }
        Rng r(derive_seed(config.seed,
                                    static_cast<std::uint64_t>(restart),
                                    static_cast<std::uint64_t>(gen),
                                    static_cast<std::uint64_t>(c)));
        RVector p(dim);
        for (int i = 0; i < dim; ++i) p(i) = mean(i) + sdev(i) * r.normal();
        cands[static_cast<std::size_t>(c)] = std::move(p);
      }

      std::vector<double> surrogate(static_cast<std::size_t>(pop), 0.0);
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
      for (int c = 0; c < pop; ++c) {
        bases::BasisSet bs = build_set(cands[static_cast<std::size_t>(c)], d,
                                       n, gens);
        surrogate[static_cast<std::size_t>(c)] = surrogate_eval(bs);
      }

      std::vector<int> order(static_cast<std::size_t>(pop));
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return surrogate[static_cast<std::size_t>(a)] <
               surrogate[static_cast<std::size_t>(b)];
      });

      std::vector<double> exact(static_cast<std::size_t>(exact_count), 0.0);
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
      for (int i = 0; i < exact_count; ++i) {
        int c = order[static_cast<std::size_t>(i)];
        bases::BasisSet bs = build_set(cands[static_cast<std::size_t>(c)], d,
                                       n, gens);
        exact[static_cast<std::size_t>(i)] = exact_eval(bs);
      }
      evaluations += static_cast<std::uint64_t>(exact_count);

      std::vector<int> rank(static_cast<std::size_t>(exact_count));
      std::iota(rank.begin(), rank.end(), 0);
      std::stable_sort(rank.begin(), rank.end(), [&](int a, int b) {
        return exact[static_cast<std::size_t>(a)] <
               exact[static_cast<std::size_t>(b)];
      });

      double gen_best = exact[static_cast<std::size_t>(rank[0])];
      if (gen_best < local_best - 1e-9) stall = 0; else ++stall;
      if (gen_best < local_best) {
        local_best = gen_best;
        local_params = cands[static_cast<std::size_t>(
            order[static_cast<std::size_t>(rank[0])])];
        have_local = true;
      }
      if (gen_best < best_val) {
        best_val = gen_best;
        best_params = local_params;
        have_best = true;
      }
      history.push_back(best_val);

      RVector fit_mean = RVector::Zero(dim);
      RVector fit_var = RVector::Zero(dim);
      for (int e = 0; e < elites; ++e) {
        const RVector& p = cands[static_cast<std::size_t>(
            order[static_cast<std::size_t>(rank[static_cast<std::size_t>(e)])])];
        fit_mean += p;
      }
      fit_mean /= elites;
      for (int e = 0; e < elites; ++e) {
        const RVector& p = cands[static_cast<std::size_t>(
            order[static_cast<std::size_t>(rank[static_cast<std::size_t>(e)])])];
        fit_var += (p - fit_mean).cwiseAbs2();
      }
      fit_var /= elites;

      mean = config.smoothing * fit_mean + (1 - config.smoothing) * mean;
      sdev = (config.smoothing * fit_var.cwiseSqrt() +
              (1 - config.smoothing) * sdev)
                 .cwiseMax(1e-8);

      if (stall >= config.stall_patience) break;
    }
  }

  if (!have_best)
    throw std::runtime_error("cem: no candidate was ever evaluated");

  // Independent re-verification of the reported optimum.
  bases::BasisSet best_set = build_set(best_params, d, n, gens);
  double check = exact_eval(best_set);
  if (std::abs(check - best_val) > 1e-9)
    throw std::runtime_error("cem: re-evaluation of the best candidate "
                             "disagrees with the recorded objective");
  if (best_val < 1.0 / d - 1e-9)
    throw std::runtime_error("cem: objective fell below the 1/d floor");
  return CEMResult{std::move(best_set), best_val, std::move(history),
                   evaluations};
}

std::vector<CurvePoint> threshold_curve(states::Family family, int d,
                                        std::pair<int, int> n_range,
                                        const CEMConfig& config) {
  if (n_range.first < 2 || n_range.second < n_range.first)
    throw ValidationError("threshold_curve: need 2 <= n_lo <= n_hi");
  if (family == states::Family::two_qubit_werner && d != 2)
    throw ValidationError("threshold_curve: two_qubit_werner requires d=2");

  std::vector<CurvePoint> out;
  for (int n = n_range.first; n <= n_range.second; ++n) {
    CEMConfig cfg = config;
    cfg.seed = derive_seed(config.seed, 0x7c, static_cast<std::uint64_t>(n));
    int L = family == states::Family::werner ? n * (d - 1) : n;
    CEMResult r = cem_minimize(d, n, L, cfg, Objective::omega_bar);

    thresholds::ThresholdReport report;
    switch (family) {
      case states::Family::isotropic:
        report = thresholds::make_report(
            "isotropic", d, n, "exact",
            thresholds::iso_threshold(d, r.best_omega_bar));
        break;
      case states::Family::werner:
        report = thresholds::make_report(
            "werner", d, n, "exact",
            thresholds::werner_threshold(d, r.best_omega_bar));
        break;
      case states::Family::two_qubit_werner:
        report = thresholds::make_report(
            "two_qubit_werner", d, n, "exact",
            thresholds::two_qubit_threshold(r.best_omega_bar));
        break;
    }
    out.push_back(CurvePoint{n, std::move(report), std::move(r)});
  }
  return out;
}

}  // namespace steerlat::cem
