#include "steerlat/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "steerlat/bases.hpp"
#include "steerlat/bounds.hpp"
#include "steerlat/cem.hpp"
#include "steerlat/common.hpp"
#include "steerlat/omega.hpp"
#include "steerlat/rng.hpp"
#include "steerlat/states.hpp"
#include "steerlat/threading.hpp"
#include "steerlat/thresholds.hpp"

namespace steerlat::cli {

namespace {

using nlohmann::json;

// One formatting pipeline for both outputs: CSV prints 12 significant
// digits, JSON stores the double that text parses back to, so both files
// carry the same numbers.
double jnum(double x) { return reparse_number(x); }

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw ValidationError("write failed for '" + path + "'");
}

std::string selection_text(const std::vector<std::pair<int, int>>& sel) {
  std::string s;
  for (std::size_t i = 0; i < sel.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(sel[i].first) + ":" + std::to_string(sel[i].second);
  }
  return s;
}

json selection_json(const std::vector<std::pair<int, int>>& sel) {
  json arr = json::array();
  for (const auto& [mu, i] : sel) arr.push_back({mu, i});
  return arr;
}

std::pair<int, int> parse_range(const std::string& text, const char* flag) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw CLI::ValidationError(std::string(flag), "expected <lo>:<hi>");
  try {
    int lo = std::stoi(text.substr(0, colon));
    int hi = std::stoi(text.substr(colon + 1));
    if (lo > hi) throw std::invalid_argument("empty range");
    return {lo, hi};
  } catch (const std::exception&) {
    throw CLI::ValidationError(std::string(flag),
                               "'" + text + "' is not a valid <lo>:<hi> range");
  }
}

omega::SearchOptions progress_options(std::ostream& err) {
  omega::SearchOptions opts;
  opts.progress = [&err](std::uint64_t nodes, double incumbent) {
    err << "[progress] nodes=" << nodes
        << " incumbent=" << format_number(incumbent) << "\n";
  };
  return opts;
}

// ---- omega ----------------------------------------------------------------

void run_omega(const std::string& bases_path, int l_arg, bool all,
               const std::string& method, const std::string& format,
               const std::string& out_path, std::ostream& out,
               std::ostream& err) {
  bases::BasisSet bs = bases::load_basis_set(bases_path);
  const int d = bs.dim(), n = bs.count();
  if (method == "two-bases" && n != 2)
    throw CLI::ValidationError("--method",
                               "two-bases needs exactly 2 bases, file has " +
                                   std::to_string(n));
  omega::SearchOptions opts = progress_options(err);

  std::vector<omega::OmegaResult> rows;
  std::vector<double> s_vector;
  if (all) {
    if (method == "two-bases") {
      for (int L = 1; L <= 2 * d; ++L)
        rows.push_back(omega::omega_two_bases(bs.basis(0), bs.basis(1), L));
      std::vector<double> inc(rows.size());
      double prev = 0;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        inc[i] = rows[i].value - prev;
        prev = rows[i].value;
      }
      auto s = majorization::ProbVector(
          majorization::flatten_increments(std::move(inc)));
      s_vector.assign(s.components().begin(), s.components().end());
    } else {
      rows = omega::omega_profile(bs, opts);
      auto s = omega::ur_bound_vector(bs, opts);
      s_vector.assign(s.components().begin(), s.components().end());
    }
  } else {
    rows.push_back(method == "two-bases"
                       ? omega::omega_two_bases(bs.basis(0), bs.basis(1), l_arg)
                       : omega::omega_exact(bs, l_arg, opts));
  }

  if (format == "csv") {
    std::string text = all ? "L,omega,omega_bar,s_component,selection\n"
                           : "L,omega,omega_bar,selection\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      text += std::to_string(r.L) + "," + format_number(r.value) + "," +
              format_number(r.value_bar) + ",";
      if (all) text += format_number(s_vector[i]) + ",";
      text += selection_text(r.selection) + "\n";
    }
    emit(text, out_path, out);
    return;
  }
  json j;
  j["format_version"] = 1;
  j["d"] = d;
  j["n"] = n;
  j["method"] = method;
  json jrows = json::array();
  for (const auto& r : rows) {
    json row;
    row["L"] = r.L;
    row["omega"] = jnum(r.value);
    row["omega_bar"] = jnum(r.value_bar);
    row["selection"] = selection_json(r.selection);
    jrows.push_back(std::move(row));
  }
  j["rows"] = std::move(jrows);
  if (all) {
    json s = json::array();
    for (double v : s_vector) s.push_back(jnum(v));
    j["s_vector"] = std::move(s);
  }
  emit(j.dump(1) + "\n", out_path, out);
}

// ---- bounds ---------------------------------------------------------------

void run_bounds(int d, int n, bool mub, const std::string& bases_path,
                int l_arg, bool all, const std::string& format,
                const std::string& out_path, std::ostream& out) {
  std::optional<bases::BasisSet> bs;
  if (!mub) {
    bs.emplace(bases::load_basis_set(bases_path));
    d = bs->dim();
    n = bs->count();
  }
  // Closed forms hold for L <= N(d-1); the general theta for L <= d(N-1).
  const int top = mub ? n * (d - 1) : d * (n - 1);
  std::vector<int> ls;
  if (all)
    for (int L = 1; L <= top; ++L) ls.push_back(L);
  else
    ls.push_back(l_arg);

  std::vector<bounds::BoundsProfile> rows;
  rows.reserve(ls.size());
  for (int L : ls)
    rows.push_back(mub ? bounds::mub_profile(L, d, n)
                       : bounds::general_profile(*bs, L));

  if (format == "csv") {
    std::string text =
        "L,theta,lambda,gamma,theta_bar,lambda_bar,gamma_bar,regime\n";
    for (const auto& r : rows)
      text += std::to_string(r.L) + "," + format_number(r.theta) + "," +
              format_number(r.lambda) + "," + format_number(r.gamma) + "," +
              format_number(r.theta_bar) + "," + format_number(r.lambda_bar) +
              "," + format_number(r.gamma_bar) + "," + regime_name(r.regime) +
              "\n";
    emit(text, out_path, out);
    return;
  }
  json j;
  j["format_version"] = 1;
  j["d"] = d;
  j["n"] = n;
  json jrows = json::array();
  for (const auto& r : rows) {
    json row;
    row["L"] = r.L;
    row["theta"] = jnum(r.theta);
    row["lambda"] = jnum(r.lambda);
    row["gamma"] = jnum(r.gamma);
    row["theta_bar"] = jnum(r.theta_bar);
    row["lambda_bar"] = jnum(r.lambda_bar);
    row["gamma_bar"] = jnum(r.gamma_bar);
    row["regime"] = regime_name(r.regime);
    jrows.push_back(std::move(row));
  }
  j["rows"] = std::move(jrows);
  emit(j.dump(1) + "\n", out_path, out);
}

// ---- threshold ------------------------------------------------------------

std::string canonical_family(const std::string& family) {
  if (family == "iso" || family == "isotropic") return "isotropic";
  if (family == "werner") return "werner";
  if (family == "werner2q" || family == "two_qubit_werner")
    return "two_qubit_werner";
  throw CLI::ValidationError("--family", "unknown family '" + family + "'");
}

thresholds::ThresholdReport threshold_for(const std::string& family, int d,
                                          int n, const std::string& source,
                                          std::ostream& err) {
  auto closed_bar = [&](int L) {
    if (source == "gamma") return bounds::gamma_mub(L, d, n) / L;
    if (source == "theta") return bounds::theta_mub(L, d, n) / L;
    return bounds::lambda_mub(L, d, n) / L;
  };
  omega::SearchOptions opts = progress_options(err);
  if (family == "isotropic") {
    double bar = source == "exact"
                     ? omega::omega_value(bases::mub_set(d, n), n, opts) / n
                     : closed_bar(n);
    return thresholds::make_report(family, d, n, source,
                                   thresholds::iso_threshold(d, bar));
  }
  if (family == "werner") {
    const int L = n * (d - 1);
    double bar = source == "exact"
                     ? omega::omega_value(bases::mub_set(d, n), L, opts) / L
                     : closed_bar(L);
    return thresholds::make_report(family, d, n, source,
                                   thresholds::werner_threshold(d, bar));
  }
  if (d != 2)
    throw ValidationError("threshold: two_qubit_werner requires d=2");
  double bar = source == "exact"
                   ? omega::omega_value(bases::mub_set(2, n), n, opts) / n
                   : closed_bar(n);
  return thresholds::make_report(family, 2, n, source,
                                 thresholds::two_qubit_threshold(bar));
}

json report_json(const thresholds::ThresholdReport& r) {
  json j;
  j["family"] = r.family;
  j["d"] = r.d;
  j["n"] = r.n;
  j["bound_source"] = r.bound_source;
  j["threshold"] = jnum(r.value);
  j["capped"] = r.capped;
  if (r.lhs_reference)
    j["lhs_reference"] = jnum(*r.lhs_reference);
  else
    j["lhs_reference"] = nullptr;
  return j;
}

void run_threshold(const std::string& family_arg, int d, int n,
                   const std::string& source, const std::string& sweep,
                   const std::string& format, const std::string& out_path,
                   std::ostream& out, std::ostream& err) {
  std::string family = canonical_family(family_arg);
  std::vector<int> dims;
  if (!sweep.empty()) {
    auto [lo, hi] = parse_range(sweep, "--sweep-d");
    for (int dd = lo; dd <= hi; ++dd) dims.push_back(dd);
  } else {
    dims.push_back(d);
  }

  std::vector<thresholds::ThresholdReport> reports;
  reports.reserve(dims.size());
  for (int dd : dims)
    reports.push_back(threshold_for(family, dd, n, source, err));

  if (format == "csv") {
    std::string text = thresholds::threshold_csv_header() + "\n";
    for (const auto& r : reports) text += thresholds::threshold_csv_row(r) + "\n";
    emit(text, out_path, out);
    return;
  }
  json j;
  j["format_version"] = 1;
  json rows = json::array();
  for (const auto& r : reports) rows.push_back(report_json(r));
  j["rows"] = std::move(rows);
  emit(j.dump(1) + "\n", out_path, out);
}

// ---- witness --------------------------------------------------------------

void run_witness(const std::string& state_spec, const std::string& bases_a,
                 const std::string& bases_b, const std::string& transform,
                 double tolerance, const std::string& out_path,
                 std::ostream& out, std::ostream& err) {
  states::ParsedState st = [&] {
    try {
      return states::parse_state_spec(state_spec);
    } catch (const ValidationError& e) {
      // A malformed family spec is a usage problem; a broken state file
      // keeps the validation exit code.
      bool family_prefixed = state_spec.rfind("iso:", 0) == 0 ||
                             state_spec.rfind("werner:", 0) == 0 ||
                             state_spec.rfind("werner2q:", 0) == 0;
      if (family_prefixed)
        throw CLI::ValidationError("--state", e.what());
      throw;
    }
  }();

  bases::BasisSet sa = bases::load_basis_set(bases_a);
  bases::BasisSet sb =
      bases_b.empty() ? sa : bases::load_basis_set(bases_b);

  states::WitnessOptions opts;
  opts.tolerance = tolerance;
  opts.search = progress_options(err);
  if (transform == "identity") {
    opts.transform = states::BobTransform::identity;
  } else if (transform == "conjugate") {
    opts.transform = states::BobTransform::conjugate;
  } else if (transform == "svd-align") {
    opts.transform = states::BobTransform::svd_align;
  } else {
    // Auto: the isotropic family's canonical strategy conjugates Bob's
    // bases; anything else follows the library default.
    opts.transform = st.family && *st.family == states::Family::isotropic
                         ? states::BobTransform::conjugate
                         : states::BobTransform::automatic;
  }

  states::Verdict v = states::witness(st.rho, sa, sb, opts);

  json j;
  j["format_version"] = 1;
  j["state"] = state_spec;
  j["steerable"] = v.steerable;
  j["best_L"] = v.best_L;
  j["margin"] = jnum(v.margin);
  json sp = json::array();
  for (double x : v.s_profile) sp.push_back(jnum(x));
  j["s_profile"] = std::move(sp);
  json op = json::array();
  for (double x : v.omega_bar_profile) op.push_back(jnum(x));
  j["omega_bar_profile"] = std::move(op);
  emit(j.dump(1) + "\n", out_path, out);
}

// ---- optimize -------------------------------------------------------------

std::string settings_path_for(const std::string& base, int n, bool multi) {
  if (!multi) return base;
  auto dot = base.rfind('.');
  if (dot == std::string::npos) return base + "_n" + std::to_string(n);
  return base.substr(0, dot) + "_n" + std::to_string(n) + base.substr(dot);
}

void run_optimize(const std::string& family_arg, int d, int n,
                  const std::string& n_range, const cem::CEMConfig& cfg,
                  const std::string& objective,
                  const std::string& out_settings, const std::string& out_csv,
                  std::ostream& out) {
  std::string family = canonical_family(family_arg);
  std::pair<int, int> range{n, n};
  if (!n_range.empty()) range = parse_range(n_range, "--n-range");

  states::Family fam = family == "isotropic" ? states::Family::isotropic
                       : family == "werner"  ? states::Family::werner
                                             : states::Family::two_qubit_werner;

  std::vector<cem::CurvePoint> points;
  if (objective == "omega") {
    points = cem::threshold_curve(fam, d, range, cfg);
  } else {
    // Relaxation objective: same curve shape, each point optimizes the
    // sqrt(max Tr[X^2])/L bound, which upper-bounds omega_bar, so the
    // resulting thresholds stay valid (merely more conservative).
    for (int nn = range.first; nn <= range.second; ++nn) {
      cem::CEMConfig per = cfg;
      per.seed = derive_seed(cfg.seed, 0x7c, static_cast<std::uint64_t>(nn));
      int L = fam == states::Family::werner ? nn * (d - 1) : nn;
      cem::CEMResult r =
          cem::cem_minimize(d, nn, L, per, cem::Objective::tr_x2_relaxation);
      thresholds::ThresholdReport rep;
      if (fam == states::Family::isotropic)
        rep = thresholds::make_report(
            family, d, nn, "lambda",
            thresholds::iso_threshold(d, r.best_omega_bar));
      else if (fam == states::Family::werner)
        rep = thresholds::make_report(
            family, d, nn, "lambda",
            thresholds::werner_threshold(d, r.best_omega_bar));
      else
        rep = thresholds::make_report(
            family, d, nn, "lambda",
            thresholds::two_qubit_threshold(r.best_omega_bar));
      points.push_back(cem::CurvePoint{nn, std::move(rep), std::move(r)});
    }
  }

  const bool multi = range.second > range.first;
  if (!out_settings.empty())
    for (const auto& p : points)
      bases::save_basis_set(p.result.best_basis_set,
                            settings_path_for(out_settings, p.n, multi));
  if (!out_csv.empty()) {
    std::string text = thresholds::threshold_csv_header() + "\n";
    for (const auto& p : points)
      text += thresholds::threshold_csv_row(p.report) + "\n";
    std::ofstream f(out_csv);
    if (!f) throw ValidationError("cannot open '" + out_csv + "' for writing");
    f << text;
  }

  json j;
  j["format_version"] = 1;
  j["family"] = family;
  j["d"] = d;
  j["objective"] = objective;
  json jp = json::array();
  for (const auto& p : points) {
    json pt;
    pt["n"] = p.n;
    pt["best_omega_bar"] = jnum(p.result.best_omega_bar);
    pt["threshold"] = jnum(p.report.value);
    pt["capped"] = p.report.capped;
    pt["evaluations"] = p.result.evaluations;
    pt["generations"] = p.result.history.size();
    jp.push_back(std::move(pt));
  }
  j["points"] = std::move(jp);
  out << j.dump(1) << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"quantum steering detection via majorization-lattice "
               "uncertainty bounds"};
  app.name("steerlat");
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads,
                 "worker count (0 = STEERLAT_THREADS or hardware default)");

  // mub
  auto* c_mub = app.add_subcommand("mub", "construct mutually unbiased bases");
  int mub_d = 0, mub_n = 0;
  std::string mub_out;
  c_mub->add_option("--d", mub_d, "dimension")->required();
  c_mub->add_option("--n", mub_n, "number of bases")->required();
  c_mub->add_option("--out", mub_out, "output JSON path (default: stdout)");
  c_mub->callback([&] {
    set_thread_count(threads);
    bases::BasisSet bs = bases::mub_set(mub_d, mub_n);
    if (mub_out.empty())
      out << bases::serialize_basis_set(bs);
    else
      bases::save_basis_set(bs, mub_out);
  });

  // omega
  auto* c_omega = app.add_subcommand("omega", "exact Omega_L over a basis set");
  std::string om_bases, om_method = "exact", om_format = "json", om_out;
  int om_l = 0;
  bool om_all = false;
  c_omega->add_option("--bases", om_bases, "basis-set JSON path")->required();
  auto* om_l_opt = c_omega->add_option("--L", om_l, "selection size");
  auto* om_all_opt =
      c_omega->add_flag("--all", om_all, "full profile L = 1..N*d and s(B)");
  om_l_opt->excludes(om_all_opt);
  c_omega->add_option("--method", om_method, "search method")
      ->check(CLI::IsMember({"exact", "two-bases"}));
  c_omega->add_option("--format", om_format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  c_omega->add_option("--out", om_out, "output path (default: stdout)");
  c_omega->callback([&] {
    set_thread_count(threads);
    if (!om_all && om_l_opt->count() == 0)
      throw CLI::RequiredError("omega: one of --L or --all");
    run_omega(om_bases, om_l, om_all, om_method, om_format, om_out, out, err);
  });

  // bounds
  auto* c_bounds =
      app.add_subcommand("bounds", "closed-form and enumerated Omega bounds");
  int bd_d = 0, bd_n = 0, bd_l = 0;
  bool bd_mub = false, bd_all = false;
  std::string bd_bases, bd_format = "json", bd_out;
  auto* bd_d_opt = c_bounds->add_option("--d", bd_d, "dimension");
  auto* bd_n_opt = c_bounds->add_option("--n", bd_n, "number of bases");
  auto* bd_mub_opt =
      c_bounds->add_flag("--mub", bd_mub, "closed forms for MUB sets");
  auto* bd_bases_opt =
      c_bounds->add_option("--bases", bd_bases, "basis-set JSON path");
  bd_mub_opt->excludes(bd_bases_opt);
  bd_bases_opt->excludes(bd_d_opt)->excludes(bd_n_opt);
  auto* bd_l_opt = c_bounds->add_option("--L", bd_l, "selection size");
  auto* bd_all_opt = c_bounds->add_flag("--all", bd_all, "all valid L");
  bd_l_opt->excludes(bd_all_opt);
  c_bounds->add_option("--format", bd_format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  c_bounds->add_option("--out", bd_out, "output path (default: stdout)");
  c_bounds->callback([&] {
    set_thread_count(threads);
    if (!bd_all && bd_l_opt->count() == 0)
      throw CLI::RequiredError("bounds: one of --L or --all");
    if (bd_mub && (bd_d_opt->count() == 0 || bd_n_opt->count() == 0))
      throw CLI::RequiredError("bounds: --mub needs --d and --n");
    if (!bd_mub && bd_bases_opt->count() == 0)
      throw CLI::RequiredError("bounds: one of --mub or --bases");
    run_bounds(bd_d, bd_n, bd_mub, bd_bases, bd_l, bd_all, bd_format, bd_out,
               out);
  });

  // threshold
  auto* c_thr = app.add_subcommand(
      "threshold", "noise thresholds for the named state families");
  std::string th_family, th_source = "exact", th_sweep, th_format = "json",
              th_out;
  int th_d = 0, th_n = 0;
  c_thr->add_option("--family", th_family, "isotropic|werner|werner2q")
      ->required();
  auto* th_d_opt = c_thr->add_option("--d", th_d, "dimension");
  c_thr->add_option("--n", th_n, "number of bases")->required();
  c_thr->add_option("--source", th_source, "bound source")
      ->check(CLI::IsMember({"exact", "gamma", "theta", "lambda"}));
  auto* th_sweep_opt =
      c_thr->add_option("--sweep-d", th_sweep, "dimension sweep <lo>:<hi>");
  th_sweep_opt->excludes(th_d_opt);
  c_thr->add_option("--format", th_format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  c_thr->add_option("--out", th_out, "output path (default: stdout)");
  c_thr->callback([&] {
    set_thread_count(threads);
    if (th_sweep_opt->count() == 0 && th_d_opt->count() == 0)
      throw CLI::RequiredError("threshold: one of --d or --sweep-d");
    run_threshold(th_family, th_d, th_n, th_source, th_sweep, th_format,
                  th_out, out, err);
  });

  // witness
  auto* c_wit =
      app.add_subcommand("witness", "steering verdict for a bipartite state");
  std::string wi_state, wi_bases, wi_bases_b, wi_transform = "auto", wi_out;
  double wi_tol = 1e-9;
  c_wit->add_option("--state", wi_state,
                    "iso:<d>:<w> | werner:<d>:<eta> | werner2q:<w> | JSON path")
      ->required();
  c_wit->add_option("--bases", wi_bases, "Alice settings JSON path")
      ->required();
  c_wit->add_option("--bases-b", wi_bases_b,
                    "Bob settings JSON path (default: same as --bases)");
  c_wit->add_option("--transform", wi_transform, "Bob pre-measurement strategy")
      ->check(CLI::IsMember({"auto", "identity", "conjugate", "svd-align"}));
  c_wit->add_option("--tolerance", wi_tol, "detection margin tolerance");
  c_wit->add_option("--out", wi_out, "output path (default: stdout)");
  c_wit->callback([&] {
    set_thread_count(threads);
    run_witness(wi_state, wi_bases, wi_bases_b, wi_transform, wi_tol, wi_out,
                out, err);
  });

  // optimize
  auto* c_opt = app.add_subcommand(
      "optimize", "cross-entropy search for better measurement settings");
  std::string op_family, op_n_range, op_objective = "omega", op_settings,
              op_csv;
  int op_d = 0, op_n = 0;
  cem::CEMConfig op_cfg;
  c_opt->add_option("--family", op_family, "isotropic|werner|werner2q")
      ->required();
  c_opt->add_option("--d", op_d, "dimension")->required();
  auto* op_n_opt = c_opt->add_option("--n", op_n, "number of bases");
  auto* op_range_opt =
      c_opt->add_option("--n-range", op_n_range, "setting counts <lo>:<hi>");
  op_n_opt->excludes(op_range_opt);
  c_opt->add_option("--population", op_cfg.population, "candidates per generation");
  c_opt->add_option("--elite-fraction", op_cfg.elite_fraction, "elite share");
  c_opt->add_option("--smoothing", op_cfg.smoothing, "refit smoothing weight");
  c_opt->add_option("--max-iters", op_cfg.max_iters, "generation cap");
  c_opt->add_option("--init-stddev", op_cfg.init_stddev, "initial spread");
  c_opt->add_option("--seed", op_cfg.seed, "RNG seed");
  c_opt->add_option("--stall-patience", op_cfg.stall_patience,
                    "generations without improvement before stopping");
  c_opt->add_option("--restarts", op_cfg.restarts, "independent restarts");
  c_opt->add_option("--objective", op_objective, "optimization objective")
      ->check(CLI::IsMember({"omega", "trx2"}));
  c_opt->add_option("--out-settings", op_settings,
                    "best settings JSON path (per n when sweeping)");
  c_opt->add_option("--out-csv", op_csv, "threshold CSV path");
  c_opt->callback([&] {
    set_thread_count(threads);
    if (op_n_opt->count() == 0 && op_range_opt->count() == 0)
      throw CLI::RequiredError("optimize: one of --n or --n-range");
    run_optimize(op_family, op_d, op_n, op_n_range, op_cfg, op_objective,
                 op_settings, op_csv, out);
  });

  // limit
  auto* c_lim = app.add_subcommand(
      "limit", "many-settings limit of Omega_N/N on the qubit");
  std::string li_scenario;
  int li_grid = 1000;
  c_lim->add_option("--scenario", li_scenario, "hemisphere|half-plane")
      ->required()
      ->check(CLI::IsMember({"hemisphere", "half-plane"}));
  c_lim->add_option("--grid", li_grid, "direction count (>= 100)");
  c_lim->callback([&] {
    set_thread_count(threads);
    auto scenario = li_scenario == "hemisphere"
                        ? thresholds::LimitScenario::hemisphere
                        : thresholds::LimitScenario::half_plane;
    double bar = thresholds::infinite_settings_limit(scenario, li_grid);
    json j;
    j["format_version"] = 1;
    j["scenario"] = li_scenario;
    j["grid"] = li_grid;
    j["omega_bar"] = jnum(bar);
    out << j.dump(1) << "\n";
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    return kExitOk;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const CapabilityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitComputation;
  }
}

}  // namespace steerlat::cli
