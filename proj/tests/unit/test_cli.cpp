#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "steerlat/bases.hpp"
#include "steerlat/cli.hpp"

using namespace steerlat;
using nlohmann::json;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const char* name) {
  return std::string("/tmp/steerlat_cli_") + name;
}

// Writes a mub set to a temp file and returns the path.
std::string mub_file(int d, int n, const char* name) {
  auto path = temp_path(name);
  bases::save_basis_set(bases::mub_set(d, n), path);
  return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help and usage errors") {
  CHECK(run_cli({"--help"}).code == cli::kExitOk);
  CHECK(run_cli({"omega", "--help"}).code == cli::kExitOk);
  CHECK(run_cli({}).code == cli::kExitUsage);
  CHECK(run_cli({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run_cli({"omega", "--no-such-flag"}).code == cli::kExitUsage);
}

TEST_CASE("mub emits loadable json and respects capability limits") {
  auto r = run_cli({"mub", "--d", "3", "--n", "2"});
  CHECK(r.code == cli::kExitOk);
  json j = json::parse(r.out);
  CHECK(j["d"] == 3);
  CHECK(j["bases"].size() == 2);

  auto path = temp_path("mub_out.json");
  CHECK(run_cli({"mub", "--d", "4", "--n", "5", "--out", path}).code ==
        cli::kExitOk);
  auto loaded = bases::load_basis_set(path);
  CHECK(loaded.count() == 5);
  CHECK(bases::is_mub_set(loaded));
  std::remove(path.c_str());

  auto cap = run_cli({"mub", "--d", "6", "--n", "4"});
  CHECK(cap.code == cli::kExitUsage);
  CHECK(cap.err.find("3") != std::string::npos);
}

TEST_CASE("omega single L and csv/json parity") {
  auto path = mub_file(2, 2, "omega_pair.json");

  auto csv = run_cli({"omega", "--bases", path, "--L", "2", "--format", "csv"});
  CHECK(csv.code == cli::kExitOk);
  CHECK(csv.out.find("L,omega,omega_bar,selection") == 0);
  CHECK(csv.out.find("0.853553390593") != std::string::npos);

  auto js = run_cli({"omega", "--bases", path, "--L", "2"});
  CHECK(js.code == cli::kExitOk);
  json j = json::parse(js.out);
  REQUIRE(j["rows"].size() == 1);
  // The JSON double and the CSV text parse to the same number.
  double from_json = j["rows"][0]["omega_bar"].get<double>();
  CHECK(from_json == std::strtod("0.853553390593", nullptr));
  CHECK(j["rows"][0]["selection"].size() == 2);

  std::remove(path.c_str());
}

TEST_CASE("omega full profile carries the bound vector") {
  auto path = mub_file(2, 2, "omega_all.json");
  auto js = run_cli({"omega", "--bases", path, "--all"});
  REQUIRE(js.code == cli::kExitOk);
  json j = json::parse(js.out);
  REQUIRE(j["rows"].size() == 4);
  REQUIRE(j["s_vector"].size() == 4);
  double total = 0;
  for (const auto& s : j["s_vector"]) total += s.get<double>();
  CHECK(total == doctest::Approx(2.0).epsilon(1e-9));

  auto csv = run_cli({"omega", "--bases", path, "--all", "--format", "csv"});
  CHECK(csv.out.find("s_component") != std::string::npos);

  // Profile rows agree between the two formats number for number.
  std::istringstream lines(csv.out);
  std::string line;
  std::getline(lines, line);  // header
  for (int i = 0; std::getline(lines, line); ++i) {
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');
    CHECK(std::stoi(cell) == j["rows"][i]["L"].get<int>());
    std::getline(cells, cell, ',');
    CHECK(std::strtod(cell.c_str(), nullptr) ==
          j["rows"][i]["omega"].get<double>());
    std::getline(cells, cell, ',');
    CHECK(std::strtod(cell.c_str(), nullptr) ==
          j["rows"][i]["omega_bar"].get<double>());
    std::getline(cells, cell, ',');
    CHECK(std::strtod(cell.c_str(), nullptr) ==
          j["s_vector"][i].get<double>());
  }
  std::remove(path.c_str());
}

TEST_CASE("omega argument contract") {
  auto path = mub_file(2, 3, "omega_three.json");
  CHECK(run_cli({"omega", "--bases", path, "--L", "2", "--method",
                 "two-bases"})
            .code == cli::kExitUsage);
  CHECK(run_cli({"omega", "--bases", path}).code == cli::kExitUsage);
  CHECK(run_cli({"omega", "--bases", path, "--L", "2", "--all"}).code ==
        cli::kExitUsage);
  CHECK(run_cli({"omega", "--bases", path, "--L", "99"}).code ==
        cli::kExitValidation);
  CHECK(run_cli({"omega", "--bases", temp_path("nope.json"), "--L", "2"})
            .code == cli::kExitValidation);
  std::remove(path.c_str());
}

TEST_CASE("two-bases method on a pair file") {
  auto path = mub_file(3, 2, "omega_pair3.json");
  auto r = run_cli({"omega", "--bases", path, "--L", "3", "--method",
                    "two-bases", "--format", "csv"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("1.81649658093") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("bounds closed forms and ranges") {
  auto r = run_cli({"bounds", "--d", "3", "--n", "3", "--mub", "--all",
                    "--format", "csv"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("0.718233512793") != std::string::npos);
  CHECK(r.out.find("mub_closed_form") != std::string::npos);

  CHECK(run_cli({"bounds", "--d", "3", "--n", "3", "--mub", "--L", "7"}).code ==
        cli::kExitValidation);
  CHECK(run_cli({"bounds", "--mub", "--L", "2"}).code == cli::kExitUsage);
  CHECK(run_cli({"bounds", "--L", "2"}).code == cli::kExitUsage);

  auto path = mub_file(3, 2, "bounds_pair.json");
  auto gen = run_cli({"bounds", "--bases", path, "--L", "3"});
  CHECK(gen.code == cli::kExitOk);
  json j = json::parse(gen.out);
  CHECK(j["rows"][0]["regime"] == "general_enumerated");
  std::remove(path.c_str());
}

TEST_CASE("threshold command") {
  auto r = run_cli({"threshold", "--family", "iso", "--d", "3", "--n", "4",
                    "--source", "gamma"});
  REQUIRE(r.code == cli::kExitOk);
  json j = json::parse(r.out);
  CHECK(j["rows"][0]["threshold"].get<double>() == 0.5);
  CHECK(j["rows"][0]["capped"] == false);

  auto capped = run_cli({"threshold", "--family", "werner", "--d", "3", "--n",
                         "4", "--source", "exact", "--format", "csv"});
  CHECK(capped.code == cli::kExitOk);
  CHECK(capped.out.find(",true,") != std::string::npos);

  auto sweep = run_cli({"threshold", "--family", "iso", "--sweep-d", "2:5",
                        "--n", "3", "--source", "theta", "--format", "csv"});
  CHECK(sweep.code == cli::kExitOk);
  int lines = 0;
  for (char c : sweep.out)
    if (c == '\n') ++lines;
  CHECK(lines == 5);  // header + 4 dimensions

  CHECK(run_cli({"threshold", "--family", "nope", "--d", "3", "--n", "2"})
            .code == cli::kExitUsage);
  CHECK(run_cli({"threshold", "--family", "iso", "--n", "2"}).code ==
        cli::kExitUsage);
  CHECK(run_cli({"threshold", "--family", "iso", "--d", "3", "--sweep-d",
                 "2:4", "--n", "2"})
            .code == cli::kExitUsage);
  CHECK(run_cli({"threshold", "--family", "werner2q", "--d", "3", "--n", "2"})
            .code == cli::kExitValidation);
}

TEST_CASE("witness command") {
  auto path = mub_file(3, 2, "witness_settings.json");
  auto hot = run_cli({"witness", "--state", "iso:3:0.9", "--bases", path});
  REQUIRE(hot.code == cli::kExitOk);
  json j = json::parse(hot.out);
  CHECK(j["steerable"] == true);
  CHECK(j["best_L"] == 2);

  auto cold = run_cli({"witness", "--state", "iso:3:0.5", "--bases", path});
  CHECK(json::parse(cold.out)["steerable"] == false);

  CHECK(run_cli({"witness", "--state", "iso:bad:0.5", "--bases", path}).code ==
        cli::kExitUsage);
  CHECK(run_cli({"witness", "--state", temp_path("no_state.json"), "--bases",
                 path})
            .code == cli::kExitValidation);
  CHECK(run_cli({"witness", "--state", "iso:3:0.9", "--bases",
                 temp_path("no_bases.json")})
            .code == cli::kExitValidation);
  CHECK(run_cli({"witness", "--state", "iso:3:0.9", "--bases", path,
                 "--transform", "svd-align"})
            .code == cli::kExitValidation);
  std::remove(path.c_str());
}

TEST_CASE("optimize is reproducible and writes its artifacts") {
  auto settings = temp_path("opt_settings.json");
  auto curve = temp_path("opt_curve.csv");
  std::vector<std::string> args{
      "optimize",       "--family", "iso",        "--d",       "2",
      "--n",            "2",        "--seed",     "5",         "--population",
      "24",             "--max-iters", "10",      "--restarts", "1",
      "--out-settings", settings,   "--out-csv",  curve};
  auto a = run_cli(args);
  REQUIRE(a.code == cli::kExitOk);
  std::ifstream sf(settings);
  REQUIRE(sf.good());
  std::string settings_a((std::istreambuf_iterator<char>(sf)),
                         std::istreambuf_iterator<char>());
  std::ifstream cf(curve);
  std::string curve_a((std::istreambuf_iterator<char>(cf)),
                      std::istreambuf_iterator<char>());
  CHECK(curve_a.find("family,d,n,bound_source,threshold,capped,"
                     "lhs_reference") == 0);

  auto b = run_cli(args);
  CHECK(a.out == b.out);
  std::ifstream sf2(settings);
  std::string settings_b((std::istreambuf_iterator<char>(sf2)),
                         std::istreambuf_iterator<char>());
  CHECK(settings_a == settings_b);

  json j = json::parse(a.out);
  REQUIRE(j["points"].size() == 1);
  CHECK(j["points"][0]["n"] == 2);
  CHECK(j["points"][0]["best_omega_bar"].get<double>() > 0.5);

  // The emitted settings file is a valid basis set.
  auto bs = bases::load_basis_set(settings);
  CHECK(bs.count() == 2);
  std::remove(settings.c_str());
  std::remove(curve.c_str());

  CHECK(run_cli({"optimize", "--family", "iso", "--d", "2"}).code ==
        cli::kExitUsage);
  CHECK(run_cli({"optimize", "--family", "iso", "--d", "2", "--n", "2",
                 "--n-range", "2:3"})
            .code == cli::kExitUsage);
}

TEST_CASE("limit command") {
  auto r = run_cli({"limit", "--scenario", "hemisphere", "--grid", "400"});
  REQUIRE(r.code == cli::kExitOk);
  json j = json::parse(r.out);
  CHECK(j["omega_bar"].get<double>() == doctest::Approx(0.75).epsilon(0.01));

  CHECK(run_cli({"limit", "--scenario", "hemisphere", "--grid", "10"}).code ==
        cli::kExitValidation);
  CHECK(run_cli({"limit", "--scenario", "cube"}).code == cli::kExitUsage);
}

TEST_CASE("output redirection and thread flag") {
  auto out_path = temp_path("omega_redirect.json");
  auto path = mub_file(2, 2, "omega_redirect_in.json");
  auto r = run_cli({"--threads", "2", "omega", "--bases", path, "--L", "2",
                    "--out", out_path});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.empty());
  std::ifstream f(out_path);
  REQUIRE(f.good());
  json j;
  f >> j;
  CHECK(j["format_version"] == 1);
  std::remove(out_path.c_str());
  std::remove(path.c_str());
}

}  // TEST_SUITE
