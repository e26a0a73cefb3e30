// Times the serial exhaustive enumeration against the OpenMP
// branch-and-bound on a fixed ladder of instances and cross-checks the
// values.  Usage: steerlat_bench [threads]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "steerlat/bases.hpp"
#include "steerlat/omega.hpp"
#include "steerlat/rng.hpp"
#include "steerlat/threading.hpp"

using namespace steerlat;
using Clock = std::chrono::steady_clock;

namespace {

double run_ms(const std::function<double()>& f, double* value) {
  auto t0 = Clock::now();
  *value = f();
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bases::BasisSet random_set(int d, int n, std::uint64_t seed) {
  std::vector<bases::Basis> bs;
  for (int mu = 0; mu < n; ++mu)
    bs.push_back(bases::random_unitary(d, derive_seed(seed, 0xbe, mu)));
  return bases::BasisSet(std::move(bs));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) set_thread_count(std::atoi(argv[1]));

  struct Instance {
    std::string label;
    bases::BasisSet bs;
    int L;
  };
  std::vector<Instance> instances;
  instances.push_back({"mub d=3 N=3 L=4", bases::mub_set(3, 3), 4});
  instances.push_back({"mub d=4 N=3 L=6", bases::mub_set(4, 3), 6});
  instances.push_back({"mub d=4 N=4 L=8", bases::mub_set(4, 4), 8});
  instances.push_back({"mub d=5 N=4 L=7", bases::mub_set(5, 4), 7});
  instances.push_back({"random d=4 N=4 L=8", random_set(4, 4, 11), 8});
  instances.push_back({"random d=5 N=3 L=7", random_set(5, 3, 12), 7});

  std::printf("%-22s %12s %12s %9s %7s\n", "instance", "serial (ms)",
              "search (ms)", "speedup", "agree");
  int disagreements = 0;
  for (const auto& inst : instances) {
    double serial_v = 0, search_v = 0;
    double serial_ms = run_ms(
        [&] { return omega::enumerate_reference(inst.bs, inst.L).value; },
        &serial_v);
    double search_ms =
        run_ms([&] { return omega::omega_value(inst.bs, inst.L); }, &search_v);
    bool agree = std::abs(serial_v - search_v) <= 1e-10;
    if (!agree) ++disagreements;
    std::printf("%-22s %12.2f %12.2f %8.1fx %7s\n", inst.label.c_str(),
                serial_ms, search_ms, serial_ms / std::max(search_ms, 1e-3),
                agree ? "yes" : "NO");
  }
  return disagreements;
}
