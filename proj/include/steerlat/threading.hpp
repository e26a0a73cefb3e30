#pragma once

namespace steerlat {

// Worker count used by the OpenMP kernels.  Resolution order: the last
// set_thread_count(n > 0) wins, then the STEERLAT_THREADS environment
// variable, then the OpenMP default.  Always returns >= 1.
int thread_count();

// n <= 0 clears the override and restores environment/default resolution.
void set_thread_count(int n);

}  // namespace steerlat
