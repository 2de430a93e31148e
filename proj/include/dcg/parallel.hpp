// Thread-count policy for the OpenMP kernel paths.
#pragma once

namespace dcg::parallel {

// Resolved worker count: explicit set_thread_count() wins, then the
// DCG_SIM_THREADS environment variable, then the OpenMP default.
int thread_count();

// n >= 1 pins the count, n <= 0 restores the environment/OpenMP default.
void set_thread_count(int n);

// True when the dispatching kernels should take the OpenMP path.
bool use_parallel();

}
