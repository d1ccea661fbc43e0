#pragma once

namespace wsdf {

// Thread count used by every OpenMP kernel in the library. A value of 1
// makes all kernels run serially, which is what bitwise reproducibility
// checks rely on.
void set_thread_count(int threads);
int thread_count();

// Reads WSDF_THREADS from the environment; returns `fallback` when unset or invalid.
int thread_count_from_env(int fallback);

}  // namespace wsdf
