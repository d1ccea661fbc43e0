#include "wsdf/parallel.hpp"

#include <omp.h>

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace wsdf {

void set_thread_count(int threads) { omp_set_num_threads(threads < 1 ? 1 : threads); }

int thread_count() { return omp_get_max_threads(); }

int thread_count_from_env(int fallback) {
  const char* env = std::getenv("WSDF_THREADS");
  if (env == nullptr) return fallback;
  int value = 0;
  const auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), value);
  if (ec != std::errc() || *ptr != '\0' || value < 1) return fallback;
  return value;
}

}  // namespace wsdf
