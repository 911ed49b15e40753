#include <cstdlib>
#include <cstring>

#include "ruin/kernels.hpp"

namespace ruin::kernels {
namespace {

const Batch& pick() {
  const char* env = std::getenv("RUIN_ASYM_KERNEL");
  if (env && std::strcmp(env, "scalar") == 0) return scalar_batch();
  const Batch* v = avx2_batch();
#if defined(__x86_64__) || defined(_M_X64)
  const bool cpu_ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  const bool cpu_ok = false;
#endif
  if (v && cpu_ok) {
    if (!env || std::strcmp(env, "avx2") == 0) return *v;
  }
  return scalar_batch();
}

}  // namespace

const Batch& active() {
  static const Batch& chosen = pick();
  return chosen;
}

}  // namespace ruin::kernels
