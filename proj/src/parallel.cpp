#include "dnfkit/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace dnfkit {

unsigned default_threads() {
  const char* env = std::getenv("DNFKIT_THREADS");
  if (!env) return 1;
  unsigned v = 0;
  auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), v);
  if (ec != std::errc() || v == 0) return 1;
  return v;
}

}  // namespace dnfkit
