#include "fracmatch/parallel.hpp"

#include <cstdlib>
#include <string>

namespace fracmatch {

int default_jobs() {
  if (const char* env = std::getenv("FRACMATCH_JOBS")) {
    try {
      const int j = std::stoi(env);
      if (j >= 1) return j;
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

}  // namespace fracmatch
