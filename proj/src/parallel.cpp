#include "dirac/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace dirac {

int worker_count() {
  static const int count = [] {
    if (const char* env = std::getenv("DIRAC_THREADS")) {
      try {
        const int n = std::stoi(env);
        if (n > 0) {
          return n;
        }
      } catch (const std::exception&) {
      }
    }
    return omp_get_max_threads();
  }();
  return count;
}

}  // namespace dirac
