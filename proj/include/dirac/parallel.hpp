#pragma once

namespace dirac {

/// Data-parallel width for grid loops. Honors DIRAC_THREADS when set to a
/// positive integer; otherwise the OpenMP default.
int worker_count();

}  // namespace dirac
