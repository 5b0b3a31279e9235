#pragma once

#include <filesystem>
#include <vector>

#include "dirac/harness/config.hpp"
#include "json.hpp"

namespace dirac::harness {

/// Tolerances applied by cmd_verify.
struct VerifyTolerances {
  double identity = 1e-13;
  double residual_ratio_lo = 12.0;
  double residual_ratio_hi = 20.0;
  /// A residual ladder whose finest value is below this counts as converged
  /// to round-off even when the ratios are not asymptotic.
  double residual_floor = 1e-10;
  double error_strang = 1e-4;
  double error_free = 1e-10;
  double error_crank_nicolson = 1e-2;
  double norm_drift_strang = 1e-10;
  double norm_drift_crank_nicolson = 1e-9;
};

struct CommandResult {
  nlohmann::json report;
  /// Process exit status: 0 on success.
  int exit_code = 0;
  std::vector<std::filesystem::path> files;
};

/// Writes potentials_t<t>.csv (x,Vt,Vs,Vp,f,g) into `out_dir` for each t.
CommandResult cmd_potentials(const ScenarioConfig& config, const std::vector<double>& times,
                             const std::filesystem::path& out_dir);

/// Exports the free solution at each t as free_t<t>.<format>.
CommandResult cmd_free(const ScenarioConfig& config, const std::vector<double>& times,
                       const std::filesystem::path& out_dir);

/// Evolves from t0 to t_end and exports the numerical field (evolve_t<t>) and
/// the closed form (exact_t<t>) at t0 and every checkpoint, plus
/// evolve_report.json with errors and norm drift.
CommandResult cmd_evolve(const ScenarioConfig& config, const std::filesystem::path& out_dir);

/// Identity suite, exact-solution residual ladder and evolve-vs-exact errors.
/// exit_code is 0 iff every stage meets its tolerance.
CommandResult cmd_verify(const ScenarioConfig& config, const VerifyTolerances& tol = {});

/// dt-halving study with `ladder_len` rungs starting from the configured dt.
/// crank_nicolson also doubles n per rung. exit_code is 0 iff every observed
/// order is in range or at the error floor.
CommandResult cmd_convergence(const ScenarioConfig& config, std::size_t ladder_len);

/// Step timings for both methods on 2^10, 2^14, 2^18 nodes and expression
/// evaluation throughput. `grid_sizes` overrides the default sizes.
CommandResult cmd_bench(const ScenarioConfig& config, std::size_t repetitions,
                        std::vector<std::size_t> grid_sizes = {});

/// Writes `report` as indented JSON. Throws IoError.
void write_report(const nlohmann::json& report, const std::filesystem::path& path);

}  // namespace dirac::harness
