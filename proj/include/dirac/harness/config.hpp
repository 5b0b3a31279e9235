#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dirac/exact_solution.hpp"
#include "dirac/expr.hpp"
#include "dirac/free_field.hpp"
#include "dirac/grid.hpp"
#include "dirac/potential.hpp"
#include "dirac/solver.hpp"

namespace dirac::harness {

enum class FieldFormat { csv, jsonl };

struct GeneratorConfig {
  std::string g_text = "0";
  expr::Expr g;
  double m = 1.0;
  /// Gauge anchor; defaults to grid.x_min.
  std::optional<double> x0;
  std::optional<std::string> f_text;
  std::optional<expr::Expr> f;
};

struct PacketConfig {
  double p_center = 0.0;
  double width = 1.0;
  std::size_t n_modes = 64;
  double p_span = 6.0;
  EnergyBranch branch = EnergyBranch::positive;
};

/// Exactly one of `packet` or `modes` is populated.
struct FreeConfig {
  std::optional<PacketConfig> packet;
  std::vector<PlaneWaveMode> modes;
};

struct GridConfig {
  double x_min = -20.0;
  double x_max = 20.0;
  std::size_t n = 1024;
};

struct TimeConfig {
  double t0 = 0.0;
  double t_end = 1.0;
  double dt = 1e-3;
};

struct OutputConfig {
  std::filesystem::path dir = "out";
  FieldFormat format = FieldFormat::csv;
  /// Evenly spaced comparison times after t0 (the last one is t_end).
  std::size_t checkpoints = 4;
};

/// A fully validated scenario; all expressions are pre-parsed.
struct ScenarioConfig {
  GeneratorConfig generator;
  FreeConfig free;
  GridConfig grid;
  TimeConfig time;
  Method method = Method::strang_spectral;
  OutputConfig output;

  double gauge_anchor() const { return generator.x0.value_or(grid.x_min); }
};

/// Parses and validates a JSON document against the closed schema. Throws
/// SchemaError (with a JSON pointer) for structural problems and ParseError
/// for malformed expressions.
ScenarioConfig parse_config(std::string_view json_text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Canonical JSON rendering of a config, defaults included. Parsing the
/// result yields an equivalent config.
nlohmann::json config_to_json(const ScenarioConfig& config);

Grid1D make_grid(const ScenarioConfig& config);
Domain make_domain(const ScenarioConfig& config);
PotentialSource make_source(const ScenarioConfig& config);
FreeSolutionSpec make_free(const ScenarioConfig& config);
ExactSolutionSpec make_exact(const ScenarioConfig& config);
SolverConfig make_solver_config(const ScenarioConfig& config);

std::string_view to_string(FieldFormat f) noexcept;

}  // namespace dirac::harness
