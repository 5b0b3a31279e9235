#include "dirac/harness/commands.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>

#include "dirac/error.hpp"
#include "dirac/harness/export.hpp"
#include "dirac/harness/verification.hpp"
#include "dirac/parallel.hpp"

namespace dirac::harness {

using nlohmann::json;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

constexpr std::uint64_t verify_seed = 20240611;
constexpr int identity_draws = 1000;
constexpr std::size_t residual_points = 200;
const std::vector<double> residual_steps{1e-2, 5e-3, 2.5e-3};
/// Errors at or below this are treated as the method's floor in
/// convergence studies.
constexpr double convergence_floor = 1e-9;

/// Shortest round-trip text of t, for file names.
std::string time_tag(double t) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, t);
  return std::string(buf, res.ptr);
}

std::string extension(FieldFormat f) { return f == FieldFormat::csv ? ".csv" : ".jsonl"; }

bool is_free_scenario(const SolverConfig& s) { return !s.potential.has_value(); }

/// Evenly spaced checkpoint times (whole steps) after t0; the last is t_end.
std::vector<double> checkpoint_times(const ScenarioConfig& c) {
  const auto steps = static_cast<std::size_t>(std::llround((c.time.t_end - c.time.t0) / c.time.dt));
  std::vector<double> out;
  if (steps == 0) {
    out.push_back(c.time.t0);
    return out;
  }
  const std::size_t k = std::min(c.output.checkpoints, steps);
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t s = (steps * i) / k;
    out.push_back(i == k ? c.time.t_end : c.time.t0 + static_cast<double>(s) * c.time.dt);
  }
  return out;
}

Domain interior(const ScenarioConfig& c) {
  const double mx = 0.1 * (c.grid.x_max - c.grid.x_min);
  const double mt = 0.1 * (c.time.t_end - c.time.t0);
  return {c.grid.x_min + mx, c.grid.x_max - mx, c.time.t0 + mt, c.time.t_end - mt};
}

/// Largest edge mismatch of the potentials over the given times.
double edge_mismatch(const PotentialSource& src, const Grid1D& grid, const std::vector<double>& times) {
  double worst = 0.0;
  for (double t : times) {
    worst = std::max(worst, periodicity_mismatch(src.spec, src.gauge, grid, t));
  }
  return worst;
}

json stage_error(const std::exception& e) { return {{"pass", false}, {"error", e.what()}}; }

struct EvolutionRun {
  json checkpoints = json::array();
  double max_error = 0.0;
  double max_drift = 0.0;
  double seconds = 0.0;
  std::size_t steps = 0;
  double solve_residual = 0.0;
  std::vector<std::pair<double, StateField>> numerical;
};

/// Evolves the closed-form initial field through the checkpoints, comparing
/// against the closed form on the interior window.
EvolutionRun evolve_checkpoints(const ScenarioConfig& c, bool keep_fields) {
  const Grid1D grid = make_grid(c);
  const ExactSolutionSpec exact = make_exact(c);
  const SolverConfig solver = make_solver_config(c);
  const bool free = is_free_scenario(solver);
  Evolver ev(grid, solver);
  StateField state = eval_exact_field(exact, grid, c.time.t0);
  const double n0 = norm(state);
  const NodeWindow window = interior_window(grid);
  EvolutionRun run;
  if (keep_fields) {
    run.numerical.emplace_back(c.time.t0, state);
  }
  for (double t : checkpoint_times(c)) {
    const double before = state.t;
    const auto start = clock_type::now();
    ev.evolve(state, t);
    run.seconds += seconds_since(start);
    run.steps += static_cast<std::size_t>(std::llround((t - before) / c.time.dt));
    const StateField target =
        free ? eval_free_field(exact.free(), grid, t) : eval_exact_field(exact, grid, t);
    const double err = l2_error(state, target, window);
    const double drift = n0 > 0.0 ? std::abs(norm(state) - n0) / n0 : 0.0;
    run.max_error = std::max(run.max_error, err);
    run.max_drift = std::max(run.max_drift, drift);
    run.checkpoints.push_back({{"t", t}, {"l2_error", err}, {"norm_drift", drift}});
    if (keep_fields) {
      run.numerical.emplace_back(t, state);
    }
  }
  run.solve_residual = ev.max_solve_residual();
  return run;
}

json timing_json(double seconds, std::size_t steps, std::size_t n) {
  const double per_step = steps > 0 ? seconds / static_cast<double>(steps) : 0.0;
  return {{"wall_seconds", seconds},
          {"steps", steps},
          {"seconds_per_step", per_step},
          {"nodes_per_second", per_step > 0.0 ? static_cast<double>(n) / per_step : 0.0}};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

void write_report(const json& report, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << report.dump(2) << '\n';
  if (!out.flush()) {
    throw IoError("write to '" + path.string() + "' failed");
  }
}

CommandResult cmd_potentials(const ScenarioConfig& c, const std::vector<double>& times,
                             const std::filesystem::path& out_dir) {
  const Grid1D grid = make_grid(c);
  const PotentialSource src = make_source(c);
  CommandResult r;
  r.report = {{"command", "potentials"}, {"scenario", config_to_json(c)}, {"files", json::array()}};
  for (double t : times) {
    const PotentialField field = sample_potential_grid(src.spec, src.gauge, grid, t);
    const auto path = out_dir / ("potentials_t" + time_tag(t) + ".csv");
    std::ofstream out = open_output(path);
    out << "x,Vt,Vs,Vp,f,g\n";
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double x = grid.x(j);
      out << format_real(x) << ',' << format_real(field[j].vt) << ',' << format_real(field[j].vs)
          << ',' << format_real(field[j].vp) << ',' << format_real(src.gauge.f(x, t)) << ','
          << format_real(src.spec.eval_g(x, t)) << '\n';
    }
    if (!out.flush()) {
      throw IoError("write to '" + path.string() + "' failed");
    }
    r.files.push_back(path);
    r.report["files"].push_back(path.string());
  }
  const double mismatch = edge_mismatch(src, grid, times);
  r.report["diagnostics"] = {{"periodicity_mismatch", mismatch},
                             {"periodicity_warning", mismatch > periodicity_tolerance}};
  return r;
}

CommandResult cmd_free(const ScenarioConfig& c, const std::vector<double>& times,
                       const std::filesystem::path& out_dir) {
  const Grid1D grid = make_grid(c);
  const FreeSolutionSpec free = make_free(c);
  CommandResult r;
  r.report = {{"command", "free"}, {"scenario", config_to_json(c)}, {"files", json::array()}};
  for (double t : times) {
    const auto path = out_dir / ("free_t" + time_tag(t) + extension(c.output.format));
    const StateField field = eval_free_field(free, grid, t);
    export_field(field, path, c.output.format);
    r.files.push_back(path);
    r.report["files"].push_back(path.string());
    r.report["norms"].push_back({{"t", t}, {"norm", norm(field)}});
  }
  return r;
}

CommandResult cmd_evolve(const ScenarioConfig& c, const std::filesystem::path& out_dir) {
  CommandResult r;
  const EvolutionRun run = evolve_checkpoints(c, true);
  const ExactSolutionSpec exact = make_exact(c);
  const Grid1D grid = make_grid(c);
  r.report = {{"command", "evolve"},
              {"scenario", config_to_json(c)},
              {"checkpoints", run.checkpoints},
              {"max_l2_error", run.max_error},
              {"max_norm_drift", run.max_drift},
              {"timing", timing_json(run.seconds, run.steps, grid.size())},
              {"files", json::array()}};
  if (c.method == Method::crank_nicolson) {
    r.report["max_solve_residual"] = run.solve_residual;
  }
  const std::string ext = extension(c.output.format);
  for (const auto& [t, state] : run.numerical) {
    const auto num_path = out_dir / ("evolve_t" + time_tag(t) + ext);
    const auto exact_path = out_dir / ("exact_t" + time_tag(t) + ext);
    export_field(state, num_path, c.output.format);
    export_field(eval_exact_field(exact, grid, t), exact_path, c.output.format);
    for (const auto& p : {num_path, exact_path}) {
      r.files.push_back(p);
      r.report["files"].push_back(p.string());
    }
  }
  const auto report_path = out_dir / "evolve_report.json";
  write_report(r.report, report_path);
  r.files.push_back(report_path);
  return r;
}

CommandResult cmd_verify(const ScenarioConfig& c, const VerifyTolerances& tol) {
  CommandResult r;
  json stages;
  bool all_pass = true;

  // (a) algebraic identities
  try {
    const PotentialSource src = make_source(c);
    const IdentitySuite s = run_identity_suite(src, identity_draws, verify_seed);
    const bool pass = s.anticommutators_exact && s.conjugation_max <= tol.identity &&
                      s.identity_max <= tol.identity && s.scenario_identity_max <= tol.identity;
    stages["identity"] = {{"pass", pass},
                          {"tolerance", tol.identity},
                          {"draws", s.draws},
                          {"anticommutators_exact", s.anticommutators_exact},
                          {"conjugation_max_residual", s.conjugation_max},
                          {"potential_identity_max_residual", s.identity_max},
                          {"scenario_identity_max_residual", s.scenario_identity_max}};
    all_pass = all_pass && pass;
  } catch (const std::exception& e) {
    stages["identity"] = stage_error(e);
    all_pass = false;
  }

  // (b) the closed form against the differential equation
  try {
    const ExactSolutionSpec exact = make_exact(c);
    const ResidualLadder l =
        run_residual_ladder(exact, interior(c), residual_steps, residual_points, verify_seed);
    bool ratios_ok = true;
    for (double q : l.ratios) {
      ratios_ok = ratios_ok && q >= tol.residual_ratio_lo && q <= tol.residual_ratio_hi;
    }
    const bool at_floor = l.max_residual.back() <= tol.residual_floor;
    const bool pass = ratios_ok || at_floor;
    stages["pde_residual"] = {{"pass", pass},
                              {"points", l.points},
                              {"steps", l.steps},
                              {"max_residual", l.max_residual},
                              {"ratios", l.ratios},
                              {"ratio_range", {tol.residual_ratio_lo, tol.residual_ratio_hi}},
                              {"floor", tol.residual_floor},
                              {"at_floor", at_floor}};
    all_pass = all_pass && pass;
  } catch (const std::exception& e) {
    stages["pde_residual"] = stage_error(e);
    all_pass = false;
  }

  // (c) numerical evolution against the closed form
  try {
    const EvolutionRun run = evolve_checkpoints(c, false);
    const bool free = is_free_scenario(make_solver_config(c));
    const bool cn = c.method == Method::crank_nicolson;
    const double err_tol = cn ? tol.error_crank_nicolson : free ? tol.error_free : tol.error_strang;
    const double drift_tol = cn ? tol.norm_drift_crank_nicolson : tol.norm_drift_strang;
    json checkpoints = run.checkpoints;
    bool pass = true;
    for (auto& cp : checkpoints) {
      const bool ok = cp["l2_error"].get<double>() <= err_tol &&
                      cp["norm_drift"].get<double>() <= drift_tol;
      cp["pass"] = ok;
      pass = pass && ok;
    }
    stages["evolution"] = {{"pass", pass},
                           {"method", to_string(c.method)},
                           {"free", free},
                           {"error_tolerance", err_tol},
                           {"norm_drift_tolerance", drift_tol},
                           {"checkpoints", checkpoints},
                           {"timing", timing_json(run.seconds, run.steps, c.grid.n)}};
    if (cn) {
      stages["evolution"]["max_solve_residual"] = run.solve_residual;
    }
    all_pass = all_pass && pass;
  } catch (const std::exception& e) {
    stages["evolution"] = stage_error(e);
    all_pass = false;
  }

  json diagnostics;
  try {
    const PotentialSource src = make_source(c);
    std::vector<double> times = checkpoint_times(c);
    times.insert(times.begin(), c.time.t0);
    const double mismatch = edge_mismatch(src, make_grid(c), times);
    diagnostics = {{"periodicity_mismatch", mismatch},
                   {"periodicity_tolerance", periodicity_tolerance},
                   {"periodicity_warning", mismatch > periodicity_tolerance}};
  } catch (const std::exception& e) {
    diagnostics = {{"error", e.what()}};
  }

  r.report = {{"command", "verify"},
              {"scenario", config_to_json(c)},
              {"stages", stages},
              {"diagnostics", diagnostics},
              {"pass", all_pass}};
  r.exit_code = all_pass ? 0 : 1;
  return r;
}

CommandResult cmd_convergence(const ScenarioConfig& c, std::size_t ladder_len) {
  if (ladder_len < 3) {
    throw ConfigError("convergence: ladder length must be >= 3");
  }
  const bool cn = c.method == Method::crank_nicolson;
  CommandResult r;
  json rows = json::array();
  std::vector<double> errors;
  ScenarioConfig rung = c;
  rung.output.checkpoints = 1;
  for (std::size_t i = 0; i < ladder_len; ++i) {
    const EvolutionRun run = evolve_checkpoints(rung, false);
    errors.push_back(run.max_error);
    rows.push_back({{"dt", rung.time.dt},
                    {"n", rung.grid.n},
                    {"l2_error", run.max_error},
                    {"seconds", run.seconds}});
    rung.time.dt *= 0.5;
    if (cn) {
      rung.grid.n *= 2;
    }
  }
  const double lo = cn ? 1.8 : 1.9;
  const double hi = cn ? 2.2 : 2.1;
  json orders = json::array();
  bool pass = true;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    if (errors[i] <= convergence_floor) {
      orders.push_back("floor");
      continue;
    }
    const double q = std::log2(errors[i - 1] / errors[i]);
    orders.push_back(q);
    pass = pass && q >= lo && q <= hi;
  }
  r.report = {{"command", "convergence"},
              {"scenario", config_to_json(c)},
              {"method", to_string(c.method)},
              {"refines_grid", cn},
              {"rows", rows},
              {"orders", orders},
              {"order_range", {lo, hi}},
              {"floor", convergence_floor},
              {"pass", pass}};
  r.exit_code = pass ? 0 : 1;
  return r;
}

CommandResult cmd_bench(const ScenarioConfig& c, std::size_t repetitions,
                        std::vector<std::size_t> grid_sizes) {
  if (repetitions < 3) {
    throw ConfigError("bench: repetitions must be >= 3");
  }
  if (grid_sizes.empty()) {
    grid_sizes = {std::size_t{1} << 10, std::size_t{1} << 14, std::size_t{1} << 18};
  }
  const ExactSolutionSpec exact = make_exact(c);
  json cells = json::array();
  std::vector<double> spectral_cost;
  for (Method method : {Method::strang_spectral, Method::crank_nicolson}) {
    for (std::size_t n : grid_sizes) {
      ScenarioConfig sc = c;
      sc.grid.n = n;
      sc.method = method;
      const Grid1D grid = make_grid(sc);
      Evolver ev(grid, make_solver_config(sc));
      const std::size_t steps = std::max<std::size_t>(1, (std::size_t{1} << 16) / n);
      const StateField start = eval_exact_field(exact, grid, c.time.t0);
      std::vector<double> samples;
      for (std::size_t rep = 0; rep < repetitions; ++rep) {
        StateField s = start;
        const auto t0 = clock_type::now();
        for (std::size_t k = 0; k < steps; ++k) {
          ev.step(s);
        }
        samples.push_back(seconds_since(t0) / static_cast<double>(steps));
      }
      const double med = median(samples);
      cells.push_back({{"method", to_string(method)},
                       {"n", n},
                       {"steps_per_sample", steps},
                       {"samples_s_per_step", samples},
                       {"median_s_per_step", med},
                       {"min_s_per_step", *std::min_element(samples.begin(), samples.end())},
                       {"nodes_per_second", static_cast<double>(n) / med}});
      if (method == Method::strang_spectral) {
        const double nd = static_cast<double>(n);
        spectral_cost.push_back(med / (nd * std::log2(nd)));
      }
    }
  }

  // The FFT propagator alone, the part of the spectral step that is
  // O(n log n); the potential half steps add O(n) work.
  json kinetic_cells = json::array();
  std::vector<double> kinetic_cost;
  for (std::size_t n : grid_sizes) {
    ScenarioConfig sc = c;
    sc.grid.n = n;
    const Grid1D grid = make_grid(sc);
    SpectralKinetic kinetic(grid);
    const std::size_t steps = std::max<std::size_t>(1, (std::size_t{1} << 16) / n);
    const StateField start = eval_exact_field(exact, grid, c.time.t0);
    std::vector<double> samples;
    for (std::size_t rep = 0; rep < repetitions; ++rep) {
      StateField s = start;
      const auto t0 = clock_type::now();
      for (std::size_t k = 0; k < steps; ++k) {
        kinetic.kinetic_full_step(s, exact.generator().m(), c.time.dt);
      }
      samples.push_back(seconds_since(t0) / static_cast<double>(steps));
    }
    const double med = median(samples);
    const double nd = static_cast<double>(n);
    kinetic_cost.push_back(med / (nd * std::log2(nd)));
    kinetic_cells.push_back({{"n", n},
                             {"steps_per_sample", steps},
                             {"samples_s_per_step", samples},
                             {"median_s_per_step", med},
                             {"min_s_per_step", *std::min_element(samples.begin(), samples.end())}});
  }

  // Expression throughput over 2^18 nodes: per-point tree walk versus the
  // compiled tape evaluated block-wise over the node array.
  const std::size_t expr_nodes = std::size_t{1} << 18;
  const Grid1D expr_grid(c.grid.x_min, c.grid.x_max, expr_nodes);
  const expr::EvalPlan plan = expr::compile(c.generator.g);
  std::vector<double> xs(expr_nodes);
  for (std::size_t j = 0; j < expr_nodes; ++j) {
    xs[j] = expr_grid.x(j);
  }
  std::vector<double> tree_values(expr_nodes);
  std::vector<double> plan_values(expr_nodes);
  std::vector<double> tree_t;
  std::vector<double> plan_t;
  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    auto t0 = clock_type::now();
    for (std::size_t j = 0; j < expr_nodes; ++j) {
      tree_values[j] = expr::evaluate(c.generator.g, xs[j], c.time.t0);
    }
    tree_t.push_back(seconds_since(t0));
    t0 = clock_type::now();
    plan.evaluate_many(xs, c.time.t0, plan_values);
    plan_t.push_back(seconds_since(t0));
  }
  const bool identical = std::equal(tree_values.begin(), tree_values.end(), plan_values.begin(),
                                    [](double a, double b) {
                                      return std::bit_cast<std::uint64_t>(a) ==
                                             std::bit_cast<std::uint64_t>(b);
                                    });
  const double tree_med = median(tree_t);
  const double plan_med = median(plan_t);

  // Relative spread of the per-(n log2 n) cost across the grid ladder.
  auto spread = [](const std::vector<double>& cost) {
    const auto [lo, hi] = std::minmax_element(cost.begin(), cost.end());
    return *hi / *lo - 1.0;
  };
  auto scaling = [&](std::string_view what, const std::vector<double>& cost) {
    const double sp = spread(cost);
    return json{{"step", what},
                {"cost_per_n_log2_n", cost},
                {"spread", sp},
                {"within_30_percent", sp <= 0.3}};
  };
  CommandResult r;
  r.report = {{"command", "bench"},
              {"scenario", config_to_json(c)},
              {"repetitions", repetitions},
              {"threads", worker_count()},
              {"cells", cells},
              {"expression",
               {{"nodes", expr_nodes},
                {"tree_walk_median_s", tree_med},
                {"compiled_median_s", plan_med},
                {"speedup", tree_med / plan_med},
                {"bit_identical", identical}}},
              {"kinetic_cells", kinetic_cells},
              {"scaling",
               {{"method", "strang_spectral"},
                {"grid_sizes", grid_sizes},
                {"full_step", scaling("strang_step", spectral_cost)},
                {"kinetic_step", scaling("kinetic_full_step", kinetic_cost)}}}};
  return r;
}

}  // namespace dirac::harness
