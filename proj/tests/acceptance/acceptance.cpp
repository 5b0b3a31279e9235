// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dirac/exact_solution.hpp"
#include "dirac/solver.hpp"
#include "support/oracles.hpp"
#include "support/residual.hpp"

using namespace dirac;

namespace {

// Tolerances and limits, fixed here so every run is judged the same way.
constexpr double identity_tol = 1e-13;
constexpr double identity_runtime_s = 1.0;
constexpr double residual_ratio_lo = 12.0;
constexpr double residual_ratio_hi = 20.0;
constexpr double residual_runtime_s = 10.0;
constexpr double evolution_tol = 1e-4;
constexpr double order_lo = 1.9;
constexpr double order_hi = 2.1;
constexpr double evolution_runtime_s = 60.0;
constexpr double free_tol = 1e-10;
constexpr double free_runtime_s = 5.0;
constexpr double norm_drift_tol = 1e-10;
constexpr double range_slack = 1e-12;
constexpr double gauge_tol = 1e-8;
constexpr double cross_tol = 1e-2;
constexpr double cross_shrink = 3.5;

constexpr int random_draws = 1000;
constexpr int residual_points = 200;
const std::vector<double> residual_steps{1e-2, 5e-3, 2.5e-3};
const std::vector<double> dt_ladder{1e-3, 5e-4, 2.5e-4, 1.25e-4};

// Shared scenario: packet on [-20, 20), 4096 nodes, t in [0, 1].
constexpr double x_lo = -20.0;
constexpr double x_hi = 20.0;
constexpr std::size_t nodes = 4096;
constexpr double t_end = 1.0;
constexpr double mass = 1.0;

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

int failures = 0;

void report(int id, bool pass, const std::string& title, const std::string& detail) {
  std::printf("criterion %d: %s  %s -- %s\n", id, pass ? "PASS" : "FAIL", title.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) {
    ++failures;
  }
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

FreeSolutionSpec packet(double p_center) {
  return gaussian_packet(p_center, 1.0, 64, 6.0, mass, EnergyBranch::positive);
}

PotentialSource source(const std::string& g, std::optional<std::string> f = std::nullopt) {
  std::optional<expr::Expr> fe;
  if (f) {
    fe = expr::parse(*f);
  }
  GeneratorSpec spec(expr::parse(g), mass, x_lo, {x_lo, x_hi, 0.0, t_end}, fe);
  GaugeField gauge = build_gauge_f(spec);
  return {std::move(spec), std::move(gauge)};
}

ExactSolutionSpec exact_for(const PotentialSource& src, double p_center) {
  return ExactSolutionSpec(src.spec, src.gauge, packet(p_center));
}

struct RunResult {
  double error = 0.0;
  double norm_drift = 0.0;
};

/// Evolves the exact initial field with the spectral method and compares
/// against the closed form on the interior window.
RunResult run_strang(const ExactSolutionSpec& exact, const PotentialSource& src, double dt,
                     bool free) {
  const Grid1D grid(x_lo, x_hi, nodes);
  SolverConfig cfg;
  cfg.dt = dt;
  cfg.m = mass;
  if (!free) {
    cfg.potential = src;
  }
  Evolver ev(grid, cfg);
  StateField state = eval_exact_field(exact, grid, 0.0);
  const double n0 = norm(state);
  ev.evolve(state, t_end);
  const StateField target = free ? eval_free_field(exact.free(), grid, t_end)
                                 : eval_exact_field(exact, grid, t_end);
  return {l2_error(state, target, interior_window(grid)), std::abs(norm(state) - n0) / n0};
}

struct Ladder {
  std::vector<RunResult> runs;
  std::vector<double> orders;
};

Ladder run_ladder(const ExactSolutionSpec& exact, const PotentialSource& src, bool free) {
  Ladder l;
  for (double dt : dt_ladder) {
    l.runs.push_back(run_strang(exact, src, dt, free));
  }
  for (std::size_t i = 1; i < l.runs.size(); ++i) {
    l.orders.push_back(std::log2(l.runs[i - 1].error / l.runs[i].error));
  }
  return l;
}

std::string join(const std::vector<double>& v, const char* f) {
  std::string s;
  for (double x : v) {
    s += (s.empty() ? "" : ", ") + fmt(f, x);
  }
  return "[" + s + "]";
}

bool orders_ok(const std::vector<double>& orders) {
  for (double o : orders) {
    if (!(o >= order_lo && o <= order_hi)) {
      return false;
    }
  }
  return !orders.empty();
}

// 1 ------------------------------------------------------------------------
void pauli_identities() {
  const auto start = clock_type::now();
  const Mat2 s1 = pauli_matrix(1);
  const Mat2 s2 = pauli_matrix(2);
  const Mat2 s3 = pauli_matrix(3);
  const bool anti = anticommutator(s1, s2) == Mat2::zero() &&
                    anticommutator(s1, s3) == Mat2::zero() &&
                    anticommutator(s2, s3) == Mat2::zero();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ug(-5.0, 5.0);
  std::uniform_real_distribution<double> um(0.1, 5.0);
  double conj = 0.0;
  double ident = 0.0;
  for (int i = 0; i < random_draws; ++i) {
    const double g = ug(rng);
    const double m = um(rng);
    const double c = std::cos(2 * g);
    const double s = std::sin(2 * g);
    // exp(i sigma1 g) sigma2,3 exp(-i sigma1 g) in closed form
    const Mat2 want2 = cplx(c) * s2 - cplx(s) * s3;
    const Mat2 want3 = cplx(c) * s3 + cplx(s) * s2;
    conj = std::max({conj, max_abs(conjugate_by_exp_sigma1(g, 2) - want2),
                     max_abs(conjugate_by_exp_sigma1(g, 3) - want3)});
    ident = std::max(ident, potential_identity_residual(g, m));
  }
  const double elapsed = seconds_since(start);
  report(1, anti && conj <= identity_tol && ident <= identity_tol && elapsed < identity_runtime_s,
         "Pauli identity suite",
         fmt("anticommutators exact: %s; conjugation max %.2e, potential identity max %.2e "
             "(tol %.0e) over %d draws; %.3f s (< %.0f s)",
             anti ? "yes" : "no", conj, ident, identity_tol, random_draws, elapsed,
             identity_runtime_s));
}

// 2 ------------------------------------------------------------------------
void pde_residual() {
  const auto start = clock_type::now();
  const PotentialSource src = source("0.3*x*t");
  const ExactSolutionSpec exact = exact_for(src, 2.0);
  std::mt19937_64 rng(2);
  const double margin = 0.1 * (x_hi - x_lo);
  std::uniform_real_distribution<double> ux(x_lo + margin, x_hi - margin);
  std::uniform_real_distribution<double> ut(0.1, 0.9);
  std::vector<std::pair<double, double>> points(residual_points);
  for (auto& p : points) {
    p = {ux(rng), ut(rng)};
  }
  std::vector<double> worst;
  for (double h : residual_steps) {
    double r = 0.0;
    for (auto [x, t] : points) {
      r = std::max(r, testing::exact_pde_residual(exact, x, t, h));
    }
    worst.push_back(r);
  }
  std::vector<double> ratios;
  bool ok = true;
  for (std::size_t i = 1; i < worst.size(); ++i) {
    ratios.push_back(worst[i - 1] / worst[i]);
    ok = ok && ratios.back() >= residual_ratio_lo && ratios.back() <= residual_ratio_hi;
  }
  const double elapsed = seconds_since(start);
  report(2, ok && elapsed < residual_runtime_s, "exact-solution PDE residual",
         fmt("max residual %s at h = %s; ratios %s (want [%.0f, %.0f]); %.2f s (< %.0f s)",
             join(worst, "%.3e").c_str(), join(residual_steps, "%g").c_str(),
             join(ratios, "%.2f").c_str(), residual_ratio_lo, residual_ratio_hi, elapsed,
             residual_runtime_s));
}

// Norm drift of criterion 3's dt = 1e-3 run, judged as criterion 6.
double unitarity_drift = NAN;

// 3 ------------------------------------------------------------------
void manufactured_evolution() {
  const auto start = clock_type::now();
  const PotentialSource src = source("0.3*x*t");
  const Ladder l = run_ladder(exact_for(src, 2.0), src, false);
  const double elapsed = seconds_since(start);
  const double err = l.runs.front().error;
  report(3, err <= evolution_tol && orders_ok(l.orders) && elapsed < evolution_runtime_s,
         "manufactured-solution evolution",
         fmt("g = 0.3*x*t, L2 error at dt = %g: %.3e (tol %.0e); orders %s (want [%.1f, %.1f]); "
             "%.1f s (< %.0f s)",
             dt_ladder.front(), err, evolution_tol, join(l.orders, "%.4f").c_str(), order_lo,
             order_hi, elapsed, evolution_runtime_s));
  unitarity_drift = l.runs.front().norm_drift;
}

// 6 ------------------------------------------------------------------------
void unitarity() {
  const double drift = unitarity_drift;
  const auto steps = static_cast<long>(std::lround(t_end / dt_ladder.front()));
  report(6, drift <= norm_drift_tol, "unitarity",
         fmt("relative norm drift over %ld strang steps: %.2e (tol %.0e)", steps, drift,
             norm_drift_tol));
}

// 4 ------------------------------------------------------------------------
void time_independent() {
  const auto start = clock_type::now();
  const PotentialSource src = source("0.5*sin(x)");
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ux(x_lo, x_hi);
  std::uniform_real_distribution<double> ut(0.0, t_end);
  bool f_zero = src.spec.time_independent() && src.gauge.identically_zero();
  double vt_err = 0.0;
  for (int i = 0; i < random_draws; ++i) {
    const double x = ux(rng);
    const double t = ut(rng);
    f_zero = f_zero && src.gauge.f(x, t) == 0.0 && src.gauge.df_dt(x, t) == 0.0;
    vt_err = std::max(vt_err, std::abs(potential_at(src.spec, src.gauge, x, t).vt -
                                       0.5 * std::cos(x)));
  }
  const Ladder l = run_ladder(exact_for(src, 2.0), src, false);
  const double elapsed = seconds_since(start);
  const double err = l.runs.front().error;
  report(4,
         f_zero && vt_err <= 1e-15 && err <= evolution_tol && orders_ok(l.orders) &&
             elapsed < evolution_runtime_s,
         "time-independent generator",
         fmt("g = 0.5*sin(x): f identically 0: %s; max |Vt - 0.5 cos x| %.1e; L2 error %.3e "
             "(tol %.0e); orders %s; %.1f s",
             f_zero ? "yes" : "no", vt_err, err, evolution_tol, join(l.orders, "%.4f").c_str(),
             elapsed));
}

// 5 ------------------------------------------------------------------------
void free_limit() {
  const auto start = clock_type::now();
  const PotentialSource src = source("0");
  const Ladder l = run_ladder(exact_for(src, 2.0), src, true);
  const double elapsed = seconds_since(start);
  std::vector<double> errors;
  bool ok = true;
  for (const auto& r : l.runs) {
    errors.push_back(r.error);
    ok = ok && r.error <= free_tol;
  }
  report(5, ok && elapsed < free_runtime_s, "free-field limit",
         fmt("L2 error vs free solution at dt = %s: %s (tol %.0e); %.2f s (< %.0f s)",
             join(dt_ladder, "%g").c_str(), join(errors, "%.2e").c_str(), free_tol, elapsed,
             free_runtime_s));
}

// 7 ------------------------------------------------------------------------
void potential_ranges() {
  double vs_low = 0.0;
  double vs_high = -INFINITY;
  double vp_max = 0.0;
  std::size_t samples = 0;
  for (const char* g : {"0.3*x*t", "0.5*sin(x)", "0"}) {
    const PotentialSource src = source(g);
    for (std::size_t n : {std::size_t{1024}, std::size_t{2048}, nodes}) {
      const Grid1D grid(x_lo, x_hi, n);
      for (int k = 0; k <= 8; ++k) {
        const PotentialField field = sample_potential_grid(src.spec, src.gauge, grid, k / 8.0);
        for (const auto& s : field) {
          vs_low = std::min(vs_low, s.vs);
          vs_high = std::max(vs_high, s.vs);
          vp_max = std::max(vp_max, std::abs(s.vp));
        }
        samples += field.size();
      }
    }
  }
  const bool ok = vs_low >= -2.0 * mass - range_slack && vs_high <= range_slack &&
                  vp_max <= mass + range_slack;
  report(7, ok, "potential range invariant",
         fmt("%zu samples: Vs in [%.6f, %.2e] (want [-2m, 0]), max |Vp| %.6f (want <= m), "
             "slack %.0e",
             samples, vs_low, vs_high, vp_max, range_slack));
}

// 8 ------------------------------------------------------------------------
void gauge_constraint() {
  struct Case {
    const char* g;
    std::optional<std::string> f;
  };
  const Case cases[] = {{"0.3*x*t", std::nullopt},
                        {"0.4*sin(0.5*x*t) + 0.1*exp(-x^2)*cos(t)", std::nullopt},
                        {"0.3*x*t", "-0.15*x^2"},
                        {"x*sin(t)", "-0.5*x^2*cos(t)"}};
  std::mt19937_64 rng(8);
  const double h = 1e-2;
  std::uniform_real_distribution<double> ux(x_lo + 2 * h, x_hi - 2 * h);
  std::uniform_real_distribution<double> ut(0.0, t_end);
  double worst[2] = {0.0, 0.0};
  for (const auto& c : cases) {
    const PotentialSource src = source(c.g, c.f);
    const int mode = src.gauge.mode() == GaugeMode::quadrature ? 0 : 1;
    for (int i = 0; i < random_draws; ++i) {
      const double x = ux(rng);
      const double t = ut(rng);
      // df/dx by finite differences of f itself, independent of the stored partial
      const double fx =
          testing::central_diff4([&](double s) { return src.gauge.f(s, t); }, x, h);
      const double stored = src.gauge.df_dx(x, t);
      const double gt = src.spec.eval_dg_dt(x, t);
      worst[mode] = std::max({worst[mode], std::abs(fx + gt), std::abs(stored + gt)});
    }
  }
  report(8, worst[0] <= gauge_tol && worst[1] <= gauge_tol, "gauge constraint",
         fmt("max |df/dx + dg/dt| over %d points per generator: quadrature %.2e, analytic %.2e "
             "(tol %.0e)",
             random_draws, worst[0], worst[1], gauge_tol));
}

// 9 ------------------------------------------------------------------------
void cross_method() {
  const PotentialSource src = source("0.3*x*t");
  const FreeSolutionSpec slow = packet(0.5);
  auto compare = [&](std::size_t n, double dt) {
    const Grid1D grid(x_lo, x_hi, n);
    const StateField start = eval_free_field(slow, grid, 0.0);
    double residual = 0.0;
    auto run = [&](Method m) {
      SolverConfig cfg;
      cfg.dt = dt;
      cfg.method = m;
      cfg.potential = src;
      Evolver ev(grid, cfg);
      StateField s = start;
      ev.evolve(s, t_end);
      residual = std::max(residual, ev.max_solve_residual());
      return s;
    };
    const StateField cn = run(Method::crank_nicolson);
    const StateField ss = run(Method::strang_spectral);
    return std::pair{l2_error(cn, ss, interior_window(grid)), residual};
  };
  const auto [coarse, r1] = compare(1024, 1e-3);
  const auto [fine, r2] = compare(2048, 5e-4);
  const double shrink = coarse / fine;
  report(9, coarse <= cross_tol && shrink >= cross_shrink, "cross-method agreement",
         fmt("p_center 0.5: L2(CN - spectral) %.3e at n=1024, dt=1e-3 (tol %.0e); %.3e at "
             "n=2048, dt=5e-4; shrink %.2fx (want >= %.1fx); max CN solve residual %.1e",
             coarse, cross_tol, fine, shrink, cross_shrink, std::max(r1, r2)));
}

void guarded(int id, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(id, false, "aborted", e.what());
  }
}

}  // namespace

int main() {
  guarded(1, pauli_identities);
  guarded(2, pde_residual);
  guarded(3, manufactured_evolution);
  guarded(4, time_independent);
  guarded(5, free_limit);
  guarded(6, unitarity);
  guarded(7, potential_ranges);
  guarded(8, gauge_constraint);
  guarded(9, cross_method);
  std::printf("%d criteria failed\n", failures);
  return failures;
}
