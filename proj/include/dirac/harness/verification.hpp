#pragma once

#include <cstdint>
#include <vector>

#include "dirac/exact_solution.hpp"
#include "dirac/potential.hpp"

namespace dirac::harness {

struct IdentitySuite {
  bool anticommutators_exact = false;
  /// exp(i sigma1 g) sigma_j exp(-i sigma1 g) against its closed form.
  double conjugation_max = 0.0;
  /// Potential identity over random (g, m) draws.
  double identity_max = 0.0;
  /// Potential identity at random points of the scenario's domain.
  double scenario_identity_max = 0.0;
  int draws = 0;
};

IdentitySuite run_identity_suite(const PotentialSource& source, int draws, std::uint64_t seed);

/// Max-norm residual of i psi_t - (H0 + Vt + Vs sigma3 + Vp sigma2) psi for
/// the closed-form solution, with fourth-order central differences of step h
/// in both x and t.
double exact_pde_residual(const ExactSolutionSpec& spec, double x, double t, double h);

struct ResidualLadder {
  std::vector<double> steps;
  /// Largest residual over all points, per step.
  std::vector<double> max_residual;
  /// max_residual[i] / max_residual[i+1]
  std::vector<double> ratios;
  std::size_t points = 0;
};

/// Residuals at `points` random points inside `window` for each step size.
ResidualLadder run_residual_ladder(const ExactSolutionSpec& spec, const Domain& window,
                                   const std::vector<double>& steps, std::size_t points,
                                   std::uint64_t seed);

}  // namespace dirac::harness
