#pragma once

#include "dirac/free_field.hpp"
#include "dirac/grid.hpp"
#include "dirac/potential.hpp"
#include "dirac/state.hpp"

namespace dirac {

/// psi = exp(-i f) exp(-i sigma1 g) psi0, with psi0 a free solution.
/// Throws ValidationError when the generator and free solution disagree on m.
class ExactSolutionSpec {
 public:
  ExactSolutionSpec(GeneratorSpec generator, GaugeField gauge, FreeSolutionSpec free);

  const GeneratorSpec& generator() const noexcept { return generator_; }
  const GaugeField& gauge() const noexcept { return gauge_; }
  const FreeSolutionSpec& free() const noexcept { return free_; }

 private:
  GeneratorSpec generator_;
  GaugeField gauge_;
  FreeSolutionSpec free_;
};

/// exp(-i f_val) exp(-i sigma1 g_val) s. The scalar phase is applied after the
/// spinor rotation; the two factors commute.
Spinor transform_U(double f_val, double g_val, const Spinor& s);

Spinor eval_exact(const ExactSolutionSpec& spec, double x, double t);

/// eval_exact at every node (data-parallel, bit-identical to per-node calls).
StateField eval_exact_field(const ExactSolutionSpec& spec, const Grid1D& grid, double t);

/// eval_free sampled on the grid.
StateField eval_free_field(const FreeSolutionSpec& spec, const Grid1D& grid, double t);

}  // namespace dirac
