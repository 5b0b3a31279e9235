#include "dirac/exact_solution.hpp"

#include <cmath>
#include <exception>

#include "dirac/error.hpp"
#include "dirac/parallel.hpp"

namespace dirac {

ExactSolutionSpec::ExactSolutionSpec(GeneratorSpec generator, GaugeField gauge,
                                     FreeSolutionSpec free)
    : generator_(std::move(generator)), gauge_(std::move(gauge)), free_(std::move(free)) {
  if (generator_.m() != free_.m()) {
    throw ValidationError("exact solution: generator and free solution have different masses");
  }
}

Spinor transform_U(double f_val, double g_val, const Spinor& s) {
  const Spinor rotated = pauli_exp({0.0, g_val, 0.0, 0.0}) * s;
  return std::polar(1.0, -f_val) * rotated;
}

Spinor eval_exact(const ExactSolutionSpec& spec, double x, double t) {
  const double f = spec.gauge().f(x, t);
  const double g = spec.generator().eval_g(x, t);
  return transform_U(f, g, eval_free(spec.free(), x, t));
}

namespace {

template <class Fn>
StateField sample_field(const Grid1D& grid, double t, Fn&& point) {
  StateField field(grid, t);
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  std::exception_ptr failure;
#pragma omp parallel for num_threads(worker_count()) if (n >= 1024) schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    try {
      const auto idx = static_cast<std::size_t>(j);
      field.psi[idx] = point(grid.x(idx));
    } catch (...) {
#pragma omp critical(dirac_field_failure)
      if (!failure) {
        failure = std::current_exception();
      }
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return field;
}

}  // namespace

StateField eval_exact_field(const ExactSolutionSpec& spec, const Grid1D& grid, double t) {
  return sample_field(grid, t, [&](double x) { return eval_exact(spec, x, t); });
}

StateField eval_free_field(const FreeSolutionSpec& spec, const Grid1D& grid, double t) {
  return sample_field(grid, t, [&](double x) { return eval_free(spec, x, t); });
}

}  // namespace dirac
