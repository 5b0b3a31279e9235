#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "dirac/grid.hpp"
#include "dirac/potential.hpp"
#include "dirac/spinor.hpp"
#include "dirac/state.hpp"

namespace dirac {

enum class Method { strang_spectral, crank_nicolson };

std::string_view to_string(Method m) noexcept;
/// Throws ConfigError for unknown names.
Method parse_method(std::string_view name);

struct SolverConfig {
  double dt = 1e-3;
  Method method = Method::strang_spectral;
  /// Mass used when no potential source is given; otherwise the generator's.
  double m = 1.0;
  /// Absent means free evolution.
  std::optional<PotentialSource> potential;
};

/// Exact free propagator in Fourier space. Each mode k is multiplied by
/// exp(-i (sigma1 k + sigma3 m) dt). Owns FFTW plans for one grid size.
class SpectralKinetic {
 public:
  explicit SpectralKinetic(const Grid1D& grid);
  ~SpectralKinetic();
  SpectralKinetic(const SpectralKinetic&) = delete;
  SpectralKinetic& operator=(const SpectralKinetic&) = delete;

  void kinetic_full_step(StateField& state, double m, double dt);

  /// Angular wavenumber of FFT bin j (negative frequencies above n/2).
  double wavenumber(std::size_t j) const noexcept { return k_[j]; }

 private:
  struct Plans;
  std::unique_ptr<Plans> plans_;
  std::vector<double> k_;
  /// Per mode: real diagonal part, imaginary off-diagonal part, imaginary
  /// part of the upper diagonal entry (all scaled by 1/n).
  std::vector<std::array<double, 3>> propagator_;
  double cached_m_ = 0.0;
  double cached_dt_ = 0.0;
};

/// Per node psi <- exp(-i (Vt + Vp sigma2 + Vs sigma3) dt/2) psi.
void potential_half_step(StateField& state, const PotentialField& potential, double dt);

/// Time stepper for i d/dt psi = (H0 + V) psi on a periodic grid.
///
/// strang_spectral: potential half step at t + dt/4, exact kinetic step,
/// potential half step at t + 3dt/4; every factor is unitary.
/// crank_nicolson: second-order central differences in x, potentials at
/// t + dt/2, periodic block-tridiagonal solve per step. Central differences
/// carry the doubled branch near k = pi/dx, so this method is only a
/// cross-check for low-momentum states.
class Evolver {
 public:
  Evolver(const Grid1D& grid, SolverConfig config);

  const SolverConfig& config() const noexcept { return config_; }
  double mass() const noexcept { return m_; }

  void strang_step(StateField& state, double dt);
  void cn_step(StateField& state, double dt);
  /// One step of the configured method with the configured dt.
  void step(StateField& state);

  /// Steps from state.t to t_end with the configured dt. The step count
  /// must be within 1e-9 of an integer (ConfigError otherwise); the final
  /// time is set to exactly t_end.
  void evolve(StateField& state, double t_end);

  /// Number of configured-dt steps between t0 and t_end; throws ConfigError
  /// when not integral or negative.
  std::size_t step_count(double t0, double t_end) const;

  /// Largest relative residual of the linear solves so far (crank_nicolson).
  double max_solve_residual() const noexcept { return max_residual_; }

 private:
  const PotentialField& potential_at_time(double t, int slot);

  Grid1D grid_;
  SolverConfig config_;
  double m_;
  std::unique_ptr<SpectralKinetic> kinetic_;
  bool static_potential_ = false;
  std::array<PotentialField, 2> cache_;
  std::array<double, 2> cache_time_{};
  std::array<bool, 2> cache_valid_{};
  double max_residual_ = 0.0;
  std::vector<Mat2> lower_, diag_, upper_;
  std::vector<Spinor> rhs_;
};

}  // namespace dirac
