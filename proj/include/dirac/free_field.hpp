#pragma once

#include <vector>

#include "dirac/spinor.hpp"

namespace dirac {

enum class EnergyBranch { positive, negative };

/// +sqrt(p^2 + m^2)
double dispersion(double p, double m);

/// Unit eigenvector of sigma1 p + sigma3 m with eigenvalue +-sqrt(p^2 + m^2).
/// Phase convention: upper component real and >= 0 on the positive branch,
/// lower component real and >= 0 on the negative branch.
Spinor plane_wave_spinor(double p, double m, EnergyBranch branch);

/// One free plane wave amplitude * u(p) * exp(i(p x - E t)).
struct PlaneWaveMode {
  double p = 0.0;
  EnergyBranch branch = EnergyBranch::positive;
  cplx amplitude{1.0, 0.0};
};

/// Finite superposition of plane waves sharing the mass m. Spinors and
/// energies are computed once at construction. Throws ConfigError on an empty
/// mode list or m <= 0.
class FreeSolutionSpec {
 public:
  FreeSolutionSpec(double m, std::vector<PlaneWaveMode> modes);

  double m() const noexcept { return m_; }
  const std::vector<PlaneWaveMode>& modes() const noexcept { return modes_; }
  /// Signed energy of mode k.
  double energy(std::size_t k) const { return energies_.at(k); }
  const Spinor& spinor(std::size_t k) const { return spinors_.at(k); }

 private:
  double m_;
  std::vector<PlaneWaveMode> modes_;
  std::vector<double> energies_;
  std::vector<Spinor> spinors_;
};

/// sum_k a_k u_k exp(i(p_k x - E_k t))
Spinor eval_free(const FreeSolutionSpec& spec, double x, double t);

/// Gaussian momentum packet: n_modes momenta evenly spaced on
/// [p_center - p_span, p_center + p_span] with weights
/// exp(-(p - p_center)^2 width^2 / 2), scaled so the spatial norm over one
/// period 2 pi / dp of the mode sum is 1. n_modes = 1 gives the single unit
/// plane wave at p_center. Throws ConfigError for width <= 0, p_span <= 0 or
/// 1 < n_modes < 8.
FreeSolutionSpec gaussian_packet(double p_center, double width, std::size_t n_modes, double p_span,
                                 double m, EnergyBranch branch);

}  // namespace dirac
