#include "dirac/free_field.hpp"

#include <cmath>
#include <numbers>

#include "dirac/error.hpp"

namespace dirac {

double dispersion(double p, double m) { return std::hypot(p, m); }

Spinor plane_wave_spinor(double p, double m, EnergyBranch branch) {
  const double e = dispersion(p, m);
  // (E + m, p) and (-p, E + m) are the eigenvectors for +E and -E; E + m >= m > 0
  // keeps both well conditioned.
  const double big = e + m;
  const double inv = 1.0 / std::hypot(big, p);
  if (branch == EnergyBranch::positive) {
    return {cplx(big * inv), cplx(p * inv)};
  }
  return {cplx(-p * inv), cplx(big * inv)};
}

FreeSolutionSpec::FreeSolutionSpec(double m, std::vector<PlaneWaveMode> modes)
    : m_(m), modes_(std::move(modes)) {
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw ConfigError("free solution: mass must be finite and > 0");
  }
  if (modes_.empty()) {
    throw ConfigError("free solution: at least one plane-wave mode is required");
  }
  energies_.reserve(modes_.size());
  spinors_.reserve(modes_.size());
  for (const auto& mode : modes_) {
    if (!std::isfinite(mode.p) || !std::isfinite(mode.amplitude.real()) ||
        !std::isfinite(mode.amplitude.imag())) {
      throw ConfigError("free solution: mode momentum and amplitude must be finite");
    }
    const double e = dispersion(mode.p, m);
    energies_.push_back(mode.branch == EnergyBranch::positive ? e : -e);
    spinors_.push_back(plane_wave_spinor(mode.p, m, mode.branch));
  }
}

Spinor eval_free(const FreeSolutionSpec& spec, double x, double t) {
  Spinor sum;
  const auto& modes = spec.modes();
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const cplx phase = std::polar(1.0, modes[k].p * x - spec.energy(k) * t);
    sum += (modes[k].amplitude * phase) * spec.spinor(k);
  }
  return sum;
}

FreeSolutionSpec gaussian_packet(double p_center, double width, std::size_t n_modes, double p_span,
                                 double m, EnergyBranch branch) {
  if (!(width > 0.0) || !(p_span > 0.0)) {
    throw ConfigError("gaussian packet: width and p_span must be > 0");
  }
  if (n_modes == 0 || (n_modes > 1 && n_modes < 8)) {
    throw ConfigError("gaussian packet: n_modes must be 1 or >= 8");
  }
  if (n_modes == 1) {
    return FreeSolutionSpec(m, {PlaneWaveMode{p_center, branch, 1.0}});
  }
  const double dp = 2.0 * p_span / static_cast<double>(n_modes - 1);
  std::vector<PlaneWaveMode> modes(n_modes);
  double sum_w2 = 0.0;
  for (std::size_t k = 0; k < n_modes; ++k) {
    // Mirror-symmetric node placement so weights are exactly even about p_center.
    const double offset = (static_cast<double>(k) - 0.5 * static_cast<double>(n_modes - 1)) * dp;
    const double w = std::exp(-0.5 * offset * offset * width * width);
    modes[k] = PlaneWaveMode{p_center + offset, branch, w};
    sum_w2 += w * w;
  }
  // Over one period 2 pi/dp the cross terms vanish: norm = (2 pi/dp) sum |a_k|^2.
  const double scale = std::sqrt(dp / (2.0 * std::numbers::pi * sum_w2));
  for (auto& mode : modes) {
    mode.amplitude *= scale;
  }
  return FreeSolutionSpec(m, std::move(modes));
}

}  // namespace dirac
