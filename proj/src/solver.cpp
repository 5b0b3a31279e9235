#include "dirac/solver.hpp"

#include <fftw3.h>
#include <omp.h>

#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>
#include <sstream>

#include "dirac/block_tridiagonal.hpp"
#include "dirac/error.hpp"
#include "dirac/parallel.hpp"

namespace dirac {

static_assert(sizeof(cplx) == sizeof(fftw_complex), "std::complex must match fftw_complex");

std::string_view to_string(Method m) noexcept {
  return m == Method::strang_spectral ? "strang_spectral" : "crank_nicolson";
}

Method parse_method(std::string_view name) {
  if (name == "strang_spectral") {
    return Method::strang_spectral;
  }
  if (name == "crank_nicolson") {
    return Method::crank_nicolson;
  }
  throw ConfigError("unknown method '" + std::string(name) +
                    "' (expected strang_spectral or crank_nicolson)");
}

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

// The two spinor components are stored as two contiguous sequences (upper
// then lower) and transformed by one batched plan. FFTW_ESTIMATE keeps plan
// selection, and hence rounding, deterministic.
struct SpectralKinetic::Plans {
  explicit Plans(std::size_t n) : n(n) {
    buffer = fftw_alloc_complex(2 * n);
    if (buffer == nullptr) {
      throw std::bad_alloc();
    }
    const int len = static_cast<int>(n);
    std::lock_guard lock(planner_mutex());
    forward = fftw_plan_many_dft(1, &len, 2, buffer, nullptr, 1, len, buffer, nullptr, 1, len,
                                 FFTW_FORWARD, FFTW_ESTIMATE);
    backward = fftw_plan_many_dft(1, &len, 2, buffer, nullptr, 1, len, buffer, nullptr, 1, len,
                                  FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(buffer);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;

  std::size_t n;
  fftw_complex* buffer = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

SpectralKinetic::SpectralKinetic(const Grid1D& grid)
    : plans_(std::make_unique<Plans>(grid.size())), k_(grid.size()) {
  const std::size_t n = grid.size();
  const double dk = 2.0 * std::numbers::pi / grid.length();
  for (std::size_t j = 0; j < n; ++j) {
    const auto signed_j = j < n / 2 ? static_cast<double>(j)
                                    : static_cast<double>(j) - static_cast<double>(n);
    k_[j] = signed_j * dk;
  }
}

SpectralKinetic::~SpectralKinetic() = default;

void SpectralKinetic::kinetic_full_step(StateField& state, double m, double dt) {
  const std::size_t n = plans_->n;
  if (state.psi.size() != n) {
    throw GridMismatchError("kinetic_full_step: state size does not match the plan");
  }
  if (dt == 0.0) {
    return;
  }
  if (propagator_.empty() || cached_m_ != m || cached_dt_ != dt) {
    // exp(-i (sigma1 k + sigma3 m) dt) = cos I - i sin (sigma1 k + sigma3 m)/E
    // has only the entries (c - i s3, -i s1; -i s1, c + i s3); the inverse
    // transform's 1/n is folded in.
    const double scale = 1.0 / static_cast<double>(n);
    propagator_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const Mat2 u = pauli_exp({0.0, k_[j] * dt, 0.0, m * dt});
      propagator_[j] = {scale * u.e[0].real(), scale * u.e[1].imag(), scale * u.e[0].imag()};
    }
    cached_m_ = m;
    cached_dt_ = dt;
  }
  auto* up = reinterpret_cast<cplx*>(plans_->buffer);
  cplx* dn = up + n;
  for (std::size_t j = 0; j < n; ++j) {
    up[j] = state.psi[j].up;
    dn[j] = state.psi[j].dn;
  }
  fftw_execute(plans_->forward);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& [c, s1, s3] = propagator_[j];
    const cplx a = up[j];
    const cplx b = dn[j];
    // (c + i s3) a + i s1 b with s1, s3 holding the signed imaginary parts
    up[j] = cplx(c * a.real() - s3 * a.imag() - s1 * b.imag(),
                 c * a.imag() + s3 * a.real() + s1 * b.real());
    dn[j] = cplx(c * b.real() + s3 * b.imag() - s1 * a.imag(),
                 c * b.imag() - s3 * b.real() + s1 * a.real());
  }
  fftw_execute(plans_->backward);
  for (std::size_t j = 0; j < n; ++j) {
    state.psi[j] = {up[j], dn[j]};
  }
}

void potential_half_step(StateField& state, const PotentialField& potential, double dt) {
  if (potential.size() != state.psi.size()) {
    throw GridMismatchError("potential_half_step: potential and state sizes differ");
  }
  const double h = 0.5 * dt;
  const auto n = static_cast<std::ptrdiff_t>(state.psi.size());
#pragma omp parallel for num_threads(worker_count()) if (n >= 8192) schedule(static)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const auto idx = static_cast<std::size_t>(j);
    const PotentialSample& v = potential[idx];
    state.psi[idx] = pauli_exp({v.vt * h, 0.0, v.vp * h, v.vs * h}) * state.psi[idx];
  }
}

Evolver::Evolver(const Grid1D& grid, SolverConfig config)
    : grid_(grid), config_(std::move(config)), m_(config_.m) {
  if (!(config_.dt > 0.0) || !std::isfinite(config_.dt)) {
    throw ConfigError("solver: dt must be finite and > 0");
  }
  if (config_.potential) {
    m_ = config_.potential->spec.m();
    static_potential_ = config_.potential->spec.time_independent() &&
                        config_.potential->gauge.mode() == GaugeMode::quadrature;
  }
  if (!(m_ > 0.0)) {
    throw ConfigError("solver: mass must be > 0");
  }
  if (config_.method == Method::strang_spectral) {
    kinetic_ = std::make_unique<SpectralKinetic>(grid_);
  }
}

const PotentialField& Evolver::potential_at_time(double t, int slot) {
  const auto s = static_cast<std::size_t>(slot);
  if (static_potential_) {
    if (!cache_valid_[0]) {
      cache_[0] = sample_potential_grid(config_.potential->spec, config_.potential->gauge, grid_, t);
      cache_valid_[0] = true;
    }
    return cache_[0];
  }
  if (!cache_valid_[s] || cache_time_[s] != t) {
    cache_[s] = sample_potential_grid(config_.potential->spec, config_.potential->gauge, grid_, t);
    cache_time_[s] = t;
    cache_valid_[s] = true;
  }
  return cache_[s];
}

void Evolver::strang_step(StateField& state, double dt) {
  if (!(state.grid == grid_)) {
    throw GridMismatchError("strang_step: state grid differs from solver grid");
  }
  if (!kinetic_) {
    kinetic_ = std::make_unique<SpectralKinetic>(grid_);
  }
  const double t0 = state.t;
  if (config_.potential) {
    potential_half_step(state, potential_at_time(t0 + 0.25 * dt, 0), dt);
  }
  kinetic_->kinetic_full_step(state, m_, dt);
  if (config_.potential) {
    potential_half_step(state, potential_at_time(t0 + 0.75 * dt, 1), dt);
  }
  state.t = t0 + dt;
}

void Evolver::cn_step(StateField& state, double dt) {
  if (!(state.grid == grid_)) {
    throw GridMismatchError("cn_step: state grid differs from solver grid");
  }
  const double t0 = state.t;
  if (dt == 0.0) {
    return;
  }
  const std::size_t n = grid_.size();
  const double tau = 0.5 * dt;
  const double c = tau / (2.0 * grid_.dx());
  const Mat2 sigma1 = pauli_matrix(1);
  const PotentialField* v =
      config_.potential ? &potential_at_time(t0 + 0.5 * dt, 0) : nullptr;
  lower_.assign(n, cplx(-c) * sigma1);
  upper_.assign(n, cplx(c) * sigma1);
  diag_.resize(n);
  rhs_.resize(n);
  const cplx itau = imag_unit * tau;
  for (std::size_t j = 0; j < n; ++j) {
    PotentialSample p;
    if (v != nullptr) {
      p = (*v)[j];
    }
    const Mat2 local = pauli_combination({p.vt, 0.0, p.vp, m_ + p.vs});
    diag_[j] = Mat2::identity() + itau * local;
    const Mat2 explicit_part = Mat2::identity() - itau * local;
    const Spinor& right = state.psi[(j + 1) % n];
    const Spinor& left = state.psi[(j + n - 1) % n];
    rhs_[j] = explicit_part * state.psi[j] - cplx(c) * (sigma1 * right) +
              cplx(c) * (sigma1 * left);
  }
  const double residual =
      solve_periodic_block_tridiagonal(lower_, diag_, upper_, rhs_, state.psi);
  max_residual_ = std::max(max_residual_, residual);
  state.t = t0 + dt;
}

void Evolver::step(StateField& state) {
  if (config_.method == Method::strang_spectral) {
    strang_step(state, config_.dt);
  } else {
    cn_step(state, config_.dt);
  }
}

std::size_t Evolver::step_count(double t0, double t_end) const {
  const double ratio = (t_end - t0) / config_.dt;
  const double steps = std::round(ratio);
  if (!std::isfinite(ratio) || steps < 0.0 || std::abs(ratio - steps) > 1e-9) {
    std::ostringstream os;
    os.precision(17);
    os << "evolve: (t_end - t)/dt = " << ratio << " is not a non-negative integer";
    throw ConfigError(os.str());
  }
  return static_cast<std::size_t>(steps);
}

void Evolver::evolve(StateField& state, double t_end) {
  const double t0 = state.t;
  const std::size_t steps = step_count(t0, t_end);
  for (std::size_t i = 0; i < steps; ++i) {
    state.t = t0 + static_cast<double>(i) * config_.dt;
    step(state);
  }
  state.t = steps == 0 ? t0 : t_end;
}

}  // namespace dirac
