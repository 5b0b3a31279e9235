#include "dirac/harness/verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace dirac::harness {

IdentitySuite run_identity_suite(const PotentialSource& source, int draws, std::uint64_t seed) {
  IdentitySuite r;
  r.draws = draws;
  const Mat2 s1 = pauli_matrix(1);
  const Mat2 s2 = pauli_matrix(2);
  const Mat2 s3 = pauli_matrix(3);
  r.anticommutators_exact = anticommutator(s1, s2) == Mat2::zero() &&
                            anticommutator(s1, s3) == Mat2::zero() &&
                            anticommutator(s2, s3) == Mat2::zero();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ug(-5.0, 5.0);
  std::uniform_real_distribution<double> um(0.1, 5.0);
  for (int i = 0; i < draws; ++i) {
    const double g = ug(rng);
    const double c = std::cos(2.0 * g);
    const double s = std::sin(2.0 * g);
    const Mat2 want2 = cplx(c) * s2 - cplx(s) * s3;
    const Mat2 want3 = cplx(c) * s3 + cplx(s) * s2;
    r.conjugation_max = std::max({r.conjugation_max, max_abs(conjugate_by_exp_sigma1(g, 2) - want2),
                                  max_abs(conjugate_by_exp_sigma1(g, 3) - want3)});
    r.identity_max = std::max(r.identity_max, potential_identity_residual(g, um(rng)));
  }
  const Domain& d = source.spec.domain();
  std::uniform_real_distribution<double> ux(d.x_min, d.x_max);
  std::uniform_real_distribution<double> ut(d.t_min, d.t_max);
  for (int i = 0; i < draws; ++i) {
    const double x = ux(rng);
    const double t = ut(rng);
    r.scenario_identity_max = std::max(r.scenario_identity_max,
                                       potential_identity_residual(source.spec, source.gauge, x, t));
  }
  return r;
}

double exact_pde_residual(const ExactSolutionSpec& spec, double x, double t, double h) {
  auto derivative = [h](auto&& f, double at) {
    const Spinor a = f(at - 2.0 * h);
    const Spinor b = f(at - h);
    const Spinor c = f(at + h);
    const Spinor d = f(at + 2.0 * h);
    return cplx(1.0 / (12.0 * h)) * ((a - d) + cplx(8.0) * (c - b));
  };
  const Spinor psi = eval_exact(spec, x, t);
  const Spinor psi_t = derivative([&](double s) { return eval_exact(spec, x, s); }, t);
  const Spinor psi_x = derivative([&](double s) { return eval_exact(spec, s, t); }, x);
  const PotentialSample v = potential_at(spec.generator(), spec.gauge(), x, t);
  const double m = spec.generator().m();
  const Mat2 local = pauli_combination({v.vt, 0.0, v.vp, m + v.vs});
  const Spinor h_psi = cplx(-imag_unit) * apply(pauli_matrix(1), psi_x) + apply(local, psi);
  const Spinor r = imag_unit * psi_t - h_psi;
  return std::max(std::abs(r.up), std::abs(r.dn));
}

ResidualLadder run_residual_ladder(const ExactSolutionSpec& spec, const Domain& window,
                                   const std::vector<double>& steps, std::size_t points,
                                   std::uint64_t seed) {
  ResidualLadder l;
  l.steps = steps;
  l.points = points;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(window.x_min, window.x_max);
  std::uniform_real_distribution<double> ut(window.t_min, window.t_max);
  std::vector<std::pair<double, double>> at(points);
  for (auto& p : at) {
    p.first = ux(rng);
    p.second = window.t_max > window.t_min ? ut(rng) : window.t_min;
  }
  for (double h : steps) {
    double worst = 0.0;
    for (auto [x, t] : at) {
      worst = std::max(worst, exact_pde_residual(spec, x, t, h));
    }
    l.max_residual.push_back(worst);
  }
  for (std::size_t i = 1; i < l.max_residual.size(); ++i) {
    l.ratios.push_back(l.max_residual[i - 1] / l.max_residual[i]);
  }
  return l;
}

}  // namespace dirac::harness
