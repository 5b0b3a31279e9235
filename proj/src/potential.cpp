#include "dirac/potential.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dirac/error.hpp"
#include "dirac/parallel.hpp"

namespace dirac {

namespace {

constexpr int lattice_side = 32;

template <class Fn>
void for_each_lattice_point(const Domain& d, Fn&& fn) {
  for (int i = 0; i < lattice_side; ++i) {
    const double x = d.x_min + (d.x_max - d.x_min) * i / (lattice_side - 1);
    for (int k = 0; k < lattice_side; ++k) {
      const double t = d.t_min + (d.t_max - d.t_min) * k / (lattice_side - 1);
      fn(x, t);
    }
  }
}

// The single place the potentials are formed from g. Kept out of line so
// every caller runs the same code: the compiler may otherwise fuse sin and cos
// into sincos at some call sites and not others, changing the last bit.
[[gnu::noinline]] PotentialSample from_generator(double m, double g, double dg_dx,
                                                 double df_dt) {
  PotentialSample s;
  s.vs = m * (std::cos(2.0 * g) - 1.0);
  s.vp = -m * std::sin(2.0 * g);
  s.vt = df_dt + dg_dx;
  return s;
}

std::string point_string(double x, double t) {
  std::ostringstream os;
  os.precision(17);
  os << "(x=" << x << ", t=" << t << ")";
  return os.str();
}

}  // namespace

GeneratorSpec::GeneratorSpec(expr::Expr g, double m, double x0, Domain domain,
                             std::optional<expr::Expr> f)
    : g_(std::move(g)), m_(m), x0_(x0), domain_(domain), f_(std::move(f)) {
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw ValidationError("generator: mass must be finite and > 0");
  }
  if (!std::isfinite(x0)) {
    throw ValidationError("generator: gauge anchor x0 must be finite");
  }
  if (!std::isfinite(domain.x_min) || !std::isfinite(domain.x_max) ||
      !std::isfinite(domain.t_min) || !std::isfinite(domain.t_max) ||
      !(domain.x_max > domain.x_min) || domain.t_max < domain.t_min) {
    throw ValidationError("generator: invalid working domain");
  }
  g_x_ = expr::differentiate(g_, expr::Var::x);
  g_t_ = expr::differentiate(g_, expr::Var::t);
  g_tt_ = expr::differentiate(g_t_, expr::Var::t);
  g_plan_ = expr::compile(g_);
  g_x_plan_ = expr::compile(g_x_);
  g_t_plan_ = expr::compile(g_t_);
  g_tt_plan_ = expr::compile(g_tt_);
  for_each_lattice_point(domain_, [&](double x, double t) {
    if (!std::isfinite(eval_g(x, t)) || !std::isfinite(eval_dg_dx(x, t)) ||
        !std::isfinite(eval_dg_dt(x, t))) {
      throw ValidationError("generator: g or its derivatives not finite at " +
                            point_string(x, t));
    }
  });
}

GaugeField build_gauge_f(const GeneratorSpec& spec, const QuadratureOptions& options) {
  GaugeField gf;
  gf.options_ = options;
  gf.x0_ = spec.x0();
  if (spec.f()) {
    const expr::Expr& f = *spec.f();
    const expr::Expr f_x = expr::differentiate(f, expr::Var::x);
    const expr::Expr f_t = expr::differentiate(f, expr::Var::t);
    gf.mode_ = GaugeMode::analytic;
    gf.f_zero_ = expr::simplify(f).is_constant(0.0);
    gf.ft_zero_ = f_t.is_constant(0.0);
    gf.a_ = expr::compile(f);
    gf.b_ = expr::compile(f_x);
    gf.c_ = expr::compile(f_t);
    for_each_lattice_point(spec.domain(), [&](double x, double t) {
      const double r = gf.df_dx(x, t) + spec.eval_dg_dt(x, t);
      if (!(std::abs(r) <= gauge_residual_tolerance)) {
        std::ostringstream os;
        os.precision(3);
        os << "gauge: |df/dx + dg/dt| = " << std::abs(r) << " exceeds "
           << gauge_residual_tolerance << " at " << point_string(x, t);
        throw ValidationError(os.str());
      }
    });
    return gf;
  }
  gf.mode_ = GaugeMode::quadrature;
  gf.f_zero_ = spec.dg_dt().is_constant(0.0);
  gf.ft_zero_ = spec.d2g_dt2().is_constant(0.0);
  gf.a_ = expr::compile(spec.dg_dt());
  gf.b_ = expr::compile(spec.d2g_dt2());
  return gf;
}

double GaugeField::f(double x, double t) const {
  if (f_zero_) {
    return 0.0;
  }
  if (mode_ == GaugeMode::analytic) {
    return a_.evaluate(x, t);
  }
  auto integrand = [&](double xp) { return a_.evaluate(xp, t); };
  return -integrate_gk15(integrand, x0_, x, options_).value;
}

double GaugeField::df_dx(double x, double t) const {
  if (mode_ == GaugeMode::analytic) {
    return b_.evaluate(x, t);
  }
  return f_zero_ ? 0.0 : -a_.evaluate(x, t);
}

double GaugeField::df_dt(double x, double t) const {
  if (ft_zero_) {
    return 0.0;
  }
  if (mode_ == GaugeMode::analytic) {
    return c_.evaluate(x, t);
  }
  auto integrand = [&](double xp) { return b_.evaluate(xp, t); };
  return -integrate_gk15(integrand, x0_, x, options_).value;
}

PotentialSample potential_at(const GeneratorSpec& spec, const GaugeField& gauge, double x,
                             double t) {
  return from_generator(spec.m(), spec.eval_g(x, t), spec.eval_dg_dx(x, t), gauge.df_dt(x, t));
}

PotentialField sample_potential_grid(const GeneratorSpec& spec, const GaugeField& gauge,
                                     const Grid1D& grid, double t) {
  PotentialField field(grid.size());
  // g and dg/dx are evaluated block-wise (bit-identical to potential_at);
  // chunks are distributed over the workers.
  constexpr std::size_t chunk = 4096;
  const std::size_t n = grid.size();
  const auto chunks = static_cast<std::ptrdiff_t>((n + chunk - 1) / chunk);
  const double m = spec.m();
  // Exceptions must not escape an OpenMP region; collect and rethrow.
  std::exception_ptr failure;
#pragma omp parallel for num_threads(worker_count()) if (chunks > 1) schedule(static)
  for (std::ptrdiff_t c = 0; c < chunks; ++c) {
    try {
      const std::size_t begin = static_cast<std::size_t>(c) * chunk;
      const std::size_t len = std::min(chunk, n - begin);
      std::vector<double> xs(len);
      std::vector<double> g(len);
      std::vector<double> gx(len);
      for (std::size_t j = 0; j < len; ++j) {
        xs[j] = grid.x(begin + j);
      }
      spec.g_plan().evaluate_many(xs, t, g);
      spec.dg_dx_plan().evaluate_many(xs, t, gx);
      for (std::size_t j = 0; j < len; ++j) {
        field[begin + j] = from_generator(m, g[j], gx[j], gauge.df_dt(xs[j], t));
      }
    } catch (...) {
#pragma omp critical(dirac_potential_failure)
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

namespace {

double identity_residual(double g, double m, double vs, double vp) {
  const Mat2 s2 = pauli_matrix(2);
  const Mat2 s3 = pauli_matrix(3);
  // exp(+i sigma1 2g)
  const Mat2 rotation = pauli_exp({0.0, -2.0 * g, 0.0, 0.0});
  const Mat2 lhs = cplx(m) * (s3 * rotation);
  const Mat2 rhs = cplx(m + vs) * s3 + cplx(vp) * s2;
  return max_abs(lhs - rhs);
}

}  // namespace

double potential_identity_residual(double g, double m) {
  return identity_residual(g, m, m * (std::cos(2.0 * g) - 1.0), -m * std::sin(2.0 * g));
}

double potential_identity_residual(const GeneratorSpec& spec, const GaugeField& gauge, double x,
                                   double t) {
  const PotentialSample s = potential_at(spec, gauge, x, t);
  return identity_residual(spec.eval_g(x, t), spec.m(), s.vs, s.vp);
}

double periodicity_mismatch(const GeneratorSpec& spec, const GaugeField& gauge, const Grid1D& grid,
                            double t) {
  const PotentialSample lo = potential_at(spec, gauge, grid.x_min(), t);
  const PotentialSample hi = potential_at(spec, gauge, grid.x_max(), t);
  return std::max({std::abs(lo.vt - hi.vt), std::abs(lo.vs - hi.vs), std::abs(lo.vp - hi.vp)});
}

}  // namespace dirac
