#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dirac/expr.hpp"
#include "dirac/grid.hpp"
#include "dirac/quadrature.hpp"
#include "dirac/spinor.hpp"

namespace dirac {

/// Rectangle in (x, t) on which the generator is declared valid.
struct Domain {
  double x_min = 0.0;
  double x_max = 1.0;
  double t_min = 0.0;
  double t_max = 1.0;
};

/// The generator g(x,t) of the exactly solvable potential family, with mass
/// m > 0, gauge anchor x0 (f(x0,t) = 0 in quadrature mode) and an optional
/// closed-form gauge function f.
///
/// Construction validates the inputs and compiles g together with the
/// symbolic partials the potentials need. Throws ValidationError.
class GeneratorSpec {
 public:
  GeneratorSpec(expr::Expr g, double m, double x0, Domain domain,
                std::optional<expr::Expr> f = std::nullopt);

  const expr::Expr& g() const noexcept { return g_; }
  double m() const noexcept { return m_; }
  double x0() const noexcept { return x0_; }
  const Domain& domain() const noexcept { return domain_; }
  const std::optional<expr::Expr>& f() const noexcept { return f_; }

  const expr::Expr& dg_dx() const noexcept { return g_x_; }
  const expr::Expr& dg_dt() const noexcept { return g_t_; }
  const expr::Expr& d2g_dt2() const noexcept { return g_tt_; }

  double eval_g(double x, double t) const { return g_plan_.evaluate(x, t); }
  double eval_dg_dx(double x, double t) const { return g_x_plan_.evaluate(x, t); }
  double eval_dg_dt(double x, double t) const { return g_t_plan_.evaluate(x, t); }
  double eval_d2g_dt2(double x, double t) const { return g_tt_plan_.evaluate(x, t); }

  const expr::EvalPlan& g_plan() const noexcept { return g_plan_; }
  const expr::EvalPlan& dg_dx_plan() const noexcept { return g_x_plan_; }

  /// True when dg/dt simplifies symbolically to 0.
  bool time_independent() const noexcept { return g_t_.is_constant(0.0); }

 private:
  expr::Expr g_;
  double m_;
  double x0_;
  Domain domain_;
  std::optional<expr::Expr> f_;
  expr::Expr g_x_;
  expr::Expr g_t_;
  expr::Expr g_tt_;
  expr::EvalPlan g_plan_;
  expr::EvalPlan g_x_plan_;
  expr::EvalPlan g_t_plan_;
  expr::EvalPlan g_tt_plan_;
};

enum class GaugeMode { analytic, quadrature };

/// Gauge function f with df/dx = -dg/dt.
///
/// Analytic mode evaluates the user's f and its symbolic partials. Quadrature
/// mode computes
///   f(x,t)     = -int_{x0}^{x} dg/dt(x',t) dx'
///   df/dt(x,t) = -int_{x0}^{x} d2g/dt2(x',t) dx'
/// by adaptive Gauss-Kronrod, and df/dx = -dg/dt directly. An integrand that
/// simplifies to 0 symbolically is skipped and yields exactly 0.
class GaugeField {
 public:
  GaugeMode mode() const noexcept { return mode_; }
  const QuadratureOptions& options() const noexcept { return options_; }

  double f(double x, double t) const;
  double df_dx(double x, double t) const;
  double df_dt(double x, double t) const;

  /// f vanishes identically (time-independent generator, quadrature mode).
  bool identically_zero() const noexcept { return f_zero_; }

 private:
  friend GaugeField build_gauge_f(const GeneratorSpec&, const QuadratureOptions&);

  GaugeMode mode_ = GaugeMode::quadrature;
  QuadratureOptions options_;
  double x0_ = 0.0;
  bool f_zero_ = true;
  bool ft_zero_ = true;
  // analytic: f, df/dx, df/dt; quadrature: dg/dt, d2g/dt2 (third unused)
  expr::EvalPlan a_;
  expr::EvalPlan b_;
  expr::EvalPlan c_;
};

/// Largest |df/dx + dg/dt| tolerated for a user-supplied f.
inline constexpr double gauge_residual_tolerance = 1e-8;

/// Throws ValidationError if an analytic f violates the gauge constraint on a
/// 32x32 lattice over the declared domain.
GaugeField build_gauge_f(const GeneratorSpec& spec, const QuadratureOptions& options = {});

struct PotentialSample {
  double vt = 0.0;  // identity (time) component
  double vs = 0.0;  // scalar, sigma3
  double vp = 0.0;  // pseudoscalar, sigma2

  friend bool operator==(const PotentialSample&, const PotentialSample&) = default;
};

using PotentialField = std::vector<PotentialSample>;

/// Vs = m(cos 2g - 1), Vp = -m sin 2g, Vt = df/dt + dg/dx.
PotentialSample potential_at(const GeneratorSpec& spec, const GaugeField& gauge, double x,
                             double t);

/// potential_at at every node, evaluated data-parallel; output is identical
/// to the per-node calls.
PotentialField sample_potential_grid(const GeneratorSpec& spec, const GaugeField& gauge,
                                     const Grid1D& grid, double t);

/// Entrywise max of m sigma3 exp(i sigma1 2g) - ((m + Vs) sigma3 + Vp sigma2)
/// at (x, t).
double potential_identity_residual(const GeneratorSpec& spec, const GaugeField& gauge, double x,
                                   double t);

/// Same identity for a bare generator value g and mass m.
double potential_identity_residual(double g, double m);

/// Largest component difference between the potentials at x_min and x_max.
/// The spectral solver treats fields as periodic; callers warn when this
/// exceeds periodicity_tolerance.
double periodicity_mismatch(const GeneratorSpec& spec, const GaugeField& gauge, const Grid1D& grid,
                            double t);

inline constexpr double periodicity_tolerance = 1e-6;

/// A generator together with its gauge; the potential source for solvers.
struct PotentialSource {
  GeneratorSpec spec;
  GaugeField gauge;
};

}  // namespace dirac
