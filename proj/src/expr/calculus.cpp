#include <cmath>

#include "dirac/expr.hpp"
#include "scalar_ops.hpp"

namespace dirac::expr {

namespace {

Expr derive(const Expr& e, Var v) {
  const Expr zero = Expr::constant(0.0);
  switch (e.kind()) {
    case Kind::constant:
    case Kind::pi:
      return zero;
    case Kind::var_x:
      return Expr::constant(v == Var::x ? 1.0 : 0.0);
    case Kind::var_t:
      return Expr::constant(v == Var::t ? 1.0 : 0.0);
    case Kind::add:
      return Expr::add(derive(e.child(0), v), derive(e.child(1), v));
    case Kind::sub:
      return Expr::sub(derive(e.child(0), v), derive(e.child(1), v));
    case Kind::neg:
      return Expr::neg(derive(e.child(0), v));
    case Kind::mul: {
      const Expr& a = e.child(0);
      const Expr& b = e.child(1);
      return Expr::add(Expr::mul(derive(a, v), b), Expr::mul(a, derive(b, v)));
    }
    case Kind::div: {
      const Expr& a = e.child(0);
      const Expr& b = e.child(1);
      return Expr::div(Expr::sub(Expr::mul(derive(a, v), b), Expr::mul(a, derive(b, v))),
                       Expr::pow(b, 2));
    }
    case Kind::pow: {
      const int n = e.exponent();
      if (n == 0) {
        return zero;
      }
      const Expr& u = e.child(0);
      return Expr::mul(Expr::mul(Expr::constant(static_cast<double>(n)), Expr::pow(u, n - 1)),
                       derive(u, v));
    }
    case Kind::sin: {
      const Expr& u = e.child(0);
      return Expr::mul(Expr::cos(u), derive(u, v));
    }
    case Kind::cos: {
      const Expr& u = e.child(0);
      return Expr::mul(Expr::neg(Expr::sin(u)), derive(u, v));
    }
    case Kind::exp:
      return Expr::mul(e, derive(e.child(0), v));
    case Kind::tanh: {
      const Expr& u = e.child(0);
      return Expr::mul(Expr::sub(Expr::constant(1.0), Expr::pow(e, 2)), derive(u, v));
    }
  }
  return zero;
}

bool literal(const Expr& e) { return e.kind() == Kind::constant || e.kind() == Kind::pi; }

double literal_value(const Expr& e) {
  return e.kind() == Kind::pi ? detail::pi_value : e.value();
}

Expr fold_or(const Expr& node, double folded) {
  return std::isfinite(folded) ? Expr::constant(folded) : node;
}

}  // namespace

Expr differentiate(const Expr& e, Var v) { return simplify(derive(e, v)); }

Expr simplify(const Expr& e) {
  switch (arity(e.kind())) {
    case 0:
      return e;
    case 1: {
      const Expr a = simplify(e.child(0));
      const Expr node = a == e.child(0) ? e : Expr::make(e.kind(), std::span(&a, 1), e.exponent());
      if (e.kind() == Kind::pow) {
        if (e.exponent() == 1) {
          return a;
        }
        if (e.exponent() == 0) {
          return Expr::constant(1.0);
        }
        if (literal(a)) {
          return fold_or(node, detail::ipow(literal_value(a), e.exponent()));
        }
        return node;
      }
      if (e.kind() == Kind::neg) {
        if (a.kind() == Kind::neg) {
          return a.child(0);
        }
        if (a.kind() == Kind::constant) {
          return Expr::constant(-a.value());
        }
      }
      if (literal(a)) {
        return fold_or(node, detail::apply_unary(e.kind(), literal_value(a)));
      }
      return node;
    }
    default: {
      const Expr a = simplify(e.child(0));
      const Expr b = simplify(e.child(1));
      const std::array<Expr, 2> kids{a, b};
      const Expr node = (a == e.child(0) && b == e.child(1)) ? e : Expr::make(e.kind(), kids);
      if (literal(a) && literal(b)) {
        return fold_or(node, detail::apply_binary(e.kind(), literal_value(a), literal_value(b)));
      }
      switch (e.kind()) {
        case Kind::add:
          if (a.is_constant(0.0)) {
            return b;
          }
          if (b.is_constant(0.0)) {
            return a;
          }
          break;
        case Kind::sub:
          if (b.is_constant(0.0)) {
            return a;
          }
          if (a.is_constant(0.0)) {
            return simplify(Expr::neg(b));
          }
          break;
        case Kind::mul:
          if (a.is_constant(0.0) || b.is_constant(0.0)) {
            return Expr::constant(0.0);
          }
          if (a.is_constant(1.0)) {
            return b;
          }
          if (b.is_constant(1.0)) {
            return a;
          }
          if (a.is_constant(-1.0)) {
            return simplify(Expr::neg(b));
          }
          if (b.is_constant(-1.0)) {
            return simplify(Expr::neg(a));
          }
          break;
        case Kind::div:
          if (b.is_constant(1.0)) {
            return a;
          }
          break;
        default:
          break;
      }
      return node;
    }
  }
}

}  // namespace dirac::expr
