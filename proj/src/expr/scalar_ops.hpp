#pragma once

// Shared arithmetic kernels for the tree walk and the compiled tape. Both
// evaluators must route every operation through these so results match
// bit for bit.

#include <cmath>
#include <numbers>

#include "dirac/expr.hpp"

namespace dirac::expr::detail {

inline constexpr double pi_value = std::numbers::pi;

inline double ipow(double base, int exponent) noexcept {
  if (exponent < 0) {
    return 1.0 / ipow(base, -exponent);
  }
  double result = 1.0;
  unsigned n = static_cast<unsigned>(exponent);
  double b = base;
  while (n != 0) {
    if (n & 1u) {
      result *= b;
    }
    n >>= 1u;
    if (n != 0) {
      b *= b;
    }
  }
  return result;
}

inline double apply_unary(Kind kind, double a) noexcept {
  switch (kind) {
    case Kind::neg:
      return -a;
    case Kind::sin:
      return std::sin(a);
    case Kind::cos:
      return std::cos(a);
    case Kind::exp:
      return std::exp(a);
    case Kind::tanh:
      return std::tanh(a);
    default:
      return std::nan("");
  }
}

inline double apply_binary(Kind kind, double a, double b) noexcept {
  switch (kind) {
    case Kind::add:
      return a + b;
    case Kind::sub:
      return a - b;
    case Kind::mul:
      return a * b;
    case Kind::div:
      return a / b;
    default:
      return std::nan("");
  }
}

}  // namespace dirac::expr::detail
