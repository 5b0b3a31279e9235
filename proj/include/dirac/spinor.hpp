#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace dirac {

using cplx = std::complex<double>;

inline constexpr cplx imag_unit{0.0, 1.0};

/// Two-component Dirac spinor (upper, lower).
struct Spinor {
  cplx up{};
  cplx dn{};

  friend Spinor operator+(const Spinor& a, const Spinor& b) { return {a.up + b.up, a.dn + b.dn}; }
  friend Spinor operator-(const Spinor& a, const Spinor& b) { return {a.up - b.up, a.dn - b.dn}; }
  friend Spinor operator*(cplx s, const Spinor& a) { return {s * a.up, s * a.dn}; }
  Spinor& operator+=(const Spinor& b) {
    up += b.up;
    dn += b.dn;
    return *this;
  }
  friend bool operator==(const Spinor&, const Spinor&) = default;
};

/// psi^dagger psi
inline double norm2(const Spinor& s) { return std::norm(s.up) + std::norm(s.dn); }
/// psi^dagger phi
inline cplx inner(const Spinor& a, const Spinor& b) {
  return std::conj(a.up) * b.up + std::conj(a.dn) * b.dn;
}

/// Dense 2x2 complex matrix, row-major.
struct Mat2 {
  std::array<cplx, 4> e{};

  cplx& operator()(int r, int c) { return e[static_cast<std::size_t>(2 * r + c)]; }
  const cplx& operator()(int r, int c) const { return e[static_cast<std::size_t>(2 * r + c)]; }

  static Mat2 identity() { return {{1.0, 0.0, 0.0, 1.0}}; }
  static Mat2 zero() { return {}; }

  friend Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {{a.e[0] + b.e[0], a.e[1] + b.e[1], a.e[2] + b.e[2], a.e[3] + b.e[3]}};
  }
  friend Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {{a.e[0] - b.e[0], a.e[1] - b.e[1], a.e[2] - b.e[2], a.e[3] - b.e[3]}};
  }
  friend Mat2 operator*(cplx s, const Mat2& a) {
    return {{s * a.e[0], s * a.e[1], s * a.e[2], s * a.e[3]}};
  }
  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {{a.e[0] * b.e[0] + a.e[1] * b.e[2], a.e[0] * b.e[1] + a.e[1] * b.e[3],
             a.e[2] * b.e[0] + a.e[3] * b.e[2], a.e[2] * b.e[1] + a.e[3] * b.e[3]}};
  }
  friend Spinor operator*(const Mat2& m, const Spinor& s) {
    return {m.e[0] * s.up + m.e[1] * s.dn, m.e[2] * s.up + m.e[3] * s.dn};
  }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

inline Mat2 adjoint(const Mat2& m) {
  return {{std::conj(m.e[0]), std::conj(m.e[2]), std::conj(m.e[1]), std::conj(m.e[3])}};
}

inline Mat2 commutator(const Mat2& a, const Mat2& b) { return a * b - b * a; }
inline Mat2 anticommutator(const Mat2& a, const Mat2& b) { return a * b + b * a; }

/// Largest entry modulus.
inline double max_abs(const Mat2& m) {
  double r = 0.0;
  for (const auto& z : m.e) {
    r = std::max(r, std::abs(z));
  }
  return r;
}

/// Coefficients of a I + b1 sigma1 + b2 sigma2 + b3 sigma3.
struct PauliCoeffs {
  double a = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;
};

/// Standard Pauli matrix sigma_j, j in {1, 2, 3}. Throws std::invalid_argument
/// otherwise.
Mat2 pauli_matrix(int j);

/// a I + b . sigma
Mat2 pauli_combination(const PauliCoeffs& c);

/// exp(-i (a I + b . sigma)) in closed form:
///   e^{-ia} (cos|b| I - i sin|b| (b . sigma)/|b|).
/// For |b| < 1e-8 the removable singularity is replaced by cos|b| = 1 and
/// sin|b|/|b| = 1.
inline Mat2 pauli_exp(const PauliCoeffs& c) {
  const double nb = std::sqrt(c.b1 * c.b1 + c.b2 * c.b2 + c.b3 * c.b3);
  double cs = 1.0;
  double sinc = 1.0;
  if (nb >= 1e-8) {
    cs = std::cos(nb);
    sinc = std::sin(nb) / nb;
  }
  const double s1 = sinc * c.b1;
  const double s2 = sinc * c.b2;
  const double s3 = sinc * c.b3;
  const cplx phase = std::polar(1.0, -c.a);
  return {{phase * cplx(cs, -s3), phase * cplx(-s2, -s1), phase * cplx(s2, -s1),
           phase * cplx(cs, s3)}};
}

inline Spinor apply(const Mat2& m, const Spinor& s) { return m * s; }

/// exp(i sigma1 g) sigma_j exp(-i sigma1 g) for j in {2, 3}, by direct
/// triple product.
Mat2 conjugate_by_exp_sigma1(double g, int j);

}  // namespace dirac
