#include "dirac/spinor.hpp"

#include <stdexcept>
#include <string>

namespace dirac {

Mat2 pauli_matrix(int j) {
  switch (j) {
    case 1:
      return {{0.0, 1.0, 1.0, 0.0}};
    case 2:
      return {{0.0, -imag_unit, imag_unit, 0.0}};
    case 3:
      return {{1.0, 0.0, 0.0, -1.0}};
    default:
      throw std::invalid_argument("pauli_matrix: index must be 1, 2 or 3, got " +
                                  std::to_string(j));
  }
}

Mat2 pauli_combination(const PauliCoeffs& c) {
  return {{cplx(c.a + c.b3, 0.0), cplx(c.b1, -c.b2), cplx(c.b1, c.b2), cplx(c.a - c.b3, 0.0)}};
}

Mat2 conjugate_by_exp_sigma1(double g, int j) {
  if (j != 2 && j != 3) {
    throw std::invalid_argument("conjugate_by_exp_sigma1: j must be 2 or 3");
  }
  // exp(+i sigma1 g) = pauli_exp(a=0, b=(-g,0,0))
  const Mat2 left = pauli_exp({0.0, -g, 0.0, 0.0});
  const Mat2 right = pauli_exp({0.0, g, 0.0, 0.0});
  return left * pauli_matrix(j) * right;
}

}  // namespace dirac
