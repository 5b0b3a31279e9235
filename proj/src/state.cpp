#include "dirac/state.hpp"

#include <cmath>

#include "dirac/error.hpp"

namespace dirac {

double norm(const StateField& state) {
  double sum = 0.0;
  for (const auto& s : state.psi) {
    sum += norm2(s);
  }
  return state.grid.dx() * sum;
}

double l2_error(const StateField& a, const StateField& b, NodeWindow window) {
  if (!(a.grid == b.grid) || a.psi.size() != b.psi.size()) {
    throw GridMismatchError("l2_error: fields live on different grids");
  }
  double sum = 0.0;
  for (std::size_t j = window.begin; j < window.end && j < a.psi.size(); ++j) {
    sum += norm2(a.psi[j] - b.psi[j]);
  }
  return std::sqrt(a.grid.dx() * sum);
}

double l2_error(const StateField& a, const StateField& b) {
  return l2_error(a, b, NodeWindow{0, a.psi.size()});
}

}  // namespace dirac
