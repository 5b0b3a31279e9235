#pragma once

#include <vector>

#include "dirac/grid.hpp"
#include "dirac/spinor.hpp"

namespace dirac {

/// Spinor samples on a periodic grid at time t.
struct StateField {
  StateField(Grid1D g, double time = 0.0) : grid(g), psi(g.size()), t(time) {}

  Grid1D grid;
  std::vector<Spinor> psi;
  double t;
};

/// dx sum_j psi_j^dagger psi_j
double norm(const StateField& state);

/// sqrt(dx sum_j |a_j - b_j|^2). Throws GridMismatchError on different grids.
double l2_error(const StateField& a, const StateField& b);

/// l2_error restricted to the nodes in `window`.
double l2_error(const StateField& a, const StateField& b, NodeWindow window);

}  // namespace dirac
