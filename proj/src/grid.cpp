#include "dirac/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "dirac/error.hpp"

namespace dirac {

Grid1D::Grid1D(double x_min, double x_max, std::size_t n)
    : x_min_(x_min), x_max_(x_max), n_(n), dx_(0.0) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
    throw ConfigError("grid: require finite x_min < x_max");
  }
  if (n < 8 || !std::has_single_bit(n)) {
    throw ConfigError("grid: node count must be a power of two >= 8, got " + std::to_string(n));
  }
  dx_ = (x_max - x_min) / static_cast<double>(n);
}

NodeWindow interior_window(const Grid1D& grid, double edge_fraction) {
  const double lo = grid.x_min() + edge_fraction * grid.length();
  const double hi = grid.x_max() - edge_fraction * grid.length();
  NodeWindow w{grid.size(), 0};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    if (x >= lo && x < hi) {
      w.begin = std::min(w.begin, j);
      w.end = j + 1;
    }
  }
  if (w.end <= w.begin) {
    w = {0, 0};
  }
  return w;
}

}  // namespace dirac
