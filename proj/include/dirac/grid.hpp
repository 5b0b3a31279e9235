#pragma once

#include <cstddef>

namespace dirac {

/// Uniform periodic grid: nodes x_min + j dx, j in [0, n), dx = (x_max - x_min)/n.
/// n must be a power of two and at least 8.
class Grid1D {
 public:
  Grid1D(double x_min, double x_max, std::size_t n);

  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  double length() const noexcept { return x_max_ - x_min_; }
  double dx() const noexcept { return dx_; }
  std::size_t size() const noexcept { return n_; }
  double x(std::size_t j) const noexcept { return x_min_ + static_cast<double>(j) * dx_; }

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  double dx_;
};

/// Half-open index range [begin, end) of grid nodes.
struct NodeWindow {
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Central window excluding `edge_fraction` of the domain length at each end.
NodeWindow interior_window(const Grid1D& grid, double edge_fraction = 0.1);

}  // namespace dirac
