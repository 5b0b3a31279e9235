#include "dirac/block_tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "dirac/error.hpp"

namespace dirac {

namespace {

Mat2 inverse(const Mat2& m) {
  const cplx det = m.e[0] * m.e[3] - m.e[1] * m.e[2];
  if (det == cplx(0.0) || !std::isfinite(std::abs(det))) {
    throw LinearSolveError("block tridiagonal solve: singular pivot block");
  }
  const cplx inv = 1.0 / det;
  return {{inv * m.e[3], -inv * m.e[1], -inv * m.e[2], inv * m.e[0]}};
}

double max_abs(const Spinor& s) { return std::max(std::abs(s.up), std::abs(s.dn)); }

}  // namespace

double solve_periodic_block_tridiagonal(std::span<const Mat2> lower, std::span<const Mat2> diag,
                                        std::span<const Mat2> upper, std::span<const Spinor> rhs,
                                        std::span<Spinor> out, double residual_tolerance) {
  const std::size_t n = diag.size();
  if (n < 3 || lower.size() != n || upper.size() != n || rhs.size() != n || out.size() != n) {
    throw LinearSolveError("block tridiagonal solve: inconsistent sizes (need n >= 3)");
  }
  const std::size_t rows = n - 1;  // rows eliminated before the bordered unknown

  // Forward sweep on rows 0..rows-1. Each row carries a vector right-hand side
  // (y) and a two-column one (z) for the coupling to u[n-1].
  std::vector<Mat2> g(rows);
  std::vector<Spinor> y(rows);
  std::vector<Mat2> z(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    Mat2 coupling = Mat2::zero();
    if (i == 0) {
      coupling = coupling + lower[0];
    }
    if (i == rows - 1) {
      coupling = coupling + upper[rows - 1];
    }
    Mat2 pivot = diag[i];
    Spinor ry = rhs[i];
    Mat2 rz = cplx(-1.0) * coupling;
    if (i > 0) {
      pivot = pivot - lower[i] * g[i - 1];
      ry = ry - lower[i] * y[i - 1];
      rz = rz - lower[i] * z[i - 1];
    }
    const Mat2 inv = inverse(pivot);
    y[i] = inv * ry;
    z[i] = inv * rz;
    if (i + 1 < rows) {
      g[i] = inv * upper[i];
    }
  }
  for (std::size_t i = rows - 1; i-- > 0;) {
    y[i] = y[i] - g[i] * y[i + 1];
    z[i] = z[i] - g[i] * z[i + 1];
  }

  const std::size_t last = n - 1;
  const Mat2 schur = diag[last] + lower[last] * z[rows - 1] + upper[last] * z[0];
  const Spinor rl = rhs[last] - lower[last] * y[rows - 1] - upper[last] * y[0];
  const Spinor ul = inverse(schur) * rl;
  for (std::size_t i = 0; i < rows; ++i) {
    out[i] = y[i] + z[i] * ul;
  }
  out[last] = ul;

  double res = 0.0;
  double scale = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const Spinor au = lower[j] * out[(j + n - 1) % n] + diag[j] * out[j] + upper[j] * out[(j + 1) % n];
    res = std::max(res, max_abs(au - rhs[j]));
    scale = std::max(scale, max_abs(rhs[j]));
  }
  const double rel = scale > 0.0 ? res / scale : res;
  if (!(rel <= residual_tolerance)) {
    std::ostringstream os;
    os << "block tridiagonal solve: relative residual " << rel << " exceeds "
       << residual_tolerance;
    throw LinearSolveError(os.str());
  }
  return rel;
}

}  // namespace dirac
