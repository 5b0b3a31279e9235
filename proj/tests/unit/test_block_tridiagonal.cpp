#include <Eigen/Dense>
#include <random>
#include <vector>

#include "dirac/block_tridiagonal.hpp"
#include "dirac/error.hpp"
#include "doctest.h"

using namespace dirac;

namespace {

struct System {
  std::vector<Mat2> lower, diag, upper;
  std::vector<Spinor> rhs;
};

System random_system(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto block = [&] {
    Mat2 m;
    for (auto& z : m.e) {
      z = cplx(u(rng), u(rng));
    }
    return m;
  };
  System s;
  for (std::size_t j = 0; j < n; ++j) {
    s.lower.push_back(block());
    s.upper.push_back(block());
    s.diag.push_back(block() + cplx(6.0, 1.0) * Mat2::identity());
    s.rhs.push_back({cplx(u(rng), u(rng)), cplx(u(rng), u(rng))});
  }
  return s;
}

/// Dense assembly and LU solve of the same periodic system.
std::vector<Spinor> dense_solve(const System& s) {
  const auto n = static_cast<Eigen::Index>(s.diag.size());
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  Eigen::VectorXcd b(2 * n);
  auto put = [&](Eigen::Index row, Eigen::Index col, const Mat2& m) {
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        a(2 * row + r, 2 * col + c) += m(r, c);
      }
    }
  };
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto k = static_cast<std::size_t>(j);
    put(j, (j + n - 1) % n, s.lower[k]);
    put(j, j, s.diag[k]);
    put(j, (j + 1) % n, s.upper[k]);
    b(2 * j) = s.rhs[k].up;
    b(2 * j + 1) = s.rhs[k].dn;
  }
  const Eigen::VectorXcd x = a.partialPivLu().solve(b);
  std::vector<Spinor> out(s.diag.size());
  for (Eigen::Index j = 0; j < n; ++j) {
    out[static_cast<std::size_t>(j)] = {x(2 * j), x(2 * j + 1)};
  }
  return out;
}

}  // namespace

TEST_CASE("periodic block solve agrees with a dense LU solve") {
  for (std::size_t n : {3u, 4u, 7u, 16u, 65u}) {
    const System s = random_system(n, n);
    std::vector<Spinor> out(n);
    const double res = solve_periodic_block_tridiagonal(s.lower, s.diag, s.upper, s.rhs, out);
    CHECK(res <= 1e-14);
    const std::vector<Spinor> want = dense_solve(s);
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(std::abs(out[j].up - want[j].up) <= 1e-13);
      CHECK(std::abs(out[j].dn - want[j].dn) <= 1e-13);
    }
  }
}

TEST_CASE("invalid systems raise LinearSolveError") {
  System s = random_system(8, 1);
  std::vector<Spinor> out(8);
  std::vector<Spinor> short_out(7);
  CHECK_THROWS_AS(solve_periodic_block_tridiagonal(s.lower, s.diag, s.upper, s.rhs, short_out),
                  LinearSolveError);
  for (auto& m : s.diag) {
    m = Mat2::zero();
  }
  for (auto& m : s.lower) {
    m = Mat2::zero();
  }
  for (auto& m : s.upper) {
    m = Mat2::zero();
  }
  CHECK_THROWS_AS(solve_periodic_block_tridiagonal(s.lower, s.diag, s.upper, s.rhs, out),
                  LinearSolveError);
}
