#pragma once

#include <span>

#include "dirac/spinor.hpp"

namespace dirac {

/// Solves the periodic block-tridiagonal system with 2x2 blocks
///
///   lower[j] u[j-1] + diag[j] u[j] + upper[j] u[j+1] = rhs[j],  j mod n
///
/// by block elimination on the first n-1 rows with the last unknown bordered
/// out, O(n). No pivoting: intended for matrices whose Hermitian part is
/// positive definite (Crank-Nicolson operators I + i tau H). Throws
/// LinearSolveError on a singular pivot block or when the relative residual
/// max|A u - rhs| / max|rhs| exceeds `residual_tolerance`.
/// Returns the relative residual.
double solve_periodic_block_tridiagonal(std::span<const Mat2> lower, std::span<const Mat2> diag,
                                        std::span<const Mat2> upper, std::span<const Spinor> rhs,
                                        std::span<Spinor> out, double residual_tolerance = 1e-10);

}  // namespace dirac
