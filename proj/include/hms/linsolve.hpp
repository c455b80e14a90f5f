#pragma once

#include "hms/sparse.hpp"

namespace hms {

enum class SolveStatus { Converged, MaxIterExceeded };

struct LinsolveResult {
  std::vector<double> x;
  int iterations = 0;
  SolveStatus status = SolveStatus::Converged;
  double residual = 0.0; // true residual |A x - b|_2 of the returned iterate
};

// Stabilized bi-conjugate gradient with a 2x2 block-Jacobi preconditioner
// built from the interleaved node blocks. Fully sequential and deterministic:
// the same system always yields the same iterate sequence. maxiter = 0 picks
// the default of 10 n. Convergence is |r|_2 <= tol * |b|_2; a zero right-hand
// side short-circuits to x = 0. Raises Breakdown when an orthogonality scalar
// collapses below 1e-30.
LinsolveResult solve(const SparseSystem& sys, double tol = 1e-10, int maxiter = 0);

} // namespace hms
