/// @file solver.hpp
/// @brief Direct solution of the assembled saddle system.
///
/// The linear system couples velocity, pressure and one scalar multiplier
/// removing the constant-pressure nullspace:
///   [ A+S  B^T  0 ] [u]   [f]
///   [ B    0    m ] [p] = [g]
///   [ 0    m^T  0 ] [l]   [0]
/// A dense border would ruin the sparse factorization, so m constrains the
/// pressure mean over a single cell; the returned pressure is then shifted
/// to exact zero global mean (a pure constant adjustment). Dirichlet
/// velocity DOFs are eliminated by moving their columns to the right hand
/// side and replacing their rows by the identity.

#pragma once

#include "oseen/assembly.hpp"

namespace oseen {

struct SolveResult {
  VectorXd velocity;       // coefficients, boundary values included
  VectorXd pressure;
  double multiplier = 0.0; // mean constraint multiplier
  double residual = 0.0;   // relative residual of the eliminated system
  double pressure_mean = 0.0;
  int matrix_size = 0;
  long long matrix_nonzeros = 0;
  double seconds_factorize = 0.0;
  double seconds_total = 0.0;
};

/// Sparse LU solve. Throws on a singular matrix or when the relative
/// residual stays above 1e-9 after iterative refinement.
SolveResult solve(const AssembledSystem& system);

struct DivergenceReport {
  double div_sup = 0.0;  // max |div u_h| over all cells and rule points
  double grad_sup = 0.0; // max |grad u_h| entry over the same points
};

DivergenceReport measure_divergence(const VelocitySpace& space,
                                    const VectorXd& coeffs,
                                    int triangle_degree);

} // namespace oseen
