/// @file quadrature.hpp
/// @brief Quadrature on the reference triangle and the unit edge.

#pragma once

#include <vector>

#include "oseen/common.hpp"

namespace oseen {

/// Positive-weight quadrature rule. For dim == 2 the points live on the
/// reference triangle {(0,0),(1,0),(0,1)} and weights sum to 1/2. For
/// dim == 1 the points are parameters on [0,1] stored in x() (y() is zero)
/// and weights sum to 1. Every rule is checked against exact monomial
/// integrals when it is built.
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int exactness = 0;
  int dim = 2;

  int size() const { return static_cast<int>(points.size()); }
};

/// Compact symmetric rules for degree <= 6; a conical product construction
/// covers higher degrees (up to 30). All weights are positive and every rule
/// is checked against exact monomial moments on construction. Throws on
/// degrees outside [0, 30].
QuadratureRule triangle_quadrature(int degree);

/// Gauss-Legendre on [0,1]. Throws on degrees outside [0, 60].
QuadratureRule edge_quadrature(int degree);

} // namespace oseen
