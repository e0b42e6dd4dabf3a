/// @file problem.hpp
/// @brief Analytic data for the Oseen model problem
///        -mu Lap(u) + (beta . grad) u + sigma u + grad p = f,  div u = 0
///        on the unit square with Dirichlet boundary conditions.

#pragma once

#include <array>
#include <functional>
#include <string>

#include "oseen/common.hpp"

namespace oseen {

/// Vector field with optional analytic derivatives. jacobian()(i,j) is
/// d f_i / d x_j. hessians() packs the second derivatives of both components
/// as (f1_xx, f1_xy, f1_yy, f2_xx, f2_xy, f2_yy). Callbacks that a use case
/// never needs may be left empty.
struct AnalyticVectorField {
  std::function<Vec2(const Vec2&)> value;
  std::function<Mat2(const Vec2&)> jacobian;
  std::function<std::array<double, 6>(const Vec2&)> hessians;
};

struct AnalyticScalarField {
  std::function<double(const Vec2&)> value;
};

/// One fully specified test problem. The Dirichlet datum is the trace of
/// exact_u. exact_p has zero mean over the unit square and beta is
/// divergence free for every shipped case.
struct ProblemCase {
  std::string name;
  double mu = 1.0;
  double sigma = 0.0;
  AnalyticVectorField exact_u;
  AnalyticScalarField exact_p;
  AnalyticVectorField beta;
  std::function<Vec2(const Vec2&)> forcing;
};

/// Trigonometric lattice of counter-rotating vortices,
///   u = (sin(2 pi x) sin(2 pi y), cos(2 pi x) cos(2 pi y)),
///   p = (cos(4 pi x) - cos(4 pi y)) / 4,  beta = u + (0, 1).
ProblemCase case_lattice_flow(double mu, double sigma);

/// Shear flow with an outflow boundary layer of width O(mu) at x = 1,
///   u = (0, x - (e^((x-1)/mu) - e^(-1/mu)) / (1 - e^(-1/mu))),
///   p = 1/2 - y,  beta = (1, 0),  f = 0,  sigma = 0.
ProblemCase case_boundary_layer(double mu);

/// Polynomial solution reproduced exactly by the discretization,
///   u = (0, -3 x^2),  p = x + y - 1,  beta = (1, 1).
ProblemCase case_polynomial_patch(double mu, double sigma);

/// Case lookup by CLI name: "lattice", "layer" or "patch".
ProblemCase make_case(const std::string& name, double mu, double sigma);

} // namespace oseen
