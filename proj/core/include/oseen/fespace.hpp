/// @file fespace.hpp
/// @brief Velocity and pressure spaces of the Scott-Vogelius pair: continuous
///        vector P_k velocity and discontinuous P_{k-1} pressure.

#pragma once

#include <functional>
#include <vector>

#include "oseen/basis.hpp"
#include "oseen/mesh.hpp"
#include "oseen/problem.hpp"
#include "oseen/quadrature.hpp"

namespace oseen {

/// Continuous vector-valued P_k space. Scalar nodes are numbered vertices
/// first, then facet (edge) nodes in facet order, then cell interior nodes.
/// Each scalar node n carries the two velocity degrees of freedom 2n and
/// 2n+1 for the x and y component.
struct VelocitySpace {
  const Mesh* mesh = nullptr;
  const FacetTopology* topology = nullptr;
  int degree = 0;
  ReferenceBasis basis;
  int num_scalar_nodes = 0;
  int num_boundary_nodes = 0;
  std::vector<std::vector<int>> cell_nodes{};
  std::vector<Vec2> node_coords{};
  std::vector<char> node_on_boundary{};

  int dim() const { return 2 * num_scalar_nodes; }
  /// Count with the Dirichlet boundary removed.
  int dim_interior() const {
    return 2 * (num_scalar_nodes - num_boundary_nodes);
  }
  int dof(int node, int component) const { return 2 * node + component; }
};

/// Discontinuous P_{k-1} space with nodal (Lagrange) cell bases.
struct PressureSpace {
  const Mesh* mesh = nullptr;
  int degree = 0;
  ReferenceBasis basis;
  int dofs_per_cell = 0;

  int dim() const { return mesh->num_cells() * dofs_per_cell; }
  int dof(int cell, int j) const { return cell * dofs_per_cell + j; }
};

/// Throws for degree < 2; the pair is divergence-compatible only from
/// degree 2 upward on barycentrically refined meshes.
VelocitySpace build_velocity_space(const Mesh& mesh,
                                   const FacetTopology& topology, int degree);

PressureSpace build_pressure_space(const Mesh& mesh, int velocity_degree);

/// Derivative tables of a velocity field at one reference point of a cell.
/// comp[c] uses the layout of basis.hpp (value, dx, dy, dxx, ...).
struct VelocityDerivs {
  int max_order = 0;
  std::array<std::array<double, 10>, 2> comp{};

  Vec2 value() const { return Vec2(comp[0][0], comp[1][0]); }
  Mat2 jacobian() const {
    Mat2 j;
    j << comp[0][1], comp[0][2], comp[1][1], comp[1][2];
    return j;
  }
  double divergence() const { return comp[0][1] + comp[1][2]; }
  /// Entry a of derivative order m of component c.
  double d(int c, int m, int a) const {
    return comp[c][ReferenceBasis::entry_offset(m) + a];
  }
};

VelocityDerivs evaluate_velocity(const VelocitySpace& space,
                                 const VectorXd& coeffs, int cell,
                                 const Vec2& ref_point, int max_order);

double evaluate_pressure(const PressureSpace& space, const VectorXd& coeffs,
                         int cell, const Vec2& ref_point);

/// Nodal interpolation onto the velocity space.
VectorXd interpolate_velocity(const VelocitySpace& space,
                              const std::function<Vec2(const Vec2&)>& f);

/// Cellwise nodal interpolation onto the pressure space.
VectorXd interpolate_pressure(const PressureSpace& space,
                              const std::function<double(const Vec2&)>& f);

/// First cell containing the point (barycentric test with tolerance),
/// scanning cells in index order so ties on shared edges are reproducible.
/// Returns -1 if the point lies outside the mesh.
int locate_cell(const Mesh& mesh, const Vec2& x, double tol = 1e-12);

} // namespace oseen
