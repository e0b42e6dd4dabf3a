/// @file fespace.cpp

#include "oseen/fespace.hpp"

#include <stdexcept>
#include <string>

namespace oseen {

// ============================================================================
// Space construction
// ============================================================================

VelocitySpace build_velocity_space(const Mesh& mesh,
                                   const FacetTopology& topology, int degree) {
  if (degree < 2)
    throw std::invalid_argument(
        "build_velocity_space: degree must be >= 2 for the divergence-free "
        "pair, got " +
        std::to_string(degree));

  VelocitySpace space{.mesh = &mesh,
                      .topology = &topology,
                      .degree = degree,
                      .basis = ReferenceBasis(degree)};
  const int k = degree;
  const int per_edge = k - 1;
  const int per_cell = space.basis.num_interior_nodes();
  const int nv = mesh.num_vertices();
  const int nf = topology.num_facets();

  space.num_scalar_nodes = nv + nf * per_edge + mesh.num_cells() * per_cell;
  space.node_coords.resize(space.num_scalar_nodes);
  space.node_on_boundary.assign(space.num_scalar_nodes, 0);

  for (int v = 0; v < nv; ++v) space.node_coords[v] = mesh.vertices[v];
  for (int f = 0; f < nf; ++f) {
    const Facet& facet = topology.facets[f];
    const Vec2& a = mesh.vertices[facet.v[0]];
    const Vec2& b = mesh.vertices[facet.v[1]];
    for (int t = 0; t < per_edge; ++t) {
      space.node_coords[nv + f * per_edge + t] =
          a + ((t + 1.0) / k) * (b - a);
    }
    if (!facet.interior()) {
      space.node_on_boundary[facet.v[0]] = 1;
      space.node_on_boundary[facet.v[1]] = 1;
      for (int t = 0; t < per_edge; ++t)
        space.node_on_boundary[nv + f * per_edge + t] = 1;
    }
  }

  space.cell_nodes.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    std::vector<int>& local = space.cell_nodes[c];
    local.resize(space.basis.size());
    for (int v = 0; v < 3; ++v) local[v] = cell[v];
    for (int e = 0; e < 3; ++e) {
      const int va = cell[e], vb = cell[(e + 1) % 3];
      const int f = topology.cell_facets[c][e];
      for (int t = 0; t < per_edge; ++t) {
        // Facet nodes run from the lower to the higher global vertex index;
        // walk them backwards when the cell traverses the edge the other way.
        const int slot = (va < vb) ? t : per_edge - 1 - t;
        local[space.basis.edge_node(e, t)] = nv + f * per_edge + slot;
      }
    }
    if (per_cell > 0) {
      const AffineMap map = AffineMap::from_cell(mesh, c);
      for (int s = 0; s < per_cell; ++s) {
        const int node = nv + nf * per_edge + c * per_cell + s;
        local[space.basis.interior_node(s)] = node;
        space.node_coords[node] =
            map.to_physical(space.basis.nodes()[space.basis.interior_node(s)]);
      }
    }
  }

  for (char flag : space.node_on_boundary)
    space.num_boundary_nodes += flag ? 1 : 0;
  return space;
}

PressureSpace build_pressure_space(const Mesh& mesh, int velocity_degree) {
  if (velocity_degree < 2)
    throw std::invalid_argument(
        "build_pressure_space: velocity degree must be >= 2");
  PressureSpace space{&mesh, velocity_degree - 1,
                      ReferenceBasis(velocity_degree - 1)};
  space.dofs_per_cell = space.basis.size();
  return space;
}

// ============================================================================
// Evaluation
// ============================================================================

VelocityDerivs evaluate_velocity(const VelocitySpace& space,
                                 const VectorXd& coeffs, int cell,
                                 const Vec2& ref_point, int max_order) {
  if (coeffs.size() != space.dim())
    throw std::invalid_argument("evaluate_velocity: coefficient size mismatch");
  if (cell < 0 || cell >= space.mesh->num_cells())
    throw std::out_of_range("evaluate_velocity: cell index out of range");
  Eigen::MatrixXd tables = space.basis.evaluate(ref_point, max_order);
  push_forward_derivatives(tables, AffineMap::from_cell(*space.mesh, cell),
                           max_order);

  VelocityDerivs out;
  out.max_order = max_order;
  const int entries = ReferenceBasis::entry_count(max_order);
  for (int l = 0; l < space.basis.size(); ++l) {
    const int node = space.cell_nodes[cell][l];
    for (int c = 0; c < 2; ++c) {
      const double coef = coeffs[space.dof(node, c)];
      if (coef == 0.0) continue;
      for (int e = 0; e < entries; ++e) out.comp[c][e] += coef * tables(l, e);
    }
  }
  return out;
}

double evaluate_pressure(const PressureSpace& space, const VectorXd& coeffs,
                         int cell, const Vec2& ref_point) {
  if (coeffs.size() != space.dim())
    throw std::invalid_argument("evaluate_pressure: coefficient size mismatch");
  if (cell < 0 || cell >= space.mesh->num_cells())
    throw std::out_of_range("evaluate_pressure: cell index out of range");
  const Eigen::MatrixXd tables = space.basis.evaluate(ref_point, 0);
  double value = 0.0;
  for (int j = 0; j < space.dofs_per_cell; ++j)
    value += coeffs[space.dof(cell, j)] * tables(j, 0);
  return value;
}

// ============================================================================
// Interpolation
// ============================================================================

VectorXd interpolate_velocity(const VelocitySpace& space,
                              const std::function<Vec2(const Vec2&)>& f) {
  VectorXd coeffs(space.dim());
  for (int n = 0; n < space.num_scalar_nodes; ++n) {
    const Vec2 value = f(space.node_coords[n]);
    coeffs[space.dof(n, 0)] = value.x();
    coeffs[space.dof(n, 1)] = value.y();
  }
  return coeffs;
}

VectorXd interpolate_pressure(const PressureSpace& space,
                              const std::function<double(const Vec2&)>& f) {
  VectorXd coeffs(space.dim());
  for (int c = 0; c < space.mesh->num_cells(); ++c) {
    const AffineMap map = AffineMap::from_cell(*space.mesh, c);
    for (int j = 0; j < space.dofs_per_cell; ++j)
      coeffs[space.dof(c, j)] = f(map.to_physical(space.basis.nodes()[j]));
  }
  return coeffs;
}

// ============================================================================
// Point location
// ============================================================================

int locate_cell(const Mesh& mesh, const Vec2& x, double tol) {
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Vec2 ref = AffineMap::from_cell(mesh, c).to_reference(x);
    if (ref.x() >= -tol && ref.y() >= -tol && ref.x() + ref.y() <= 1.0 + tol)
      return c;
  }
  return -1;
}

} // namespace oseen
