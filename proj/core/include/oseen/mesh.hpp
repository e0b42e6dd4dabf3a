/// @file mesh.hpp
/// @brief Conforming triangulations of the unit square with red and
///        barycentric refinement, plus facet (edge) topology.

#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "oseen/common.hpp"

namespace oseen {

/// Conforming triangle mesh. Cells store vertex indices in counterclockwise
/// order. After barycentric refinement, macro_of_cell maps each child cell to
/// the macro cell it was split from; it is empty otherwise.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> cells;
  std::vector<int> macro_of_cell;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }

  double cell_area(int c) const;
  double cell_diameter(int c) const;
  double max_diameter() const;
};

/// One mesh edge. Vertex indices are stored sorted (v[0] < v[1]). cell[0] is
/// the lower-indexed adjacent cell and the stored unit normal points out of
/// it; boundary facets have cell[1] == -1.
struct Facet {
  std::array<int, 2> v;
  std::array<int, 2> cell{-1, -1};
  Vec2 normal;
  double length = 0.0;

  bool interior() const { return cell[1] >= 0; }
};

/// Edge-to-cell connectivity for a mesh. Facets are sorted lexicographically
/// by their (sorted) vertex index pairs, so the numbering is reproducible.
struct FacetTopology {
  std::vector<Facet> facets;
  int num_interior = 0;
  /// Per cell, the facet index of local edges (v0,v1), (v1,v2), (v2,v0).
  std::vector<std::array<int, 3>> cell_facets;

  int num_facets() const { return static_cast<int>(facets.size()); }
  int num_boundary() const { return num_facets() - num_interior; }
};

/// Two cells splitting the unit square along the diagonal from (0,0) to (1,1).
Mesh unit_square_base();

/// Uniform refinement: each triangle is split into four congruent children
/// via its edge midpoints. Shared midpoints are created once.
Mesh red_refine(const Mesh& mesh);

/// Clough-Tocher split: each triangle is divided into three children by
/// connecting its barycenter to the vertices.
Mesh barycentric_refine(const Mesh& mesh);

/// Mesh hierarchy used throughout: level L applies (L+1) red refinements to
/// the base mesh followed by one barycentric refinement. Levels start at 1.
Mesh mesh_level(int level);

/// Builds the facet list. Throws if an edge is shared by more than two cells
/// or if an adjacent cell is not counterclockwise.
FacetTopology build_facets(const Mesh& mesh);

/// Plain text export: "#vertices N", one "x y" line per vertex,
/// "#cells M", one "v0 v1 v2" line per cell.
void write_mesh_text(const Mesh& mesh, std::ostream& out);

} // namespace oseen
