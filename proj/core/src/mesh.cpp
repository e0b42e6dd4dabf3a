/// @file mesh.cpp

#include "oseen/mesh.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

namespace oseen {

// ============================================================================
// Cell geometry
// ============================================================================

namespace {

double signed_area2(const Mesh& mesh, int c) {
  const Vec2& a = mesh.vertices[mesh.cells[c][0]];
  const Vec2& b = mesh.vertices[mesh.cells[c][1]];
  const Vec2& d = mesh.vertices[mesh.cells[c][2]];
  return (b.x() - a.x()) * (d.y() - a.y()) - (b.y() - a.y()) * (d.x() - a.x());
}

} // namespace

double Mesh::cell_area(int c) const { return 0.5 * signed_area2(*this, c); }

double Mesh::cell_diameter(int c) const {
  double d = 0.0;
  for (int e = 0; e < 3; ++e) {
    const Vec2& p = vertices[cells[c][e]];
    const Vec2& q = vertices[cells[c][(e + 1) % 3]];
    d = std::max(d, (q - p).norm());
  }
  return d;
}

double Mesh::max_diameter() const {
  double h = 0.0;
  for (int c = 0; c < num_cells(); ++c) h = std::max(h, cell_diameter(c));
  return h;
}

// ============================================================================
// Construction and refinement
// ============================================================================

Mesh unit_square_base() {
  Mesh mesh;
  mesh.vertices = {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
  // Both triangles keep the diagonal from (0,0) to (1,1) as an edge.
  mesh.cells = {{0, 1, 2}, {0, 2, 3}};
  return mesh;
}

Mesh red_refine(const Mesh& mesh) {
  Mesh out;
  out.vertices = mesh.vertices;
  out.cells.reserve(4 * mesh.cells.size());

  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    int idx = out.num_vertices();
    out.vertices.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
    midpoint.emplace(key, idx);
    return idx;
  };

  for (const auto& cell : mesh.cells) {
    const int v0 = cell[0], v1 = cell[1], v2 = cell[2];
    const int m01 = mid(v0, v1), m12 = mid(v1, v2), m20 = mid(v2, v0);
    out.cells.push_back({v0, m01, m20});
    out.cells.push_back({v1, m12, m01});
    out.cells.push_back({v2, m20, m12});
    out.cells.push_back({m01, m12, m20});
  }
  return out;
}

Mesh barycentric_refine(const Mesh& mesh) {
  Mesh out;
  out.vertices = mesh.vertices;
  out.cells.reserve(3 * mesh.cells.size());
  out.macro_of_cell.reserve(3 * mesh.cells.size());

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    const int b = out.num_vertices();
    out.vertices.push_back((mesh.vertices[cell[0]] + mesh.vertices[cell[1]] +
                            mesh.vertices[cell[2]]) /
                           3.0);
    out.cells.push_back({cell[0], cell[1], b});
    out.cells.push_back({cell[1], cell[2], b});
    out.cells.push_back({cell[2], cell[0], b});
    out.macro_of_cell.insert(out.macro_of_cell.end(), {c, c, c});
  }
  return out;
}

Mesh mesh_level(int level) {
  if (level <= 0)
    throw std::invalid_argument("mesh_level: level must be >= 1, got " +
                                std::to_string(level));
  Mesh mesh = unit_square_base();
  for (int r = 0; r < level + 1; ++r) mesh = red_refine(mesh);
  return barycentric_refine(mesh);
}

// ============================================================================
// Facet topology
// ============================================================================

FacetTopology build_facets(const Mesh& mesh) {
  for (int c = 0; c < mesh.num_cells(); ++c) {
    if (signed_area2(mesh, c) <= 0.0)
      throw std::runtime_error("build_facets: cell " + std::to_string(c) +
                               " is degenerate or clockwise");
  }

  struct Entry {
    std::array<int, 2> cell{-1, -1};
  };
  std::map<std::pair<int, int>, Entry> edges;

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    for (int e = 0; e < 3; ++e) {
      auto key = std::minmax(cell[e], cell[(e + 1) % 3]);
      Entry& entry = edges[key];
      if (entry.cell[0] < 0) {
        entry.cell[0] = c;
      } else if (entry.cell[1] < 0) {
        entry.cell[1] = c;
      } else {
        throw std::runtime_error(
            "build_facets: edge (" + std::to_string(key.first) + "," +
            std::to_string(key.second) + ") is shared by more than two cells");
      }
    }
  }

  FacetTopology topo;
  topo.facets.reserve(edges.size());

  // std::map iteration is already lexicographic in the sorted vertex pair.
  std::map<std::pair<int, int>, int> facet_index;
  for (const auto& [key, entry] : edges) {
    Facet f;
    f.v = {key.first, key.second};
    f.cell = entry.cell;
    const Vec2 d = mesh.vertices[f.v[1]] - mesh.vertices[f.v[0]];
    f.length = d.norm();

    // Orient the normal out of cell[0]. The cell is counterclockwise, so the
    // outward normal of a directed edge is that edge rotated by -90 degrees.
    const auto& cell = mesh.cells[f.cell[0]];
    Vec2 dir = d;
    for (int e = 0; e < 3; ++e) {
      if (cell[e] == f.v[1] && cell[(e + 1) % 3] == f.v[0]) dir = -d;
    }
    f.normal = Vec2(dir.y(), -dir.x()) / f.length;

    if (f.interior()) ++topo.num_interior;
    facet_index.emplace(key, static_cast<int>(topo.facets.size()));
    topo.facets.push_back(f);
  }

  topo.cell_facets.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    for (int e = 0; e < 3; ++e) {
      auto key = std::minmax(cell[e], cell[(e + 1) % 3]);
      topo.cell_facets[c][e] = facet_index.at(key);
    }
  }
  return topo;
}

// ============================================================================
// Export
// ============================================================================

void write_mesh_text(const Mesh& mesh, std::ostream& out) {
  out << "#vertices " << mesh.num_vertices() << "\n";
  out.precision(17);
  for (const auto& v : mesh.vertices) out << v.x() << " " << v.y() << "\n";
  out << "#cells " << mesh.num_cells() << "\n";
  for (const auto& c : mesh.cells)
    out << c[0] << " " << c[1] << " " << c[2] << "\n";
}

} // namespace oseen
