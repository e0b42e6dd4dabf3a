/// @file basis.hpp
/// @brief Lagrange bases on the reference triangle and affine cell maps.
///
/// Derivative tables use a fixed multi-index layout. For a maximum order M
/// each function gets (M+1)(M+2)/2 entries: order m occupies the slots
/// [m(m+1)/2, (m+1)(m+2)/2) and slot a within that block holds the partial
/// derivative with a applications of d/dy and m-a of d/dx. Order 0 is the
/// value, order 1 is (dx, dy), order 2 is (dxx, dxy, dyy) and so on.

#pragma once

#include <vector>

#include "oseen/common.hpp"
#include "oseen/mesh.hpp"

namespace oseen {

/// Scalar Lagrange basis of degree k on the reference triangle with
/// equispaced nodes. Node ordering: the three vertices (0,0), (1,0), (0,1),
/// then k-1 nodes per edge in edge order (v0,v1), (v1,v2), (v2,v0) walking
/// from the first vertex to the second, then the interior nodes.
class ReferenceBasis {
 public:
  explicit ReferenceBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Vec2>& nodes() const { return nodes_; }

  int nodes_per_edge() const { return degree_ - 1; }
  int num_interior_nodes() const { return size() - 3 * degree_; }
  /// Local index of the t-th node (0-based) along local edge e.
  int edge_node(int e, int t) const { return 3 + e * (degree_ - 1) + t; }
  int interior_node(int s) const { return 3 * degree_ + s; }

  /// Derivative tables of all basis functions at one reference point, as a
  /// size() x (M+1)(M+2)/2 matrix in the layout described above.
  /// Orders above 3 are not supported.
  Eigen::MatrixXd evaluate(const Vec2& p, int max_order) const;

  static int entry_offset(int order) { return order * (order + 1) / 2; }
  static int entry_count(int max_order) {
    return (max_order + 1) * (max_order + 2) / 2;
  }

 private:
  int degree_;
  std::vector<Vec2> nodes_;
  // exponents_[m] = (i, j) of the monomial x^i y^j; coeff_(m, b) is the
  // monomial expansion of basis function b.
  std::vector<std::pair<int, int>> exponents_;
  Eigen::MatrixXd coeff_;
};

/// Affine map x = B xi + b from the reference triangle onto a cell.
struct AffineMap {
  Mat2 B;
  Vec2 shift;
  Mat2 Binv;
  double det = 0.0;

  /// Throws if the cell is degenerate or clockwise.
  static AffineMap from_cell(const Mesh& mesh, int cell);

  Vec2 to_physical(const Vec2& ref) const { return B * ref + shift; }
  Vec2 to_reference(const Vec2& phys) const { return Binv * (phys - shift); }
};

/// Transforms reference derivative tables (layout as above, orders 0..M) to
/// physical derivatives under the map, in place. Rows are basis functions.
void push_forward_derivatives(Eigen::MatrixXd& tables, const AffineMap& map,
                              int max_order);

} // namespace oseen
