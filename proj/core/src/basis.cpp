/// @file basis.cpp

#include "oseen/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace oseen {

// ============================================================================
// ReferenceBasis
// ============================================================================

ReferenceBasis::ReferenceBasis(int degree) : degree_(degree) {
  if (degree < 1)
    throw std::invalid_argument("ReferenceBasis: degree must be >= 1, got " +
                                std::to_string(degree));
  const int k = degree;

  nodes_.emplace_back(0.0, 0.0);
  nodes_.emplace_back(1.0, 0.0);
  nodes_.emplace_back(0.0, 1.0);
  const Vec2 verts[3] = {nodes_[0], nodes_[1], nodes_[2]};
  for (int e = 0; e < 3; ++e) {
    const Vec2& a = verts[e];
    const Vec2& b = verts[(e + 1) % 3];
    for (int t = 1; t < k; ++t)
      nodes_.push_back(a + (static_cast<double>(t) / k) * (b - a));
  }
  for (int i = 1; i < k; ++i) {
    for (int j = 1; i + j <= k - 1; ++j)
      nodes_.emplace_back(static_cast<double>(i) / k,
                          static_cast<double>(j) / k);
  }

  const int n = size();
  for (int total = 0; total <= k; ++total) {
    for (int j = 0; j <= total; ++j) exponents_.emplace_back(total - j, j);
  }

  Eigen::MatrixXd vandermonde(n, n);
  for (int r = 0; r < n; ++r) {
    for (int m = 0; m < n; ++m) {
      vandermonde(r, m) = std::pow(nodes_[r].x(), exponents_[m].first) *
                          std::pow(nodes_[r].y(), exponents_[m].second);
    }
  }
  coeff_ = vandermonde.fullPivLu().inverse();
}

Eigen::MatrixXd ReferenceBasis::evaluate(const Vec2& p, int max_order) const {
  if (max_order < 0 || max_order > 3)
    throw std::invalid_argument("ReferenceBasis::evaluate: derivative order " +
                                std::to_string(max_order) +
                                " not supported (max 3)");
  const int n = size();
  const int entries = entry_count(max_order);
  Eigen::MatrixXd mono(entries, n);
  for (int order = 0; order <= max_order; ++order) {
    for (int a = 0; a <= order; ++a) {
      const int px = order - a, py = a;
      const int row = entry_offset(order) + a;
      for (int m = 0; m < n; ++m) {
        const int i = exponents_[m].first, j = exponents_[m].second;
        if (px > i || py > j) {
          mono(row, m) = 0.0;
          continue;
        }
        double factor = 1.0;
        for (int t = 0; t < px; ++t) factor *= (i - t);
        for (int t = 0; t < py; ++t) factor *= (j - t);
        mono(row, m) = factor * std::pow(p.x(), i - px) *
                       std::pow(p.y(), j - py);
      }
    }
  }
  return (mono * coeff_).transpose();
}

// ============================================================================
// AffineMap
// ============================================================================

AffineMap AffineMap::from_cell(const Mesh& mesh, int cell) {
  const Vec2& v0 = mesh.vertices[mesh.cells[cell][0]];
  const Vec2& v1 = mesh.vertices[mesh.cells[cell][1]];
  const Vec2& v2 = mesh.vertices[mesh.cells[cell][2]];
  AffineMap map;
  map.B.col(0) = v1 - v0;
  map.B.col(1) = v2 - v0;
  map.shift = v0;
  map.det = map.B(0, 0) * map.B(1, 1) - map.B(0, 1) * map.B(1, 0);
  if (map.det <= 0.0)
    throw std::runtime_error("AffineMap: cell " + std::to_string(cell) +
                             " is degenerate or clockwise");
  map.Binv << map.B(1, 1), -map.B(0, 1), -map.B(1, 0), map.B(0, 0);
  map.Binv /= map.det;
  return map;
}

// ============================================================================
// Derivative push-forward
// ============================================================================

void push_forward_derivatives(Eigen::MatrixXd& tables, const AffineMap& map,
                              int max_order) {
  if (max_order < 0 || max_order > 3)
    throw std::invalid_argument("push_forward_derivatives: order not supported");
  if (tables.cols() < ReferenceBasis::entry_count(max_order))
    throw std::invalid_argument("push_forward_derivatives: table too narrow");

  const Mat2& C = map.Binv; // d xi_i / d x_j

  for (int order = 1; order <= max_order; ++order) {
    // phys_a = sum_r T(a, r) ref_r for derivative blocks of this order,
    // where a and r count applications of d/dy resp. d/d eta.
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(order + 1, order + 1);
    for (int a = 0; a <= order; ++a) {
      for (int mask = 0; mask < (1 << order); ++mask) {
        double prod = 1.0;
        int pop = 0;
        for (int t = 0; t < order; ++t) {
          const int it = (mask >> t) & 1;
          const int jt = (t >= order - a) ? 1 : 0;
          pop += it;
          prod *= C(it, jt);
        }
        T(a, pop) += prod;
      }
    }
    const int off = ReferenceBasis::entry_offset(order);
    tables.middleCols(off, order + 1) =
        (tables.middleCols(off, order + 1) * T.transpose()).eval();
  }
}

} // namespace oseen
