/// @file quadrature.cpp

#include "oseen/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace oseen {

namespace {

// ============================================================================
// Gauss rules from Jacobi matrices (Golub-Welsch)
// ============================================================================

struct Gauss1d {
  std::vector<double> points;
  std::vector<double> weights;
};

// Nodes and weights for the weight function encoded by the three-term
// recurrence coefficients (diag a_k, offdiag b_k, total mass mu0) on [-1,1].
Gauss1d golub_welsch(const std::vector<double>& a, const std::vector<double>& b,
                     double mu0) {
  const int n = static_cast<int>(a.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) J(i, i) = a[i];
  for (int i = 0; i + 1 < n; ++i) {
    const double off = std::sqrt(b[i + 1]);
    J(i, i + 1) = off;
    J(i + 1, i) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  Gauss1d rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.points[i] = eig.eigenvalues()(i);
    const double v0 = eig.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

// Legendre weight 1 on [-1,1], mapped to [0,1].
Gauss1d gauss_legendre01(int n) {
  std::vector<double> a(n, 0.0), b(n, 0.0);
  for (int k = 1; k < n; ++k) b[k] = k * k / (4.0 * k * k - 1.0);
  Gauss1d rule = golub_welsch(a, b, 2.0);
  for (int i = 0; i < n; ++i) {
    rule.points[i] = 0.5 * (1.0 + rule.points[i]);
    rule.weights[i] *= 0.5;
  }
  return rule;
}

// Jacobi weight (1-x) on [-1,1], mapped to weight (1-v) on [0,1].
Gauss1d gauss_jacobi10_01(int n) {
  std::vector<double> a(n, 0.0), b(n, 0.0);
  for (int k = 0; k < n; ++k) a[k] = -1.0 / ((2.0 * k + 1.0) * (2.0 * k + 3.0));
  for (int k = 1; k < n; ++k)
    b[k] = k * (k + 1.0) / ((2.0 * k + 1.0) * (2.0 * k + 1.0));
  Gauss1d rule = golub_welsch(a, b, 2.0);
  for (int i = 0; i < n; ++i) {
    rule.points[i] = 0.5 * (1.0 + rule.points[i]);
    rule.weights[i] *= 0.25;
  }
  return rule;
}

// ============================================================================
// Symmetric triangle tables
// ============================================================================

// Orbit weights are fractions of the total (they sum to 1 over all points);
// the reference area factor 1/2 is applied when the rule is assembled.
void add_center(QuadratureRule& rule, double w) {
  rule.points.emplace_back(1.0 / 3.0, 1.0 / 3.0);
  rule.weights.push_back(0.5 * w);
}

// Barycentric (1-2a, a, a) and permutations, mapped to (lambda1, lambda2).
void add_orbit3(QuadratureRule& rule, double a, double w) {
  const double c = 1.0 - 2.0 * a;
  rule.points.emplace_back(a, a);
  rule.points.emplace_back(c, a);
  rule.points.emplace_back(a, c);
  for (int i = 0; i < 3; ++i) rule.weights.push_back(0.5 * w);
}

// Barycentric (1-a-b, a, b) and all six permutations.
void add_orbit6(QuadratureRule& rule, double a, double b, double w) {
  const double c = 1.0 - a - b;
  rule.points.emplace_back(a, b);
  rule.points.emplace_back(b, a);
  rule.points.emplace_back(c, a);
  rule.points.emplace_back(a, c);
  rule.points.emplace_back(c, b);
  rule.points.emplace_back(b, c);
  for (int i = 0; i < 6; ++i) rule.weights.push_back(0.5 * w);
}

QuadratureRule symmetric_triangle_table(int degree) {
  QuadratureRule rule;
  rule.dim = 2;
  rule.exactness = degree;
  switch (degree) {
    case 0:
    case 1:
      add_center(rule, 1.0);
      break;
    case 2:
      add_orbit3(rule, 1.0 / 6.0, 1.0 / 3.0);
      break;
    case 4:
      add_orbit3(rule, 0.445948490915965, 0.223381589678011);
      add_orbit3(rule, 0.091576213509771, 0.109951743655322);
      break;
    case 5:
      add_center(rule, 0.225);
      add_orbit3(rule, 0.470142064105115, 0.132394152788506);
      add_orbit3(rule, 0.101286507323456, 0.125939180544827);
      break;
    case 6:
      add_orbit3(rule, 0.249286745170910, 0.116786275726379);
      add_orbit3(rule, 0.063089014491502, 0.050844906370207);
      add_orbit6(rule, 0.310352451033785, 0.053145049844816,
                 0.082851075618374);
      break;
    default:
      throw std::logic_error("no symmetric table for degree " +
                             std::to_string(degree));
  }
  return rule;
}

// Tensor Gauss-Legendre x Gauss-Jacobi rule collapsed onto the triangle via
// (x, y) = (u (1 - v), v). Positive weights at any degree.
QuadratureRule conical_triangle(int degree) {
  const int n = (degree + 2) / 2;
  const Gauss1d gl = gauss_legendre01(n);
  const Gauss1d gj = gauss_jacobi10_01(n);
  QuadratureRule rule;
  rule.dim = 2;
  rule.exactness = degree;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      rule.points.emplace_back(gl.points[j] * (1.0 - gj.points[i]),
                               gj.points[i]);
      rule.weights.push_back(gl.weights[j] * gj.weights[i]);
    }
  }
  return rule;
}

// ============================================================================
// Self-validation against exact monomial integrals
// ============================================================================

// int_T x^i y^j dx dy = i! j! / (i+j+2)! over the reference triangle,
// evaluated as a product of ratios to stay well scaled at high degree.
double exact_triangle_monomial(int i, int j) {
  double value = 1.0;
  for (int t = 1; t <= j; ++t) value *= static_cast<double>(t) / (i + t);
  return value / ((i + j + 1.0) * (i + j + 2.0));
}

void validate_triangle_rule(const QuadratureRule& rule) {
  for (double w : rule.weights) {
    if (!(w > 0.0)) throw std::logic_error("triangle rule has nonpositive weight");
  }
  for (int total = 0; total <= rule.exactness; ++total) {
    for (int i = 0; i <= total; ++i) {
      const int j = total - i;
      double acc = 0.0;
      for (int q = 0; q < rule.size(); ++q) {
        acc += rule.weights[q] * std::pow(rule.points[q].x(), i) *
               std::pow(rule.points[q].y(), j);
      }
      if (std::abs(acc - exact_triangle_monomial(i, j)) > 1e-13)
        throw std::logic_error("triangle rule of degree " +
                               std::to_string(rule.exactness) +
                               " fails on monomial x^" + std::to_string(i) +
                               " y^" + std::to_string(j));
    }
  }
}

void validate_edge_rule(const QuadratureRule& rule) {
  for (double w : rule.weights) {
    if (!(w > 0.0)) throw std::logic_error("edge rule has nonpositive weight");
  }
  for (int p = 0; p <= rule.exactness; ++p) {
    double acc = 0.0;
    for (int q = 0; q < rule.size(); ++q)
      acc += rule.weights[q] * std::pow(rule.points[q].x(), p);
    if (std::abs(acc - 1.0 / (p + 1.0)) > 1e-13)
      throw std::logic_error("edge rule of degree " +
                             std::to_string(rule.exactness) +
                             " fails on t^" + std::to_string(p));
  }
}

} // namespace

// ============================================================================
// Public entry points
// ============================================================================

QuadratureRule triangle_quadrature(int degree) {
  if (degree < 0 || degree > 30)
    throw std::invalid_argument("triangle_quadrature: degree " +
                                std::to_string(degree) +
                                " outside supported range [0, 30]");
  QuadratureRule rule;
  if (degree <= 6) {
    // Degree 3 has no all-positive symmetric table and rounds up to 4;
    // exactness of the result covers the request.
    const int table = degree == 3 ? 4 : degree;
    rule = symmetric_triangle_table(table);
    rule.exactness = table;
  } else {
    rule = conical_triangle(degree);
  }
  validate_triangle_rule(rule);
  return rule;
}

QuadratureRule edge_quadrature(int degree) {
  if (degree < 0 || degree > 60)
    throw std::invalid_argument("edge_quadrature: degree " +
                                std::to_string(degree) +
                                " outside supported range [0, 60]");
  const int n = std::max(1, (degree + 2) / 2);
  const Gauss1d gauss = gauss_legendre01(n);
  QuadratureRule rule;
  rule.dim = 1;
  rule.exactness = std::max(degree, 2 * n - 1);
  for (int i = 0; i < n; ++i) {
    rule.points.emplace_back(gauss.points[i], 0.0);
    rule.weights.push_back(gauss.weights[i]);
  }
  validate_edge_rule(rule);
  return rule;
}

} // namespace oseen
