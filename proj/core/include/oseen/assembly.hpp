/// @file assembly.hpp
/// @brief Sparse assembly of the Oseen saddle system and the interior
///        penalty stabilization on interior facets.
///
/// Velocity block (rows and columns are velocity DOFs):
///   a(u, v) = (sigma u + (beta . grad) u, v) + mu (grad u, grad v).
/// Divergence block (rows are pressure DOFs):
///   b(q, v) = -(q, div v).
/// Curl-based stabilization, summed over interior facets F:
///   S(u, v) = 1/max|beta| * sum_F  delta1 h^2 <[[(beta.grad)u x n]], ...>
///                                + delta2 h^4 <[[curl((beta.grad)u)]], ...>
///                                + delta3 h^6 <[[grad curl((beta.grad)u)]], ...>
/// with h the maximal mesh width of the triangulation, [[.]] the jump across
/// F, the 2d cross product a x n = a1 n2 - a2 n1 and the scalar curl
/// w = d1 w2 - d2 w1. The classical variant penalizes the full jump
/// [[(beta.grad)u]] with the h^2 weight.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oseen/fespace.hpp"

namespace oseen {

enum class StabVariant { none, classical_cip, curl_cip };

struct StabConfig {
  StabVariant variant = StabVariant::curl_cip;
  double delta1 = 1.0;
  double delta2 = 1.0;
  double delta3 = 1.0;
  /// Divide the whole form by the sup of |beta| over the domain. When beta
  /// vanishes identically the stabilization is zero and no division happens.
  bool scale_by_beta_sup = true;
  /// Negate the cross product and curl conventions. The form is a sum of
  /// squared jumps, so this must not change it; kept as a testing knob.
  bool flip_sign_convention = false;
};

struct AssemblyOptions {
  /// Cell rule degree; defaults to 2k+2 for velocity degree k.
  int triangle_degree = -1;
  /// Facet rule degree; defaults to 2k+4.
  int edge_degree = -1;

  int resolve_triangle(int k) const {
    return triangle_degree >= 0 ? triangle_degree : 2 * k + 2;
  }
  int resolve_edge(int k) const {
    return edge_degree >= 0 ? edge_degree : 2 * k + 4;
  }
};

/// Everything the linear solve needs. Matrices cover all DOFs including the
/// Dirichlet boundary; the solver eliminates boundary rows and columns.
struct AssembledSystem {
  const VelocitySpace* velocity = nullptr;
  const PressureSpace* pressure = nullptr;
  SpMat A;                  // sigma mass + mu stiffness + convection
  SpMat S;                  // stabilization, zero when variant is none
  SpMat B;                  // divergence block with the minus sign
  VectorXd mean_row;        // integral of each pressure basis function
  VectorXd load;            // (f, v)
  VectorXd boundary_values; // nodal interpolation of the Dirichlet datum
  std::vector<int> boundary_dofs;
  double beta_sup = 0.0;
  std::vector<std::string> warnings;
};

AssembledSystem assemble_system(const VelocitySpace& velocity,
                                const PressureSpace& pressure,
                                const ProblemCase& problem,
                                const StabConfig& stab,
                                const AssemblyOptions& options = {});

// ----------------------------------------------------------------------------
// Individual blocks, also used directly by the test suites.
// ----------------------------------------------------------------------------

SpMat assemble_galerkin(const VelocitySpace& velocity,
                        const ProblemCase& problem, int triangle_degree,
                        std::vector<std::string>* warnings = nullptr);

/// The three curl-variant facet sums without delta weights and without the
/// 1/max|beta| prefactor.
struct StabParts {
  SpMat s1, s2, s3;
};
StabParts assemble_stab_parts(const VelocitySpace& velocity,
                              const ProblemCase& problem, int edge_degree,
                              bool flip_sign_convention = false);

/// Classical gradient-jump penalty without the delta1 weight and without the
/// 1/max|beta| prefactor.
SpMat assemble_classical_cip(const VelocitySpace& velocity,
                             const ProblemCase& problem, int edge_degree);

/// Weighted, prefactor-scaled stabilization block per the config. Rejects a
/// classical variant with nonzero delta2 or delta3.
SpMat assemble_stabilization(const VelocitySpace& velocity,
                             const ProblemCase& problem,
                             const StabConfig& stab,
                             const AssemblyOptions& options = {},
                             double* beta_sup_out = nullptr);

SpMat assemble_divergence(const VelocitySpace& velocity,
                          const PressureSpace& pressure, int triangle_degree);

VectorXd assemble_mean_constraint(const PressureSpace& pressure,
                                  int triangle_degree);

VectorXd assemble_load(const VelocitySpace& velocity,
                       const ProblemCase& problem, int triangle_degree);

/// Dirichlet datum interpolated at boundary nodes; zero elsewhere.
VectorXd boundary_lifting(const VelocitySpace& velocity,
                          const ProblemCase& problem);

std::vector<int> boundary_dof_list(const VelocitySpace& velocity);

/// Max Euclidean |beta| over the quadrature points of all cells.
double beta_sup_estimate(const VelocitySpace& velocity,
                         const ProblemCase& problem, int triangle_degree);

/// Plain text sparse dump, one "row col value" line per stored entry.
void write_triplets_text(const SpMat& matrix, std::ostream& out);

} // namespace oseen
