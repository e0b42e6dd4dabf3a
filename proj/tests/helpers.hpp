// Shared fixtures for the unit suites: deterministic RNG, hand-built problem
// cases, and a facet-jump quadrature oracle that recomputes the stabilization
// quadratic forms without going through the assembly code.

#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <random>

#include "oseen/assembly.hpp"
#include "oseen/fespace.hpp"
#include "oseen/problem.hpp"
#include "oseen/quadrature.hpp"

namespace testutil {

// Mesh, topology and both spaces of one level. The mesh and topology live on
// the heap so the space-internal pointers survive moves of the fixture.
struct SpacePair {
  std::unique_ptr<oseen::Mesh> mesh;
  std::unique_ptr<oseen::FacetTopology> topology;
  oseen::VelocitySpace velocity;
  oseen::PressureSpace pressure;

  SpacePair(int level, int degree)
      : mesh(std::make_unique<oseen::Mesh>(oseen::mesh_level(level))),
        topology(
            std::make_unique<oseen::FacetTopology>(oseen::build_facets(*mesh))),
        velocity(oseen::build_velocity_space(*mesh, *topology, degree)),
        pressure(oseen::build_pressure_space(*mesh, degree)) {}
};

inline SpacePair make_spaces(int level, int degree) {
  return SpacePair(level, degree);
}

inline std::mt19937& rng() {
  static std::mt19937 gen(0x5eed);
  return gen;
}

inline double uniform(double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng());
}

inline oseen::Vec2 random_unit_square_point(double margin = 0.05) {
  return {uniform(margin, 1.0 - margin), uniform(margin, 1.0 - margin)};
}

// Random barycentric point strictly inside the reference triangle.
inline oseen::Vec2 random_reference_point() {
  double a = uniform(0.02, 0.95);
  double b = uniform(0.02, 0.95);
  if (a + b > 0.96) {
    a = 0.98 - a;
    b = 0.98 - b;
  }
  return {a, b};
}

inline oseen::VectorXd random_vector(int n, double scale = 1.0) {
  oseen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform(-scale, scale);
  return v;
}

// Case with constant convection and no exact solution attached; enough for
// the Galerkin and stabilization blocks.
inline oseen::ProblemCase const_beta_case(const oseen::Vec2& beta, double mu,
                                          double sigma) {
  oseen::ProblemCase c;
  c.name = "synthetic-const-beta";
  c.mu = mu;
  c.sigma = sigma;
  c.beta.value = [beta](const oseen::Vec2&) { return beta; };
  c.beta.jacobian = [](const oseen::Vec2&) { return oseen::Mat2::Zero(); };
  c.beta.hessians = [](const oseen::Vec2&) {
    return std::array<double, 6>{0, 0, 0, 0, 0, 0};
  };
  c.forcing = [](const oseen::Vec2&) { return oseen::Vec2::Zero(); };
  c.exact_u.value = [](const oseen::Vec2&) { return oseen::Vec2::Zero(); };
  c.exact_p.value = [](const oseen::Vec2&) { return 0.0; };
  return c;
}

// Divergence-free convection field vanishing on the whole boundary:
// beta = (d/dy, -d/dx) psi with psi = x^2 (1-x)^2 y^2 (1-y)^2.
inline oseen::ProblemCase bump_beta_case(double mu, double sigma) {
  auto g = [](double t) { return t * t * (1 - t) * (1 - t); };
  auto g1 = [](double t) { return 2 * t - 6 * t * t + 4 * t * t * t; };
  auto g2 = [](double t) { return 2 - 12 * t + 12 * t * t; };
  auto g3 = [](double t) { return -12 + 24 * t; };

  oseen::ProblemCase c;
  c.name = "synthetic-bump-beta";
  c.mu = mu;
  c.sigma = sigma;
  c.beta.value = [=](const oseen::Vec2& p) {
    return oseen::Vec2(g(p.x()) * g1(p.y()), -g1(p.x()) * g(p.y()));
  };
  c.beta.jacobian = [=](const oseen::Vec2& p) {
    oseen::Mat2 j;
    j << g1(p.x()) * g1(p.y()), g(p.x()) * g2(p.y()),
        -g2(p.x()) * g(p.y()), -g1(p.x()) * g1(p.y());
    return j;
  };
  c.beta.hessians = [=](const oseen::Vec2& p) {
    const double x = p.x(), y = p.y();
    return std::array<double, 6>{g2(x) * g1(y),  g1(x) * g2(y),
                                 g(x) * g3(y),   -g3(x) * g(y),
                                 -g2(x) * g1(y), -g1(x) * g2(y)};
  };
  c.forcing = [](const oseen::Vec2&) { return oseen::Vec2::Zero(); };
  c.exact_u.value = [](const oseen::Vec2&) { return oseen::Vec2::Zero(); };
  c.exact_p.value = [](const oseen::Vec2&) { return 0.0; };
  return c;
}

// Quadratic forms of the interior-facet penalties, recomputed from field
// evaluations on the two sides of each facet. Matches the unweighted,
// unprefactored blocks of assemble_stab_parts / assemble_classical_cip.
struct JumpFormValues {
  double s1 = 0.0;        // h^2 (cross-product jump)^2
  double s2 = 0.0;        // h^4 (curl jump)^2
  double s3 = 0.0;        // h^6 |grad curl jump|^2
  double classical = 0.0; // h^2 |full vector jump|^2
  double normal = 0.0;    // h^2 (normal component jump)^2
};

inline JumpFormValues jump_form_oracle(const oseen::VelocitySpace& space,
                                       const oseen::VectorXd& coeffs,
                                       const oseen::ProblemCase& problem,
                                       int edge_degree) {
  using oseen::Vec2;
  const oseen::Mesh& mesh = *space.mesh;
  const double h2 = mesh.max_diameter() * mesh.max_diameter();
  const double h4 = h2 * h2;
  const double h6 = h4 * h2;
  const oseen::QuadratureRule rule = oseen::edge_quadrature(edge_degree);

  // Everything (beta.grad)u-related on one side of a facet at one point.
  struct SideData {
    Vec2 g;          // (beta.grad)u
    double curl_g;   // d1 g2 - d2 g1
    Vec2 grad_curl;  // (d1 curl g, d2 curl g)
  };
  auto side_eval = [&](int cell, const Vec2& phys) {
    const oseen::AffineMap map = oseen::AffineMap::from_cell(mesh, cell);
    const oseen::VelocityDerivs d =
        oseen::evaluate_velocity(space, coeffs, cell, map.to_reference(phys), 3);
    const Vec2 b = problem.beta.value(phys);
    const oseen::Mat2 db = problem.beta.jacobian(phys);
    const std::array<double, 6> hb = problem.beta.hessians(phys);

    // du[c][j] = dj u_c, ddu[c][j][k] = dj dk u_c, dddu[c][a] = order-3 slot a.
    double du[2][2], ddu[2][2][2], dddu[2][4];
    for (int c = 0; c < 2; ++c) {
      du[c][0] = d.d(c, 1, 0);
      du[c][1] = d.d(c, 1, 1);
      ddu[c][0][0] = d.d(c, 2, 0);
      ddu[c][0][1] = ddu[c][1][0] = d.d(c, 2, 1);
      ddu[c][1][1] = d.d(c, 2, 2);
      for (int a = 0; a < 4; ++a) dddu[c][a] = d.d(c, 3, a);
    }
    // Third derivative dj dk dl u_c from the order-3 slot (#y applications).
    auto d3 = [&](int c, int j, int k, int l) {
      return dddu[c][(j == 1) + (k == 1) + (l == 1)];
    };
    // Beta derivatives: dbeta[j][k] = dk beta_j, ddbeta[j][k][l] = dk dl beta_j.
    double dbeta[2][2] = {{db(0, 0), db(0, 1)}, {db(1, 0), db(1, 1)}};
    double ddbeta[2][2][2];
    ddbeta[0][0][0] = hb[0];
    ddbeta[0][0][1] = ddbeta[0][1][0] = hb[1];
    ddbeta[0][1][1] = hb[2];
    ddbeta[1][0][0] = hb[3];
    ddbeta[1][0][1] = ddbeta[1][1][0] = hb[4];
    ddbeta[1][1][1] = hb[5];

    auto gval = [&](int c) { return b[0] * du[c][0] + b[1] * du[c][1]; };
    // dk (beta.grad u)_c by the product rule.
    auto dg = [&](int c, int k) {
      return dbeta[0][k] * du[c][0] + dbeta[1][k] * du[c][1] +
             b[0] * ddu[c][0][k] + b[1] * ddu[c][1][k];
    };
    // dl dk (beta.grad u)_c.
    auto ddg = [&](int c, int k, int l) {
      double s = 0.0;
      for (int j = 0; j < 2; ++j)
        s += ddbeta[j][k][l] * du[c][j] + dbeta[j][k] * ddu[c][j][l] +
             dbeta[j][l] * ddu[c][j][k] + b[j] * d3(c, j, k, l);
      return s;
    };

    SideData out;
    out.g = Vec2(gval(0), gval(1));
    out.curl_g = dg(1, 0) - dg(0, 1);
    out.grad_curl = Vec2(ddg(1, 0, 0) - ddg(0, 1, 0), ddg(1, 0, 1) - ddg(0, 1, 1));
    return out;
  };

  JumpFormValues sums;
  for (const oseen::Facet& facet : space.topology->facets) {
    if (!facet.interior()) continue;
    const Vec2 a = mesh.vertices[facet.v[0]];
    const Vec2 b = mesh.vertices[facet.v[1]];
    for (int q = 0; q < rule.size(); ++q) {
      const double t = rule.points[q].x();
      const double w = rule.weights[q] * facet.length;
      const Vec2 phys = a + t * (b - a);
      const SideData s0 = side_eval(facet.cell[0], phys);
      const SideData s1 = side_eval(facet.cell[1], phys);

      const Vec2 jg = s0.g - s1.g;
      const double jcross = jg.x() * facet.normal.y() - jg.y() * facet.normal.x();
      const double jnormal = jg.dot(facet.normal);
      const double jcurl = s0.curl_g - s1.curl_g;
      const Vec2 jgradcurl = s0.grad_curl - s1.grad_curl;

      sums.s1 += w * h2 * jcross * jcross;
      sums.s2 += w * h4 * jcurl * jcurl;
      sums.s3 += w * h6 * jgradcurl.squaredNorm();
      sums.classical += w * h2 * jg.squaredNorm();
      sums.normal += w * h2 * jnormal * jnormal;
    }
  }
  return sums;
}

} // namespace testutil
