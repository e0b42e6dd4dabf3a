#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "oseen/assembly.hpp"
#include "oseen/solver.hpp"

using namespace oseen;
using testutil::SpacePair;
using testutil::make_spaces;

namespace {

struct Solved {
  AssembledSystem system;
  SolveResult result;
};

Solved solve_patch(const SpacePair& sp, double mu, const StabConfig& stab) {
  Solved s;
  s.system = assemble_system(sp.velocity, sp.pressure, make_case("patch", mu, 1.0),
                             stab);
  s.result = solve(s.system);
  return s;
}

} // namespace

TEST_CASE("polynomial patch flow is reproduced to solver precision") {
  const SpacePair sp = make_spaces(1, 2);
  StabConfig stab;
  stab.delta1 = stab.delta2 = stab.delta3 = 1.0;
  const Solved s = solve_patch(sp, 1e-3, stab);

  const ProblemCase c = make_case("patch", 1e-3, 1.0);
  const VectorXd u_exact = interpolate_velocity(sp.velocity, c.exact_u.value);
  const VectorXd p_exact = interpolate_pressure(
      sp.pressure, [&c](const Vec2& x) { return c.exact_p.value(x); });

  // The exact pressure x + y - 1 already has zero mean, so the solver's
  // mean shift does not move it.
  CHECK((s.result.velocity - u_exact).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK((s.result.pressure - p_exact).cwiseAbs().maxCoeff() <= 1e-7);

  CHECK(s.result.residual <= 1e-9);
  CHECK(std::abs(s.result.pressure_mean) <= 1e-9);
  CHECK(s.result.matrix_size ==
        sp.velocity.dim() + sp.pressure.dim() + 1);
  CHECK(s.result.matrix_nonzeros > 0);
  CHECK(s.result.seconds_total >= s.result.seconds_factorize);

  const DivergenceReport div =
      measure_divergence(sp.velocity, s.result.velocity, 6);
  CHECK(div.div_sup <= 1e-10 * std::max(1.0, div.grad_sup));
  // sup |d(-3x^2)/dx| over quadrature points: close to, never above, 6.
  CHECK(div.grad_sup > 4.0);
  CHECK(div.grad_sup <= 6.0 + 1e-9);
}

TEST_CASE("divergence report on trivial fields") {
  const SpacePair sp = make_spaces(1, 2);
  const VectorXd zero = VectorXd::Zero(sp.velocity.dim());
  const DivergenceReport z = measure_divergence(sp.velocity, zero, 6);
  CHECK(z.div_sup == 0.0);
  CHECK(z.grad_sup == 0.0);

  const VectorXd shear = interpolate_velocity(
      sp.velocity, [](const Vec2& p) { return Vec2(p.y(), 0.0); });
  const DivergenceReport r = measure_divergence(sp.velocity, shear, 6);
  CHECK(r.div_sup <= 1e-12);
  CHECK(r.grad_sup == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(measure_divergence(sp.velocity, VectorXd::Zero(3), 6),
                  std::invalid_argument);
}

TEST_CASE("vanishing convection reduces to a pure Stokes solve") {
  const SpacePair sp = make_spaces(1, 2);

  ProblemCase c = make_case("patch", 1.0, 1.0);
  c.name = "patch-stokes";
  c.beta = {[](const Vec2&) { return Vec2(0.0, 0.0); },
            [](const Vec2&) { return Mat2(Mat2::Zero()); },
            [](const Vec2&) { return std::array<double, 6>{}; }};
  // f = sigma u - mu (Laplacian u) + grad p for u = (0, -3x^2), p = x+y-1.
  const double mu = c.mu;
  const double sigma = c.sigma;
  c.forcing = [mu, sigma](const Vec2& x) {
    return Vec2(1.0, -3.0 * sigma * x.x() * x.x() + 6.0 * mu + 1.0);
  };

  StabConfig stab;
  stab.delta1 = stab.delta2 = stab.delta3 = 2.0;
  const AssembledSystem sys =
      assemble_system(sp.velocity, sp.pressure, c, stab);
  // The penalty form is weighted by the convection sup norm, so it must
  // degenerate to zero along with the convection field.
  CHECK(sys.beta_sup == 0.0);
  CHECK((sys.S.nonZeros() == 0 || sys.S.coeffs().cwiseAbs().maxCoeff() == 0.0));

  const SolveResult result = solve(sys);
  const VectorXd u_exact = interpolate_velocity(sp.velocity, c.exact_u.value);
  const VectorXd p_exact = interpolate_pressure(
      sp.pressure, [&c](const Vec2& x) { return c.exact_p.value(x); });
  CHECK((result.velocity - u_exact).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK((result.pressure - p_exact).cwiseAbs().maxCoeff() <= 1e-7);
}

TEST_CASE("relabeling velocity unknowns does not change the fields") {
  const SpacePair sp = make_spaces(1, 2);
  StabConfig stab;
  stab.delta1 = stab.delta2 = stab.delta3 = 1.0;
  const Solved base = solve_patch(sp, 1e-3, stab);

  const int nv = sp.velocity.dim();
  std::vector<int> perm(nv);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), testutil::rng());

  auto permute_matrix = [&perm](const SpMat& m, bool rows, bool cols) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(m.nonZeros());
    for (int k = 0; k < m.outerSize(); ++k)
      for (SpMat::InnerIterator it(m, k); it; ++it)
        trips.emplace_back(rows ? perm[it.row()] : it.row(),
                           cols ? perm[it.col()] : it.col(), it.value());
    SpMat out(m.rows(), m.cols());
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
  };

  AssembledSystem shuffled = base.system;
  shuffled.A = permute_matrix(base.system.A, true, true);
  shuffled.S = permute_matrix(base.system.S, true, true);
  shuffled.B = permute_matrix(base.system.B, false, true);
  shuffled.load.setZero();
  shuffled.boundary_values.setZero();
  for (int i = 0; i < nv; ++i) {
    shuffled.load[perm[i]] = base.system.load[i];
    shuffled.boundary_values[perm[i]] = base.system.boundary_values[i];
  }
  shuffled.boundary_dofs.clear();
  for (int dof : base.system.boundary_dofs)
    shuffled.boundary_dofs.push_back(perm[dof]);

  const SolveResult relabeled = solve(shuffled);
  double max_dev_u = 0.0;
  for (int i = 0; i < nv; ++i)
    max_dev_u = std::max(max_dev_u, std::abs(relabeled.velocity[perm[i]] -
                                             base.result.velocity[i]));
  CHECK(max_dev_u <= 1e-9);
  CHECK((relabeled.pressure - base.result.pressure).cwiseAbs().maxCoeff() <=
        1e-9);
}

TEST_CASE("repeating an identical solve is bitwise reproducible") {
  const SpacePair sp = make_spaces(1, 2);
  StabConfig stab;
  stab.delta1 = stab.delta2 = stab.delta3 = 2.0;
  const Solved a = solve_patch(sp, 1e-3, stab);
  const Solved b = solve_patch(sp, 1e-3, stab);
  CHECK((a.result.velocity.array() == b.result.velocity.array()).all());
  CHECK((a.result.pressure.array() == b.result.pressure.array()).all());
  CHECK(a.result.residual == b.result.residual);
}

TEST_CASE("structurally singular systems are rejected") {
  const SpacePair sp = make_spaces(1, 2);
  StabConfig stab;
  AssembledSystem sys = assemble_system(
      sp.velocity, sp.pressure, make_case("patch", 1e-3, 1.0), stab);
  sys.mean_row.setZero();
  CHECK_THROWS_AS(solve(sys), std::runtime_error);
}
