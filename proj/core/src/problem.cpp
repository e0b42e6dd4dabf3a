/// @file problem.cpp

#include "oseen/problem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oseen {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

ProblemCase case_lattice_flow(double mu, double sigma) {
  if (mu < 0.0 || sigma < 0.0)
    throw std::invalid_argument("case_lattice_flow: mu and sigma must be >= 0");

  ProblemCase pc;
  pc.name = "lattice";
  pc.mu = mu;
  pc.sigma = sigma;

  auto u = [](const Vec2& x) {
    return Vec2(std::sin(kTwoPi * x.x()) * std::sin(kTwoPi * x.y()),
                std::cos(kTwoPi * x.x()) * std::cos(kTwoPi * x.y()));
  };
  auto ju = [](const Vec2& x) {
    const double sx = std::sin(kTwoPi * x.x()), cx = std::cos(kTwoPi * x.x());
    const double sy = std::sin(kTwoPi * x.y()), cy = std::cos(kTwoPi * x.y());
    Mat2 j;
    j << kTwoPi * cx * sy, kTwoPi * sx * cy,
        -kTwoPi * sx * cy, -kTwoPi * cx * sy;
    return j;
  };
  auto hu = [](const Vec2& x) {
    const double w2 = kTwoPi * kTwoPi;
    const double sx = std::sin(kTwoPi * x.x()), cx = std::cos(kTwoPi * x.x());
    const double sy = std::sin(kTwoPi * x.y()), cy = std::cos(kTwoPi * x.y());
    return std::array<double, 6>{-w2 * sx * sy, w2 * cx * cy, -w2 * sx * sy,
                                 -w2 * cx * cy, w2 * sx * sy, -w2 * cx * cy};
  };

  pc.exact_u = {u, ju, hu};
  pc.exact_p = {[](const Vec2& x) {
    return 0.25 * (std::cos(2.0 * kTwoPi * x.x()) -
                   std::cos(2.0 * kTwoPi * x.y()));
  }};
  pc.beta = {[u](const Vec2& x) { return Vec2(u(x) + Vec2(0.0, 1.0)); }, ju,
             hu};

  // The nonlinear term of u cancels grad p exactly, so the Oseen residual
  // reduces to sigma u - mu Lap(u) + du/dy with Lap(u) = -8 pi^2 u.
  pc.forcing = [u, mu, sigma](const Vec2& x) {
    const double sx = std::sin(kTwoPi * x.x()), cx = std::cos(kTwoPi * x.x());
    const double sy = std::sin(kTwoPi * x.y()), cy = std::cos(kTwoPi * x.y());
    return Vec2((sigma + 2.0 * kTwoPi * kTwoPi * mu) * u(x) +
                kTwoPi * Vec2(sx * cy, -cx * sy));
  };
  return pc;
}

ProblemCase case_boundary_layer(double mu) {
  if (mu <= 0.0)
    throw std::invalid_argument("case_boundary_layer: mu must be > 0");

  ProblemCase pc;
  pc.name = "layer";
  pc.mu = mu;
  pc.sigma = 0.0;

  // exp((x-1)/mu) underflows harmlessly to zero away from the layer; the
  // denominator 1 - exp(-1/mu) stays in (0, 1].
  const double e0 = std::exp(-1.0 / mu);
  const double denom = 1.0 - e0;

  pc.exact_u = {
      [=](const Vec2& x) {
        const double e = std::exp((x.x() - 1.0) / mu);
        return Vec2(0.0, x.x() - (e - e0) / denom);
      },
      [=](const Vec2& x) {
        const double e = std::exp((x.x() - 1.0) / mu);
        Mat2 j;
        j << 0.0, 0.0, 1.0 - e / (mu * denom), 0.0;
        return j;
      },
      [=](const Vec2& x) {
        const double e = std::exp((x.x() - 1.0) / mu);
        return std::array<double, 6>{0.0, 0.0, 0.0,
                                     -e / (mu * mu * denom), 0.0, 0.0};
      }};
  pc.exact_p = {[](const Vec2& x) { return 0.5 - x.y(); }};
  pc.beta = {[](const Vec2&) { return Vec2(1.0, 0.0); },
             [](const Vec2&) { return Mat2(Mat2::Zero()); },
             [](const Vec2&) { return std::array<double, 6>{}; }};
  pc.forcing = [](const Vec2&) { return Vec2(0.0, 0.0); };
  return pc;
}

ProblemCase case_polynomial_patch(double mu, double sigma) {
  ProblemCase pc;
  pc.name = "patch";
  pc.mu = mu;
  pc.sigma = sigma;

  pc.exact_u = {[](const Vec2& x) { return Vec2(0.0, -3.0 * x.x() * x.x()); },
                [](const Vec2& x) {
                  Mat2 j;
                  j << 0.0, 0.0, -6.0 * x.x(), 0.0;
                  return j;
                },
                [](const Vec2&) {
                  return std::array<double, 6>{0.0, 0.0, 0.0, -6.0, 0.0, 0.0};
                }};
  pc.exact_p = {[](const Vec2& x) { return x.x() + x.y() - 1.0; }};
  pc.beta = {[](const Vec2&) { return Vec2(1.0, 1.0); },
             [](const Vec2&) { return Mat2(Mat2::Zero()); },
             [](const Vec2&) { return std::array<double, 6>{}; }};
  pc.forcing = [mu, sigma](const Vec2& x) {
    return Vec2(1.0,
                -3.0 * sigma * x.x() * x.x() + 6.0 * mu - 6.0 * x.x() + 1.0);
  };
  return pc;
}

ProblemCase make_case(const std::string& name, double mu, double sigma) {
  if (name == "lattice") return case_lattice_flow(mu, sigma);
  if (name == "layer") {
    if (sigma != 0.0)
      throw std::invalid_argument(
          "make_case: the layer case is posed with sigma = 0");
    return case_boundary_layer(mu);
  }
  if (name == "patch") return case_polynomial_patch(mu, sigma);
  throw std::invalid_argument("make_case: unknown case '" + name +
                              "' (expected lattice, layer or patch)");
}

} // namespace oseen
