#include <doctest.h>

#include <cmath>

#include "oseen/quadrature.hpp"

using namespace oseen;

namespace {

// Exact reference-triangle moment: integral of x^i y^j = i! j! / (i+j+2)!.
double triangle_moment(int i, int j) {
  double v = 1.0;
  for (int k = 1; k <= i; ++k) v *= k;
  for (int k = 1; k <= j; ++k) v *= k;
  for (int k = 1; k <= i + j + 2; ++k) v /= k;
  return v;
}

double integrate_triangle(const QuadratureRule& rule, int i, int j) {
  double s = 0.0;
  for (int q = 0; q < rule.size(); ++q)
    s += rule.weights[q] * std::pow(rule.points[q].x(), i) *
         std::pow(rule.points[q].y(), j);
  return s;
}

} // namespace

TEST_CASE("triangle rules integrate every monomial of their degree") {
  for (int degree = 0; degree <= 14; ++degree) {
    const QuadratureRule rule = triangle_quadrature(degree);
    CHECK(rule.exactness >= degree);
    for (int total = 0; total <= degree; ++total) {
      for (int i = 0; i <= total; ++i) {
        const int j = total - i;
        const double exact = triangle_moment(i, j);
        CHECK(integrate_triangle(rule, i, j) ==
              doctest::Approx(exact).epsilon(1e-12).scale(exact));
      }
    }
  }
}

TEST_CASE("triangle rule basics") {
  const QuadratureRule centroid = triangle_quadrature(1);
  CHECK(centroid.size() == 1);
  CHECK(centroid.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(centroid.points[0].x() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(centroid.points[0].y() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  for (int degree : {0, 2, 4, 5, 6, 8, 12, 20, 30}) {
    const QuadratureRule rule = triangle_quadrature(degree);
    double sum = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      CHECK(rule.weights[q] > 0.0);
      CHECK(rule.points[q].x() >= -1e-14);
      CHECK(rule.points[q].y() >= -1e-14);
      CHECK(rule.points[q].x() + rule.points[q].y() <= 1.0 + 1e-14);
      sum += rule.weights[q];
    }
    CHECK(sum == doctest::Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("degree 6 rule hits the x^2 y^4 moment 1/840") {
  // 2! 4! / 8! = 48/40320 = 1/840.
  const QuadratureRule rule = triangle_quadrature(6);
  CHECK(integrate_triangle(rule, 2, 4) ==
        doctest::Approx(1.0 / 840.0).epsilon(1e-14));
  CHECK(integrate_triangle(rule, 0, 0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("triangle degrees outside the supported range throw") {
  CHECK_THROWS_AS(triangle_quadrature(-1), std::invalid_argument);
  CHECK_THROWS_AS(triangle_quadrature(31), std::invalid_argument);
}

TEST_CASE("edge rules are Gauss rules on [0,1]") {
  const QuadratureRule mid = edge_quadrature(1);
  CHECK(mid.size() == 1);
  CHECK(mid.points[0].x() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mid.weights[0] == doctest::Approx(1.0).epsilon(1e-15));

  for (int degree : {0, 3, 9, 21, 60}) {
    const QuadratureRule rule = edge_quadrature(degree);
    CHECK(rule.dim == 1);
    double sum = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      CHECK(rule.weights[q] > 0.0);
      CHECK(rule.points[q].x() >= 0.0);
      CHECK(rule.points[q].x() <= 1.0);
      CHECK(rule.points[q].y() == 0.0);
      sum += rule.weights[q];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));

    for (int p = 0; p <= degree && p <= 24; ++p) {
      double s = 0.0;
      for (int q = 0; q < rule.size(); ++q)
        s += rule.weights[q] * std::pow(rule.points[q].x(), p);
      const double exact = 1.0 / (p + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13));
    }
  }

  const QuadratureRule nine = edge_quadrature(9);
  double t9 = 0.0;
  for (int q = 0; q < nine.size(); ++q)
    t9 += nine.weights[q] * std::pow(nine.points[q].x(), 9);
  CHECK(t9 == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("edge degrees outside the supported range throw") {
  CHECK_THROWS_AS(edge_quadrature(-1), std::invalid_argument);
  CHECK_THROWS_AS(edge_quadrature(61), std::invalid_argument);
}
