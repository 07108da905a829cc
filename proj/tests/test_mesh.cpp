#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracle_support.hpp"
#include "rmx/mesh.hpp"

using rmx::LagrangeMesh;

TEST_CASE("one and two point meshes") {
  const LagrangeMesh one(1, 3.0);
  CHECK(one.node(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(one.weight(0) == doctest::Approx(1.0).epsilon(1e-15));

  const LagrangeMesh two(2, 1.0);
  CHECK(std::abs(two.node(0) - (3.0 - std::sqrt(3.0)) / 6.0) < 1e-15);
  CHECK(std::abs(two.node(1) - (3.0 + std::sqrt(3.0)) / 6.0) < 1e-15);
  CHECK(std::abs(two.weight(0) - 0.5) < 1e-15);
  CHECK(std::abs(two.weight(1) - 0.5) < 1e-15);
}

TEST_CASE("mesh invariants") {
  for (int n : {1, 2, 3, 7, 10, 25, 40, 60, 80}) {
    CAPTURE(n);
    const LagrangeMesh mesh = rmx::build_mesh(n, 5.0);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = mesh.node(i);
      CHECK(x > 0.0);
      CHECK(x < 1.0);
      if (i > 0) CHECK(x > mesh.node(i - 1));
      const auto [pn, dpn] = oracle::legendre(n, 2.0 * x - 1.0);
      // At N = 80 a one-ulp node already moves P_N by ~2e-13.
      if (n <= 60) CHECK(std::abs(pn) < 1e-13);
      CHECK(std::abs(pn / dpn) < 1e-15);
      CHECK(std::abs(x + mesh.node(n - 1 - i) - 1.0) < 1e-13);
      CHECK(std::abs(mesh.weight(i) - mesh.weight(n - 1 - i)) < 1e-13);
      CHECK(mesh.complement(i) == mesh.node(n - 1 - i));
      total += mesh.weight(i);
    }
    CHECK(std::abs(total - 1.0) < 1e-13);
  }
}

TEST_CASE("weights agree with the derivative formula") {
  const LagrangeMesh mesh(25, 2.0);
  for (int i = 0; i < mesh.size(); ++i) {
    const double x = mesh.node(i);
    const double dp = oracle::legendre(25, 2.0 * x - 1.0)[1];
    CHECK(mesh.weight(i) == doctest::Approx(1.0 / (4.0 * x * (1.0 - x) * dp * dp)).epsilon(1e-12));
  }
}

TEST_CASE("invalid mesh arguments") {
  CHECK_THROWS_AS(LagrangeMesh(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(LagrangeMesh(-3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(LagrangeMesh(4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(LagrangeMesh(4, -2.0), std::invalid_argument);
}

TEST_CASE("Lagrange conditions") {
  for (int n : {3, 10, 25, 40, 60}) {
    CAPTURE(n);
    const LagrangeMesh mesh(n, 4.0);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double v = rmx::basis_eval(mesh, i, mesh.point(j)) *
                         std::sqrt(mesh.radius() * mesh.weight(i));
        worst = std::max(worst, std::abs(v - (i == j ? 1.0 : 0.0)));
      }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("basis values at the ends") {
  const LagrangeMesh mesh(12, 5.0);
  for (int i = 0; i < mesh.size(); ++i) {
    CHECK(rmx::basis_eval(mesh, i, 0.0) == 0.0);
    const double x = mesh.node(i);
    const double sign = ((mesh.size() - 1 - i) % 2 == 0) ? 1.0 : -1.0;
    const double expected = sign / std::sqrt(5.0 * x * (1.0 - x));
    CHECK(rmx::basis_eval(mesh, i, 5.0) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("basis is smooth through its own node") {
  const LagrangeMesh mesh(25, 5.0);
  for (int i : {0, 12, 24}) {
    const double at = rmx::basis_eval(mesh, i, mesh.point(i));
    for (double eps : {1e-4, 1e-7, 1e-10, 1e-13}) {
      CAPTURE(eps);
      CHECK(std::abs(rmx::basis_eval(mesh, i, mesh.point(i) + eps) - at) < 1e3 * eps * std::abs(at) + 1e-12);
      CHECK(std::abs(rmx::basis_eval(mesh, i, mesh.point(i) - eps) - at) < 1e3 * eps * std::abs(at) + 1e-12);
    }
  }
}

TEST_CASE("basis agrees with the quotient form away from nodes") {
  const LagrangeMesh mesh(9, 3.0);
  for (double r : {0.13, 0.91, 1.77, 2.42, 2.999}) {
    const double p = oracle::legendre(9, 2.0 * r / 3.0 - 1.0)[0];
    for (int i = 0; i < 9; ++i) {
      const double x = mesh.node(i);
      const double sign = ((8 - i) % 2 == 0) ? 1.0 : -1.0;
      const double expected = sign / std::sqrt(3.0) * std::sqrt((1 - x) / x) * r * p / (r - 3.0 * x);
      CHECK(rmx::basis_eval(mesh, i, r) == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("basis argument checks") {
  const LagrangeMesh mesh(5, 2.0);
  CHECK_THROWS_AS(rmx::basis_eval(mesh, 5, 1.0), std::out_of_range);
  CHECK_THROWS_AS(rmx::basis_eval(mesh, -1, 1.0), std::out_of_range);
  CHECK_THROWS_AS(rmx::basis_eval(mesh, 0, -0.1), std::domain_error);
  CHECK_THROWS_AS(rmx::basis_eval(mesh, 0, 2.1), std::domain_error);
  CHECK(rmx::basis_row(mesh, 0.7).size() == 5);
}

TEST_CASE("quadrature exactness") {
  CHECK(rmx::gauss_integrate(LagrangeMesh(25, 5.0), [](double) { return 1.0; }) ==
        doctest::Approx(5.0).epsilon(1e-14));
  for (int n : {1, 2, 5, 10, 25, 40}) {
    for (double a : {1.0, 5.0, 6.0}) {
      const LagrangeMesh mesh(n, a);
      for (int m = 0; m <= 2 * n - 1; ++m) {
        CAPTURE(n);
        CAPTURE(m);
        const double exact = std::pow(a, m + 1) / (m + 1);
        const double got = rmx::gauss_integrate(mesh, [m](double r) { return std::pow(r, m); });
        CHECK(std::abs(got - exact) <= 1e-12 * exact);
      }
      // Degree 2N is one past exactness; the Gauss error term is
      // (N!)^4 / ((2N+1) ((2N)!)^2) a^(2N+1).
      const double exact = std::pow(a, 2 * n + 1) / (2 * n + 1);
      const double got = rmx::gauss_integrate(mesh, [n](double r) { return std::pow(r, 2 * n); });
      const double predicted = std::exp(4 * std::lgamma(n + 1.0) - 2 * std::lgamma(2 * n + 1.0)) /
                               (2 * n + 1) * std::pow(a, 2 * n + 1);
      if (predicted > 1e-10 * exact) CHECK((exact - got) == doctest::Approx(predicted).epsilon(1e-6));
    }
  }
}
