#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "oracle_support.hpp"
#include "rmx/errors.hpp"
#include "rmx/matrices.hpp"
#include "rmx/oracles.hpp"

using cplx = std::complex<double>;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using rmx::LagrangeMesh;

TEST_CASE("overlap matrix") {
  const LagrangeMesh mesh(10, 5.0);
  CHECK(rmx::overlap_matrix(mesh, true).isIdentity(0.0));

  const MatrixXd exact = rmx::overlap_matrix(mesh, false);
  CHECK(oracle::max_abs(exact - exact.transpose()) == 0.0);
  for (int i = 0; i < 10; ++i) {
    const double x = mesh.node(i);
    CHECK(exact(i, i) == doctest::Approx(1.0 + (1.0 - x) / x / 21.0).epsilon(1e-14));
  }

  SUBCASE("against a 500-point quadrature of f_i f_j") {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j <= i; ++j) {
        const double integral = oracle::composite_integral(
            [&](double r) { return rmx::basis_eval(mesh, i, r) * rmx::basis_eval(mesh, j, r); },
            0.0, 5.0);
        worst = std::max(worst, std::abs(integral - exact(i, j)));
      }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("overlap in rank-one form") {
  for (int n : {5, 10, 25}) {
    const LagrangeMesh mesh(n, 3.0);
    const rmx::RankOneSymmetric r1 = rmx::overlap_rank_one(mesh);
    CHECK(std::abs(r1.u.norm() - 1.0) < 1e-13);
    CHECK(r1.alpha == doctest::Approx(double(n) * n / (2.0 * n + 1.0)).epsilon(1e-14));
    CHECK(oracle::max_abs(r1.dense() - rmx::overlap_matrix(mesh, false)) < 1e-11);
  }
}

TEST_CASE("kinetic matrix closed form") {
  const LagrangeMesh mesh(15, 4.0);
  const MatrixXd t = rmx::kinetic_bloch_matrix(mesh);
  CHECK(oracle::max_abs(t - t.transpose()) < 1e-12 * oracle::max_abs(t));
  const int n = 15;
  const double a = 4.0;
  for (int i = 0; i < n; ++i) {
    const double x = mesh.node(i);
    const double expected =
        (4.0 * n * (n + 1) + 3.0 + (1.0 - 6.0 * x) / (x * (1.0 - x))) / (6.0 * a * a * x * (1.0 - x));
    CHECK(t(i, i) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("kinetic matrix from the derivative Gram matrix") {
  for (int n : {2, 5, 10, 25, 40}) {
    CAPTURE(n);
    const LagrangeMesh mesh(n, 5.0);
    MatrixXd gram = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          gram(i, j) += mesh.radius() * mesh.weight(k) * oracle::basis_derivative_at_node(mesh, i, k) *
                        oracle::basis_derivative_at_node(mesh, j, k);
    const MatrixXd t = rmx::kinetic_bloch_matrix(mesh);
    CHECK(oracle::max_abs(t - 0.5 * gram) < 1e-10 * std::max(1.0, oracle::max_abs(t)));
  }
}

TEST_CASE("two point kinetic matrix against symbolic integration") {
  // -1/2 int f_i f_j'' + 1/2 f_i(1) f_j'(1), a = 1, done exactly.
  const MatrixXd t = rmx::kinetic_bloch_matrix(LagrangeMesh(2, 1.0));
  CHECK(t(0, 0) == doctest::Approx(15.0 + 6.0 * std::sqrt(3.0)).epsilon(1e-13));
  CHECK(t(1, 1) == doctest::Approx(15.0 - 6.0 * std::sqrt(3.0)).epsilon(1e-13));
  CHECK(t(0, 1) == doctest::Approx(-9.0).epsilon(1e-13));
  CHECK(t(1, 0) == doctest::Approx(-9.0).epsilon(1e-13));

  // Scaling with the channel radius.
  const MatrixXd t3 = rmx::kinetic_bloch_matrix(LagrangeMesh(2, 3.0));
  CHECK(oracle::max_abs(9.0 * t3 - t) < 1e-12);
}

TEST_CASE("potential matrix") {
  const LagrangeMesh mesh(8, 5.0);
  CHECK(rmx::potential_matrix(mesh, rmx::zero_potential()).diagonal().isZero(0.0));
  CHECK((rmx::potential_matrix(mesh, rmx::constant_potential(-1.25)).diagonal().array() == -1.25).all());

  const rmx::BargmannParams p(2.0, -1.0);
  const rmx::DiagonalXd v = rmx::potential_matrix(mesh, rmx::bargmann(p));
  for (int i = 0; i < 8; ++i) {
    const double e = std::exp(-4.0 * mesh.point(i));
    CHECK(v.diagonal()[i] == doctest::Approx(-16.0 * 3.0 * e / ((1 + 3 * e) * (1 + 3 * e))).epsilon(1e-14));
  }

  const rmx::Potential coulomb{"coulomb", [](double r) { return 1.0 / (r - 2.5); }, false};
  const LagrangeMesh odd(5, 5.0);  // middle node at r = 2.5
  CHECK_THROWS_AS(rmx::potential_matrix(odd, coulomb), rmx::singular_potential);
}

TEST_CASE("centrifugal matrix") {
  const LagrangeMesh mesh(10, 5.0);
  CHECK(rmx::centrifugal_matrix(mesh, 0).diagonal().isZero(0.0));
  const rmx::DiagonalXd c = rmx::centrifugal_matrix(mesh, 1);
  for (int i = 0; i < 10; ++i) {
    CHECK(c.diagonal()[i] == doctest::Approx(1.0 / (25.0 * mesh.node(i) * mesh.node(i))).epsilon(1e-14));
    if (i > 0) CHECK(c.diagonal()[i] < c.diagonal()[i - 1]);
  }
  CHECK_THROWS_AS(rmx::centrifugal_matrix(mesh, -1), std::invalid_argument);
}

TEST_CASE("assembled C(B)") {
  const LagrangeMesh mesh(10, 5.0);
  const rmx::SystemMatrices sys = rmx::assemble_system(mesh, rmx::bargmann({2.0, -1.0}), 0);
  CHECK(oracle::max_abs(sys.c0 - sys.c0.transpose()) < 1e-13 * oracle::max_abs(sys.c0));
  CHECK(rmx::assemble_C<double>(sys, 0.0) == sys.c0);

  const MatrixXd real_b = rmx::assemble_C<double>(sys, 1.7);
  CHECK(oracle::max_abs(real_b - real_b.transpose()) < 1e-13 * oracle::max_abs(real_b));

  const cplx b(0.4, -2.2);
  const Eigen::MatrixXcd cb = rmx::assemble_C<cplx>(sys, b);
  CHECK((cb - cb.transpose()).cwiseAbs().maxCoeff() < 1e-13);
  const Eigen::MatrixXcd diff = cb - sys.c0.cast<cplx>();
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const double bloch = sys.surface[i] * sys.surface[j] / 5.0;  // f_i(a) f_j(a) / a
      CHECK(std::abs(diff(i, j) - (-b / 2.0 * bloch)) < 1e-12);
    }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(diff);
  CHECK(svd.singularValues()[1] < 1e-12 * svd.singularValues()[0]);
}

TEST_CASE("Sherman-Morrison against dense inversion") {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 10;
    const MatrixXd b = oracle::random_matrix(rng, n) + n * MatrixXd::Identity(n, n);
    const VectorXd u = oracle::random_vector(rng, n);
    const VectorXd v = oracle::random_vector(rng, n);
    const MatrixXd b_inv = b.inverse();
    const MatrixXd dense = (b + u * v.transpose()).inverse();
    const MatrixXd sm = rmx::sherman_morrison_inverse(b_inv, u, v);
    worst = std::max(worst, oracle::max_abs(sm - dense) / oracle::max_abs(dense));
    const VectorXd applied = rmx::sherman_morrison_apply(b_inv, u, v);
    worst = std::max(worst, (applied - dense * u).norm() / (dense * u).norm());
  }
  CHECK(worst < 1e-9);

  const MatrixXd b = oracle::random_matrix(rng, 8) + 8 * MatrixXd::Identity(8, 8);
  const VectorXd u = oracle::random_vector(rng, 8);
  const VectorXd v = oracle::random_vector(rng, 8);
  const MatrixXd sm = rmx::sherman_morrison_inverse(b.inverse(), u, v);
  CHECK(oracle::max_abs(sm * (b + u * v.transpose()) - MatrixXd::Identity(8, 8)) < 1e-10);
  CHECK(rmx::sherman_morrison_inverse(b.inverse(), VectorXd::Zero(8), v) == b.inverse());
}

TEST_CASE("Sherman-Morrison with complex entries uses the plain transpose") {
  std::mt19937_64 rng(11);
  const int n = 6;
  const Eigen::MatrixXcd b = oracle::random_matrix(rng, n).cast<cplx>() * cplx(1.0, 0.5) +
                             cplx(n, 0) * Eigen::MatrixXcd::Identity(n, n);
  const Eigen::VectorXcd u = oracle::random_vector(rng, n).cast<cplx>() * cplx(0.3, 1.0);
  const Eigen::VectorXcd v = oracle::random_vector(rng, n).cast<cplx>() * cplx(-0.7, 0.2);
  const Eigen::MatrixXcd dense = (b + u * v.transpose()).inverse();
  const Eigen::MatrixXcd sm = rmx::sherman_morrison_inverse(b.inverse(), u, v);
  CHECK((sm - dense).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("scalar identity of the rank-one update") {
  std::mt19937_64 rng(3);
  double worst = 0.0;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 4 + trial % 6;
    const MatrixXd b = oracle::random_spd(rng, n);
    const VectorXd u = oracle::random_vector(rng, n);
    const MatrixXd a = b + u * u.transpose();
    const double lhs = 1.0 / (u.transpose() * a.inverse() * u).value();
    const double rhs = 1.0 + 1.0 / (u.transpose() * b.inverse() * u).value();
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    const double via = rmx::sherman_morrison_scalar(b.inverse(), u, u);
    worst = std::max(worst, std::abs(1.0 / via - rhs) / std::abs(rhs));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("singular rank-one update") {
  const MatrixXd b_inv = MatrixXd::Identity(3, 3);
  const VectorXd u = VectorXd::Unit(3, 0);
  const VectorXd v = -VectorXd::Unit(3, 0);
  CHECK_THROWS_AS(rmx::sherman_morrison_inverse(b_inv, u, v), rmx::singular_update);
  CHECK_THROWS_AS(rmx::sherman_morrison_scalar(b_inv, u, v), rmx::singular_update);
}

TEST_CASE("rank-one powers") {
  const LagrangeMesh mesh(25, 5.0);
  const rmx::RankOneSymmetric n = rmx::overlap_rank_one(mesh);
  const MatrixXd dense = n.dense();
  const MatrixXd id = MatrixXd::Identity(25, 25);

  CHECK(rmx::rank_one_power(n, 1.0).alpha == doctest::Approx(n.alpha).epsilon(1e-14));
  CHECK(oracle::max_abs(dense * rmx::rank_one_power(n, -1.0).dense() - id) < 1e-12);
  const rmx::RankOneSymmetric half = rmx::rank_one_power(n, 0.5);
  CHECK(oracle::max_abs(half.dense() * half.dense() - dense) < 1e-12);
  CHECK(rmx::rank_one_power(half, 2.0).alpha == doctest::Approx(n.alpha).epsilon(1e-13));
  const MatrixXd inv_root = rmx::rank_one_power(n, -0.5).dense();
  CHECK(oracle::max_abs(inv_root * dense * inv_root - id) < 1e-12);

  const rmx::RankOneSymmetric bad{-2.0, VectorXd::Unit(3, 1)};
  CHECK_THROWS_AS(rmx::rank_one_power(bad, 0.5), std::domain_error);
  CHECK(rmx::rank_one_power(bad, 2.0).alpha == doctest::Approx(0.0));
}
