#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "rmx/errors.hpp"
#include "rmx/mesh.hpp"
#include "rmx/potential.hpp"

namespace rmx {

using DiagonalXd = Eigen::DiagonalMatrix<double, Eigen::Dynamic>;

/// Real matrices of one single-channel problem on a Lagrange mesh.
struct SystemMatrices {
  /// C(0): kinetic + Bloch(0) + centrifugal + potential.
  Eigen::MatrixXd c0;
  /// Exact overlap, or the identity under the Gauss approximation.
  Eigen::MatrixXd overlap;
  /// f_i(a).
  Eigen::VectorXd surface;
  bool gauss_overlap_used = true;
  double channel_radius = 1.0;
  int l = 0;
  Potential potential;

  int size() const { return static_cast<int>(surface.size()); }
};

/// 1 + alpha u u^T with a unit vector u.
struct RankOneSymmetric {
  double alpha = 0.0;
  Eigen::VectorXd u;

  Eigen::MatrixXd dense() const {
    return Eigen::MatrixXd::Identity(u.size(), u.size()) + alpha * u * u.transpose();
  }
};

Eigen::MatrixXd overlap_matrix(const LagrangeMesh& mesh, bool gauss_approx);
/// The exact overlap in rank-one form.
RankOneSymmetric overlap_rank_one(const LagrangeMesh& mesh);
/// <f_i| T_0 + L(0) |f_j>, closed form.
Eigen::MatrixXd kinetic_bloch_matrix(const LagrangeMesh& mesh);
DiagonalXd potential_matrix(const LagrangeMesh& mesh, const Potential& v);
DiagonalXd centrifugal_matrix(const LagrangeMesh& mesh, int l);
Eigen::VectorXd surface_vector(const LagrangeMesh& mesh);

SystemMatrices assemble_system(const LagrangeMesh& mesh, const Potential& v, int l,
                               bool gauss_overlap = true);

/// C(B) = C(0) - (B / 2a) f(a) f(a)^T. Complex symmetric for complex B.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> assemble_C(const SystemMatrices& sys,
                                                                 Scalar boundary) {
  const Scalar factor = boundary / Scalar(2.0 * sys.channel_radius);
  return sys.c0.cast<Scalar>() -
         factor * (sys.surface * sys.surface.transpose()).template cast<Scalar>();
}

// Sherman-Morrison: A = B + u v^T with B^{-1} known.

namespace detail {
template <typename Scalar>
void check_denominator(const Scalar& denominator) {
  if (std::abs(denominator) < 1e-14) throw singular_update("Sherman-Morrison denominator vanishes");
}
}  // namespace detail

/// (B + u v^T)^{-1}.
template <typename MatrixDerived, typename UDerived, typename VDerived>
typename MatrixDerived::PlainObject sherman_morrison_inverse(
    const Eigen::MatrixBase<MatrixDerived>& b_inv, const Eigen::MatrixBase<UDerived>& u,
    const Eigen::MatrixBase<VDerived>& v) {
  using Scalar = typename MatrixDerived::Scalar;
  const auto b_inv_u = (b_inv * u).eval();
  const auto v_b_inv = (v.transpose() * b_inv).eval();
  const Scalar denominator = Scalar(1) + (v.transpose() * b_inv_u).value();
  detail::check_denominator(denominator);
  return b_inv - (b_inv_u * v_b_inv) / denominator;
}

/// A^{-1} u = B^{-1} u / (1 + v^T B^{-1} u).
template <typename MatrixDerived, typename UDerived, typename VDerived>
auto sherman_morrison_apply(const Eigen::MatrixBase<MatrixDerived>& b_inv,
                            const Eigen::MatrixBase<UDerived>& u,
                            const Eigen::MatrixBase<VDerived>& v) {
  using Scalar = typename MatrixDerived::Scalar;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b_inv_u = b_inv * u;
  const Scalar denominator = Scalar(1) + (v.transpose() * b_inv_u).value();
  detail::check_denominator(denominator);
  return Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(b_inv_u / denominator);
}

/// v^T A^{-1} u from (v^T A^{-1} u)^{-1} = 1 + (v^T B^{-1} u)^{-1}.
template <typename MatrixDerived, typename UDerived, typename VDerived>
typename MatrixDerived::Scalar sherman_morrison_scalar(
    const Eigen::MatrixBase<MatrixDerived>& b_inv, const Eigen::MatrixBase<UDerived>& u,
    const Eigen::MatrixBase<VDerived>& v) {
  using Scalar = typename MatrixDerived::Scalar;
  const Scalar projected = (v.transpose() * b_inv * u).value();
  const Scalar denominator = Scalar(1) + projected;
  detail::check_denominator(denominator);
  return projected / denominator;
}

/// (1 + alpha u u^T)^p = 1 + [(1 + alpha)^p - 1] u u^T.
RankOneSymmetric rank_one_power(const RankOneSymmetric& m, double exponent);

}  // namespace rmx
