#pragma once

#include <Eigen/Dense>

namespace rmx {

/// Value and first derivative of the Legendre polynomial P_n at t, from the
/// three-term recurrence.
struct LegendreValue {
  double value;
  double derivative;
};
LegendreValue legendre(int n, double t);

/// Shifted Gauss-Legendre mesh on [0, a] with its Lagrange basis.
///
/// Nodes x_i are the zeros of P_N(2x - 1) in (0, 1), weights are the [0, 1]
/// Gauss weights (the usual [-1, 1] weights halved). The rule is mirrored so
/// that 1 - x_i is stored exactly as x_{N+1-i}; use complement() wherever
/// 1 - x_i appears in a denominator.
///
/// Indices are zero-based throughout the C++ interface.
class LagrangeMesh {
 public:
  LagrangeMesh(int n_points, double channel_radius);

  int size() const { return static_cast<int>(nodes_.size()); }
  double radius() const { return radius_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  double node(int i) const { return nodes_[i]; }
  double weight(int i) const { return weights_[i]; }
  /// 1 - x_i without cancellation.
  double complement(int i) const { return nodes_[size() - 1 - i]; }
  /// Mesh point a x_i.
  double point(int i) const { return radius_ * nodes_[i]; }

  /// (-1)^(N-i) in the one-based convention, i.e. +1 for the last node.
  double parity(int i) const { return ((size() - 1 - i) % 2 == 0) ? 1.0 : -1.0; }

 private:
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
  double radius_;
};

LagrangeMesh build_mesh(int n_points, double channel_radius);

/// Lagrange function f_i(r) on [0, a]. Analytic at the node r = a x_i.
double basis_eval(const LagrangeMesh& mesh, int i, double r);

/// All N basis functions at r.
Eigen::VectorXd basis_row(const LagrangeMesh& mesh, double r);

/// a * sum_k lambda_k g(a x_k).
template <typename Function>
auto gauss_integrate(const LagrangeMesh& mesh, Function&& g) {
  using Result = decltype(g(0.0));
  Result sum{};
  for (int k = 0; k < mesh.size(); ++k) sum += mesh.weight(k) * g(mesh.point(k));
  return mesh.radius() * sum;
}

}  // namespace rmx
