#include "rmx/matrices.hpp"

#include <cmath>
#include <stdexcept>

namespace rmx {

namespace {

double alternating(int i, int j) { return ((i + j) % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

Eigen::MatrixXd overlap_matrix(const LagrangeMesh& mesh, bool gauss_approx) {
  const int n = mesh.size();
  if (gauss_approx) return Eigen::MatrixXd::Identity(n, n);

  Eigen::MatrixXd overlap(n, n);
  const double scale = 1.0 / (2.0 * n + 1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double ratio =
          std::sqrt(mesh.complement(i) * mesh.complement(j) / (mesh.node(i) * mesh.node(j)));
      overlap(i, j) = (i == j ? 1.0 : 0.0) + alternating(i, j) * scale * ratio;
    }
  }
  return overlap;
}

RankOneSymmetric overlap_rank_one(const LagrangeMesh& mesh) {
  const int n = mesh.size();
  RankOneSymmetric m;
  m.alpha = static_cast<double>(n) * n / (2.0 * n + 1.0);
  m.u.resize(n);
  // (-1)^i with one-based i
  for (int i = 0; i < n; ++i)
    m.u[i] = ((i % 2 == 0) ? -1.0 : 1.0) / n * std::sqrt(mesh.complement(i) / mesh.node(i));
  return m;
}

Eigen::MatrixXd kinetic_bloch_matrix(const LagrangeMesh& mesh) {
  const int n = mesh.size();
  const double a2 = mesh.radius() * mesh.radius();
  const double nn1 = static_cast<double>(n) * (n + 1);
  Eigen::MatrixXd t(n, n);
  for (int i = 0; i < n; ++i) {
    const double xi = mesh.node(i);
    const double ci = mesh.complement(i);
    t(i, i) = (4.0 * nn1 + 3.0 + (1.0 - 6.0 * xi) / (xi * ci)) / (6.0 * a2 * xi * ci);
    for (int j = 0; j < i; ++j) {
      const double xj = mesh.node(j);
      const double cj = mesh.complement(j);
      const double dx = xi - xj;
      const double bracket =
          nn1 + 1.0 + (xi + xj - 2.0 * xi * xj) / (dx * dx) - 1.0 / ci - 1.0 / cj;
      t(i, j) = alternating(i, j) * bracket / (2.0 * a2 * std::sqrt(xi * xj * ci * cj));
      t(j, i) = t(i, j);
    }
  }
  return t;
}

DiagonalXd potential_matrix(const LagrangeMesh& mesh, const Potential& v) {
  Eigen::VectorXd diag(mesh.size());
  for (int i = 0; i < mesh.size(); ++i) {
    const double value = v(mesh.point(i));
    if (!std::isfinite(value)) throw singular_potential(mesh.point(i));
    diag[i] = value;
  }
  return DiagonalXd(diag);
}

DiagonalXd centrifugal_matrix(const LagrangeMesh& mesh, int l) {
  if (l < 0) throw std::invalid_argument("partial wave must be non-negative");
  Eigen::VectorXd diag(mesh.size());
  const double factor = 0.5 * l * (l + 1) / (mesh.radius() * mesh.radius());
  for (int i = 0; i < mesh.size(); ++i) diag[i] = factor / (mesh.node(i) * mesh.node(i));
  return DiagonalXd(diag);
}

Eigen::VectorXd surface_vector(const LagrangeMesh& mesh) {
  Eigen::VectorXd f(mesh.size());
  for (int i = 0; i < mesh.size(); ++i)
    f[i] = mesh.parity(i) / std::sqrt(mesh.radius() * mesh.node(i) * mesh.complement(i));
  return f;
}

SystemMatrices assemble_system(const LagrangeMesh& mesh, const Potential& v, int l,
                               bool gauss_overlap) {
  SystemMatrices sys;
  sys.c0 = kinetic_bloch_matrix(mesh);
  sys.c0.diagonal() += centrifugal_matrix(mesh, l).diagonal();
  sys.c0.diagonal() += potential_matrix(mesh, v).diagonal();
  sys.overlap = overlap_matrix(mesh, gauss_overlap);
  sys.surface = surface_vector(mesh);
  sys.gauss_overlap_used = gauss_overlap;
  sys.channel_radius = mesh.radius();
  sys.l = l;
  sys.potential = v;
  return sys;
}

RankOneSymmetric rank_one_power(const RankOneSymmetric& m, double exponent) {
  const double base = 1.0 + m.alpha;
  const bool integral = exponent == std::floor(exponent);
  if (base <= 0.0 && !integral)
    throw std::domain_error("fractional power of a matrix with non-positive eigenvalue");
  if (base == 0.0 && exponent < 0.0) throw std::domain_error("negative power of a singular matrix");
  return {std::pow(base, exponent) - 1.0, m.u};
}

}  // namespace rmx
