#include "rmx/mesh.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rmx {

LegendreValue legendre(int n, double t) {
  if (n == 0) return {1.0, 0.0};
  double p_prev = 1.0;
  double p = t;
  for (int m = 2; m <= n; ++m) {
    const double p_next = ((2 * m - 1) * t * p - (m - 1) * p_prev) / m;
    p_prev = p;
    p = p_next;
  }
  double dp;
  if (std::abs(t) == 1.0) {
    // P_n'(+-1) = (+-1)^(n+1) n(n+1)/2
    dp = 0.5 * n * (n + 1) * ((n % 2 == 0 && t < 0) ? -1.0 : 1.0);
  } else {
    dp = n * (t * p - p_prev) / (t * t - 1.0);
  }
  return {p, dp};
}

LagrangeMesh::LagrangeMesh(int n_points, double channel_radius)
    : nodes_(n_points > 0 ? n_points : 0), weights_(n_points > 0 ? n_points : 0),
      radius_(channel_radius) {
  if (n_points < 1) throw std::invalid_argument("mesh needs at least one point");
  if (!(channel_radius > 0.0)) throw std::invalid_argument("channel radius must be positive");

  const int n = n_points;
  // Roots t_1 > t_2 > ... of P_N on [-1, 1]; only the non-negative half is
  // refined, the rest is mirrored so the rule is exactly symmetric.
  const int half = (n + 1) / 2;
  for (int i = 1; i <= half; ++i) {
    double t = std::cos(std::numbers::pi * (4.0 * i - 1.0) / (4.0 * n + 2.0));
    if (n % 2 == 1 && i == half) {
      t = 0.0;
    } else {
      for (int iter = 0; iter < 100; ++iter) {
        const LegendreValue pv = legendre(n, t);
        const double step = pv.value / pv.derivative;
        t -= step;
        if (std::abs(step) < 1e-15) break;
      }
    }
    const double dp = legendre(n, t).derivative;
    // x = (1 - t)/2 is the small node, (1 + t)/2 its mirror.
    const double x_low = 0.5 * (1.0 - t);
    const double x_high = 0.5 * (1.0 + t);
    const double w = 1.0 / (4.0 * x_low * x_high * dp * dp);
    nodes_[i - 1] = x_low;
    weights_[i - 1] = w;
    nodes_[n - i] = x_high;
    weights_[n - i] = w;
  }
}

LagrangeMesh build_mesh(int n_points, double channel_radius) {
  return LagrangeMesh(n_points, channel_radius);
}

namespace {

// binom(2N, N): leading coefficient of P_N(2x - 1) as a polynomial in x.
double shifted_leading_coefficient(int n) {
  double c = 1.0;
  for (int m = 1; m <= n; ++m) c *= static_cast<double>(n + m) / m;
  return c;
}

}  // namespace

double basis_eval(const LagrangeMesh& mesh, int i, double r) {
  const int n = mesh.size();
  if (i < 0 || i >= n) throw std::out_of_range("basis index out of range");
  const double a = mesh.radius();
  if (r < 0.0 || r > a) throw std::domain_error("r outside [0, a]");

  // P_N(2r/a - 1) / (r/a - x_i) = binom(2N,N) prod_{j != i} (r/a - x_j)
  const double x = r / a;
  double quotient = shifted_leading_coefficient(n);
  for (int j = 0; j < n; ++j)
    if (j != i) quotient *= (x - mesh.node(j));

  const double xi = mesh.node(i);
  return mesh.parity(i) / std::sqrt(a) * std::sqrt(mesh.complement(i) / xi) * x * quotient;
}

Eigen::VectorXd basis_row(const LagrangeMesh& mesh, double r) {
  Eigen::VectorXd row(mesh.size());
  for (int i = 0; i < mesh.size(); ++i) row[i] = basis_eval(mesh, i, r);
  return row;
}

}  // namespace rmx
