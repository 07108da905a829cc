#include "rmx/siegert.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rmx/errors.hpp"
#include "rmx/scattering.hpp"

namespace rmx {

namespace {

constexpr cplx kI{0.0, 1.0};

int real_sign(cplx k) {
  if (std::abs(k.real()) <= 1e-8 * std::max(1.0, std::abs(k))) return 0;
  return k.real() > 0.0 ? 1 : -1;
}

// Imaginary axis, then Re k > 0, then Re k < 0.
bool pole_order(cplx lhs, cplx rhs) {
  static constexpr int rank[3] = {2, 0, 1};  // indexed by sign + 1
  const int gl = rank[real_sign(lhs) + 1];
  const int gr = rank[real_sign(rhs) + 1];
  if (gl != gr) return gl < gr;
  if (gl != 0 && std::abs(lhs.real()) != std::abs(rhs.real()))
    return std::abs(lhs.real()) < std::abs(rhs.real());
  return lhs.imag() > rhs.imag();
}

Eigen::MatrixXd inverse_sqrt_overlap(const SystemMatrices& sys, const LagrangeMesh& mesh) {
  if (sys.gauss_overlap_used) return Eigen::MatrixXd::Identity(mesh.size(), mesh.size());
  return rank_one_power(overlap_rank_one(mesh), -0.5).dense();
}

struct NormTerms {
  cplx bulk;
  cplx edge;
  cplx total() const { return bulk + edge; }
};

NormTerms norm_terms(const SystemMatrices& sys, const Eigen::VectorXcd& c, cplx k) {
  const cplx bulk = (c.transpose() * sys.overlap.cast<cplx>() * c).value();
  const cplx edge = (sys.surface.cast<cplx>().transpose() * c).value();
  return {bulk, kI * edge * edge / (2.0 * k)};
}

struct CompanionEigen {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;
};

// Parlett-Reinsch diagonal balancing (radix 2, no permutations). Returns
// the scaling D with balanced = D^{-1} M D.
template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, 1> balance_in_place(
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>& m) {
  const Eigen::Index n = m.rows();
  Eigen::Matrix<Real, Eigen::Dynamic, 1> scale = Eigen::Matrix<Real, Eigen::Dynamic, 1>::Ones(n);
  for (bool converged = false; !converged;) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Real col = m.col(i).cwiseAbs().sum() - std::abs(m(i, i));
      const Real row = m.row(i).cwiseAbs().sum() - std::abs(m(i, i));
      if (col == 0 || row == 0) continue;
      Real c = col, f = 1;
      for (Real g = row / 2; c < g; c *= 4) f *= 2;
      for (Real g = row * 2; c >= g; c /= 4) f /= 2;
      if ((c + row) / f < Real(0.95) * (col + row)) {
        converged = false;
        scale[i] *= f;
        m.row(i) /= f;
        m.col(i) *= f;
      }
    }
  }
  return scale;
}

// With k = i kappa the quadratic problem has real coefficients:
// kappa (d, kappa d) = [[0, 1], [-2A, -w w^T]] (d, kappa d).
// A real eigensolver returns exact conjugate pairs in kappa, i.e. exact
// k, -conj(k) pairs.
template <typename Real>
CompanionEigen solve_companion(const Eigen::MatrixXd& reduced, const Eigen::VectorXd& w,
                               bool balance) {
  using MatrixR = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using Complex = std::complex<Real>;
  const Eigen::Index n = reduced.rows();

  MatrixR companion = MatrixR::Zero(2 * n, 2 * n);
  companion.topRightCorner(n, n).setIdentity();
  companion.bottomLeftCorner(n, n) = Real(-2) * reduced.cast<Real>();
  companion.bottomRightCorner(n, n) = -(w * w.transpose()).cast<Real>();

  Eigen::Matrix<Real, Eigen::Dynamic, 1> scale =
      Eigen::Matrix<Real, Eigen::Dynamic, 1>::Ones(2 * n);
  if (balance) scale = balance_in_place<Real>(companion);

  Eigen::EigenSolver<MatrixR> solver(companion, true);
  if (solver.info() != Eigen::Success)
    throw solver_error("companion eigenvalue problem did not converge", 2 * n);

  const auto vectors = (scale.template cast<Complex>().asDiagonal() * solver.eigenvectors()).eval();
  // k = i kappa, written out so a real kappa gives Re k = +0.
  const auto kappa = solver.eigenvalues();
  Eigen::VectorXcd k(2 * n);
  for (Eigen::Index m = 0; m < 2 * n; ++m)
    k[m] = cplx(0.0 - double(kappa[m].imag()), double(kappa[m].real()));
  return {k, vectors.template cast<cplx>()};
}

void require_normalized(const SiegertSet& set) {
  if (!set.normalized) throw std::invalid_argument("pseudostates must be normalized first");
}

}  // namespace

int SiegertSet::flagged_count() const {
  return static_cast<int>(std::count(unnormalizable.begin(), unnormalizable.end(), true));
}

SiegertSet siegert_solve_l0(const SystemMatrices& sys, const LagrangeMesh& mesh,
                            SiegertOptions options) {
  if (!options.allow_long_range && (sys.l != 0 || !sys.potential.short_range))
    throw std::invalid_argument(
        "the quadratic pseudostate problem needs l = 0 and a short-range potential");
  if (sys.size() != mesh.size()) throw std::invalid_argument("system and mesh sizes differ");

  const int n = mesh.size();
  const Eigen::MatrixXd root = inverse_sqrt_overlap(sys, mesh);
  const Eigen::MatrixXd reduced = root * sys.c0 * root;
  const Eigen::VectorXd w = root * sys.surface;

  const CompanionEigen eig = options.extended_precision
                                 ? solve_companion<long double>(reduced, w, options.balance)
                                 : solve_companion<double>(reduced, w, options.balance);
  const Eigen::VectorXcd& values = eig.values;

  std::vector<int> order(2 * n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int lhs, int rhs) { return pole_order(values[lhs], values[rhs]); });

  SiegertSet set{Eigen::VectorXcd(2 * n), Eigen::MatrixXcd(n, 2 * n), Eigen::VectorXcd(2 * n),
                 std::vector<bool>(2 * n, false), false, mesh, sys};
  for (int m = 0; m < 2 * n; ++m) {
    const int src = order[m];
    Eigen::VectorXcd c = root.cast<cplx>() * eig.vectors.col(src).head(n);
    c /= c.norm();
    set.wave_numbers[m] = values[src];
    set.coefficients.col(m) = c;
    set.boundary_values[m] = (sys.surface.cast<cplx>().transpose() * c).value();
  }
  return set;
}

SiegertSet siegert_normalize(SiegertSet set, double cancellation) {
  for (int m = 0; m < set.size(); ++m) {
    const cplx k = set.wave_numbers[m];
    Eigen::VectorXcd c = set.coefficients.col(m);
    const NormTerms terms = (k == 0.0) ? NormTerms{} : norm_terms(set.system, c, k);
    const cplx integral = terms.total();
    const double magnitude = std::abs(terms.bulk) + std::abs(terms.edge);
    if (!(std::abs(integral) > cancellation * magnitude)) {
      set.unnormalizable[m] = true;
      continue;
    }
    set.unnormalizable[m] = false;
    c /= std::sqrt(integral);
    set.coefficients.col(m) = c;
    set.boundary_values[m] = (set.system.surface.cast<cplx>().transpose() * c).value();
  }
  set.normalized = true;
  return set;
}

cplx s_matrix_product(const SiegertSet& set, cplx k) {
  const double a = set.mesh.radius();
  cplx product = std::exp(-2.0 * kI * k * a);
  for (int m = 0; m < set.size(); ++m) {
    const cplx kn = set.wave_numbers[m];
    if (std::abs(kn - k) < 1e-12) throw pole_error("wave number coincides with a pseudostate", k);
    product *= (kn + k) / (kn - k);
  }
  return product;
}

cplx s_matrix_sum(const SiegertSet& set, double k) {
  require_normalized(set);
  const double a = set.mesh.radius();
  cplx sum = 0.0;
  for (int m = 0; m < set.size(); ++m) {
    if (set.unnormalizable[m]) continue;
    const cplx kn = set.wave_numbers[m];
    const cplx edge = set.boundary_values[m];
    sum += edge * edge / (kn * (kn - k));
  }
  const cplx s = std::exp(-2.0 * kI * k * a) * (1.0 + kI * k * sum);
  if (const int flagged = set.flagged_count(); flagged > 0)
    throw accuracy_error("pole sum skipped states with cancelling normalization", {s}, flagged);
  return s;
}

Eigen::VectorXcd siegert_wavefunction(const SiegertSet& set, double k,
                                      std::span<const double> r_grid) {
  require_normalized(set);
  const double a = set.mesh.radius();
  // Combined coefficient vector: sum_n c_n phi_n(a) / (k_n (k_n - k)).
  Eigen::VectorXcd combined = Eigen::VectorXcd::Zero(set.mesh.size());
  for (int m = 0; m < set.size(); ++m) {
    if (set.unnormalizable[m]) continue;
    const cplx kn = set.wave_numbers[m];
    combined += set.coefficients.col(m) * (set.boundary_values[m] / (kn * (kn - k)));
  }
  combined *= -kI * k * std::exp(-2.0 * kI * k * a);

  Eigen::VectorXcd u(static_cast<Eigen::Index>(r_grid.size()));
  for (std::size_t p = 0; p < r_grid.size(); ++p)
    u[static_cast<Eigen::Index>(p)] =
        (basis_row(set.mesh, r_grid[p]).cast<cplx>().transpose() * combined).value();
  if (const int flagged = set.flagged_count(); flagged > 0)
    throw accuracy_error("wave function skipped states with cancelling normalization",
                         std::vector<cplx>(u.begin(), u.end()), flagged);
  return u;
}

double siegert_residual(const SystemMatrices& sys, const LagrangeMesh& mesh, int l, cplx k,
                        const std::optional<Eigen::VectorXcd>& c) {
  const cplx boundary = log_derivative(l, k * mesh.radius());
  const Eigen::MatrixXcd q = assemble_C<cplx>(sys, boundary) - 0.5 * k * k * sys.overlap.cast<cplx>();
  if (c) return (q * *c).norm() / c->norm();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(q);
  return svd.singularValues().minCoeff();
}

PoleSearchResult siegert_pole_search(const SystemMatrices& sys, const LagrangeMesh& mesh, int l,
                                     cplx seed, NewtonOptions options) {
  const double a = mesh.radius();
  const Eigen::VectorXcd f = sys.surface.cast<cplx>();
  // 1 / (2a R_l(L_l)) vanishes where C(L_l) - E N is singular.
  const auto inverse_r = [&](cplx k) -> cplx {
    const cplx boundary = log_derivative(l, k * a);
    const Eigen::MatrixXcd q =
        assemble_C<cplx>(sys, boundary) - 0.5 * k * k * sys.overlap.cast<cplx>();
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(q);
    const cplx projected = (f.transpose() * lu.solve(f)).value();
    return 1.0 / projected;
  };
  const NewtonResult nr = complex_newton(inverse_r, seed, options);
  PoleSearchResult out{nr.root, nr.iterations, nr.converged, 0.0};
  out.smallest_singular_value = siegert_residual(sys, mesh, l, nr.root);
  return out;
}

PoleClassification classify_poles(const SiegertSet& set,
                                  const std::optional<std::vector<cplx>>& reference) {
  PoleClassification out;
  std::vector<cplx> targets;
  double tolerance;
  if (reference) {
    out.mode = ClassificationMode::reference;
    targets = *reference;
    tolerance = 1e-3;
  } else {
    out.mode = ClassificationMode::stability;
    const LagrangeMesh refined_mesh(set.mesh.size() + 5, set.mesh.radius());
    const SystemMatrices refined_sys = assemble_system(
        refined_mesh, set.system.potential, set.system.l, set.system.gauss_overlap_used);
    const SiegertSet refined =
        siegert_solve_l0(refined_sys, refined_mesh, SiegertOptions{.allow_long_range = true});
    targets.assign(refined.wave_numbers.begin(), refined.wave_numbers.end());
    tolerance = 1e-4;
  }

  for (int m = 0; m < set.size(); ++m) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const cplx t : targets) nearest = std::min(nearest, std::abs(t - set.wave_numbers[m]));
    out.criterion_value.push_back(nearest);
    (nearest <= tolerance ? out.physical : out.unconverged).push_back(m);
  }
  return out;
}

}  // namespace rmx
