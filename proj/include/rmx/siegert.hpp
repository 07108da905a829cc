#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "rmx/matrices.hpp"
#include "rmx/mesh.hpp"
#include "rmx/newton.hpp"

namespace rmx {

using cplx = std::complex<double>;

/// The 2N purely-outgoing pseudostates of an l = 0 problem on a mesh.
///
/// Column n of `coefficients` expands state n on the Lagrange basis;
/// boundary_values[n] is that state at r = a. States are ordered: imaginary
/// axis first (Im k descending), then Re k > 0 and Re k < 0 by increasing
/// |Re k|.
struct SiegertSet {
  Eigen::VectorXcd wave_numbers;
  Eigen::MatrixXcd coefficients;
  Eigen::VectorXcd boundary_values;
  /// Per state: normalization integral nearly cancels, state is unusable in
  /// the pole sums.
  std::vector<bool> unnormalizable;
  bool normalized = false;
  LagrangeMesh mesh;
  SystemMatrices system;

  int size() const { return static_cast<int>(wave_numbers.size()); }
  bool gauss_overlap_used() const { return system.gauss_overlap_used; }
  int flagged_count() const;
};

struct SiegertOptions {
  /// Run the quadratic (B = ika) algorithm even when the system has l > 0
  /// or a long-range potential. The wave numbers are then not S-matrix poles
  /// but the states still span the scattering solution.
  bool allow_long_range = false;
  /// Solve the linearized problem in long double. The pole positions are
  /// badly conditioned (errors ~1e-5 in double at N = 25, a = 5); extended
  /// precision brings them to ~1e-8 of the exact discrete eigenvalues.
  bool extended_precision = false;
  /// Diagonal balancing of the companion matrix before the QR iteration.
  bool balance = true;
};

SiegertSet siegert_solve_l0(const SystemMatrices& sys, const LagrangeMesh& mesh,
                            SiegertOptions options = {});

/// Scales each state so that c^T N c + i phi(a)^2 / (2k) = 1.
///
/// A state is flagged unnormalizable when the two terms cancel to below
/// `cancellation` relative to their magnitudes; its eigenvector then carries
/// too few significant digits for the pole sums.
SiegertSet siegert_normalize(SiegertSet set, double cancellation = 1e-5);

/// S_0(k) = exp(-2ika) prod_n (k_n + k) / (k_n - k).
cplx s_matrix_product(const SiegertSet& set, cplx k);

/// S_0(k) = exp(-2ika) [1 + ik sum_n phi_n(a)^2 / (k_n (k_n - k))].
/// Throws accuracy_error (with the partial sum) if any state is flagged.
cplx s_matrix_sum(const SiegertSet& set, double k);

/// Internal wave function expanded on the pseudostates. Its value at r = a
/// is exp(-ika) [I_0(ka) - S O_0(ka)], i.e. the R-matrix wave function times
/// the constant phase exp(-ika). Throws accuracy_error if any state is flagged.
Eigen::VectorXcd siegert_wavefunction(const SiegertSet& set, double k,
                                      std::span<const double> r_grid);

/// |[C(L_l(ka)) - k^2/2 N] c| / |c|, or the smallest singular value of the
/// bracket when no vector is given.
double siegert_residual(const SystemMatrices& sys, const LagrangeMesh& mesh, int l, cplx k,
                        const std::optional<Eigen::VectorXcd>& c = std::nullopt);

struct PoleSearchResult {
  cplx k;
  int iterations = 0;
  bool converged = false;
  double smallest_singular_value = 0.0;
};

/// Newton search for one zero of 1 / R_l(L_l) in the complex k plane, i.e.
/// a Siegert state of any partial wave with implemented asymptotics.
/// 1 / R is flat near these poles and the iterates settle into ~1e-8 of
/// roundoff noise, hence the default step tolerance.
PoleSearchResult siegert_pole_search(const SystemMatrices& sys, const LagrangeMesh& mesh, int l,
                                     cplx seed, NewtonOptions options = {.tolerance = 1e-7});

enum class ClassificationMode { reference, stability };

struct PoleClassification {
  ClassificationMode mode = ClassificationMode::reference;
  std::vector<int> physical;
  std::vector<int> unconverged;
  /// Distance to the nearest reference root (or to the nearest pole of the
  /// refined run) for every state.
  std::vector<double> criterion_value;
};

/// With reference roots: within 1e-3 of a root is physical. Without: the
/// set is recomputed with N + 5 points and poles stable to 1e-4 are
/// physical.
PoleClassification classify_poles(const SiegertSet& set,
                                  const std::optional<std::vector<cplx>>& reference);

}  // namespace rmx
