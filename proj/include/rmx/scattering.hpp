#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>

#include "rmx/matrices.hpp"
#include "rmx/mesh.hpp"
#include "rmx/potential.hpp"

namespace rmx {

using cplx = std::complex<double>;

/// Free ingoing/outgoing waves and derivatives at z = kr.
struct AsymptoticPair {
  cplx value_in;
  cplx value_out;
  cplx derivative_out;
  cplx derivative_in;
};

/// I_l and O_l for l = 0 and the free l = 1 wave. Other l are not available.
AsymptoticPair asymptotics(int l, cplx z);

/// L_l = ka O_l'(ka) / O_l(ka).
cplx log_derivative(int l, cplx ka);
/// ka I_l'(ka) / I_l(ka); equals conj(L_l) for real k and continues it
/// analytically elsewhere.
cplx log_derivative_in(int l, cplx ka);
/// P_l = (L_l - L_l^*) / 2i.
double penetration_factor(int l, double ka);
/// Half the phase of O_l / I_l (hard-sphere phase) on the branch that
/// vanishes at ka = 0, real ka only.
double hard_sphere_phase(int l, double ka);

/// Principal-branch k = sqrt(2E).
inline cplx wave_number(cplx energy) { return std::sqrt(2.0 * energy); }

/// One partial wave of one potential on one mesh. Immutable.
class ScatteringProblem {
 public:
  ScatteringProblem(LagrangeMesh mesh, Potential potential, int l, bool gauss_overlap = true);

  int l() const { return l_; }
  const LagrangeMesh& mesh() const { return mesh_; }
  const Potential& potential() const { return potential_; }
  const SystemMatrices& system() const { return sys_; }
  double radius() const { return mesh_.radius(); }

 private:
  LagrangeMesh mesh_;
  Potential potential_;
  int l_;
  SystemMatrices sys_;
};

struct ScatteringResult {
  cplx k;
  cplx energy;
  cplx r_value;
  cplx s_value;
  /// delta_l in degrees, see phase_shift_deg.
  double phase_shift_deg = 0.0;
  cplx boundary_param;
};

/// R_l(B) = (2a)^{-1} f(a)^T [C(B) - E N]^{-1} f(a). Throws pole_error when
/// the system is numerically singular.
cplx r_matrix(const ScatteringProblem& problem, cplx energy, cplx boundary);

/// S_l through the R matrix at boundary parameter B.
ScatteringResult s_matrix(const ScatteringProblem& problem, double energy, cplx boundary = 0.0);

/// Same route at a complex wave number (pole studies); returns S only.
cplx s_matrix_at_k(const ScatteringProblem& problem, cplx k, cplx boundary = 0.0);

/// S_l = exp(-2i phi_l) [1 + 2i P_l R_l(L_l)], the B = L_l form.
ScatteringResult s_matrix_complexB(const ScatteringProblem& problem, double energy);

/// Internal wave function u_l(r), normalized to I_l - S_l O_l outside.
Eigen::VectorXcd internal_wavefunction(const ScatteringProblem& problem, double energy,
                                       cplx boundary, std::span<const double> r_grid);

/// 1/2 arg(S) in degrees, folded into [-1e-9, 180 - 1e-9).
double phase_shift_deg(cplx s);
/// Signed difference of two phase shifts modulo 180 degrees, in (-90, 90].
double phase_difference_deg(double lhs, double rhs);

}  // namespace rmx
