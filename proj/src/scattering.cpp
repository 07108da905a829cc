#include "rmx/scattering.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rmx/errors.hpp"

namespace rmx {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kPoleRcond = 1e-14;

void require_l(int l) {
  if (l < 0) throw std::invalid_argument("partial wave must be non-negative");
  if (l > 1)
    throw not_implemented("asymptotic functions are only available for l = 0 and l = 1 (got " +
                          std::to_string(l) + ")");
}

struct Resolvent {
  Eigen::VectorXcd solution;  // [C(B) - E N]^{-1} f(a)
  cplx r_value;
};

Resolvent solve_resolvent(const ScatteringProblem& problem, cplx energy, cplx boundary) {
  const SystemMatrices& sys = problem.system();
  const Eigen::MatrixXcd m =
      assemble_C<cplx>(sys, boundary) - energy * sys.overlap.cast<cplx>();
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  if (!(lu.rcond() >= kPoleRcond))
    throw pole_error("energy is at a pole of the R matrix", energy);
  Resolvent out;
  out.solution = lu.solve(sys.surface.cast<cplx>());
  out.r_value = sys.surface.cast<cplx>().transpose() * out.solution;
  out.r_value /= 2.0 * problem.radius();
  return out;
}

cplx s_from_r(int l, cplx ka, cplx r_value, cplx boundary) {
  const AsymptoticPair w = asymptotics(l, ka);
  const cplx l_out = ka * w.derivative_out / w.value_out;
  const cplx l_in = ka * w.derivative_in / w.value_in;
  const cplx denominator = 1.0 - (l_out - boundary) * r_value;
  if (denominator == 0.0) throw pole_error("S matrix is singular at this wave number", ka);
  return w.value_in / w.value_out * (1.0 - (l_in - boundary) * r_value) / denominator;
}

}  // namespace

AsymptoticPair asymptotics(int l, cplx z) {
  require_l(l);
  const cplx e_out = std::exp(kI * z);
  const cplx e_in = std::exp(-kI * z);
  if (l == 0) return {e_in, e_out, kI * e_out, -kI * e_in};
  if (z == 0.0) throw std::domain_error("l = 1 waves are singular at z = 0");
  // O_1 = -i (1 - 1/(iz)) e^{iz} = (1/z - i) e^{iz}
  const cplx inv = 1.0 / z;
  return {(inv + kI) * e_in, (inv - kI) * e_out, (1.0 + kI * inv - inv * inv) * e_out,
          (1.0 - kI * inv - inv * inv) * e_in};
}

cplx log_derivative(int l, cplx ka) {
  if (l == 0) return kI * ka;
  const AsymptoticPair w = asymptotics(l, ka);
  if (w.value_out == 0.0) throw pole_error("outgoing wave vanishes at the channel radius", ka);
  return ka * w.derivative_out / w.value_out;
}

cplx log_derivative_in(int l, cplx ka) {
  if (l == 0) return -kI * ka;
  const AsymptoticPair w = asymptotics(l, ka);
  if (w.value_in == 0.0) throw pole_error("ingoing wave vanishes at the channel radius", ka);
  return ka * w.derivative_in / w.value_in;
}

double penetration_factor(int l, double ka) {
  return ((log_derivative(l, ka) - log_derivative_in(l, ka)) / (2.0 * kI)).real();
}

double hard_sphere_phase(int l, double ka) {
  // Continuous branch, vanishing at ka = 0.
  if (l == 0) return ka;
  if (l == 1) return ka - std::atan(ka);
  const AsymptoticPair w = asymptotics(l, ka);
  return 0.5 * std::arg(w.value_out / w.value_in);
}

ScatteringProblem::ScatteringProblem(LagrangeMesh mesh, Potential potential, int l,
                                     bool gauss_overlap)
    : mesh_(std::move(mesh)), potential_(std::move(potential)), l_(l) {
  if (l < 0) throw std::invalid_argument("partial wave must be non-negative");
  sys_ = assemble_system(mesh_, potential_, l_, gauss_overlap);
}

cplx r_matrix(const ScatteringProblem& problem, cplx energy, cplx boundary) {
  return solve_resolvent(problem, energy, boundary).r_value;
}

ScatteringResult s_matrix(const ScatteringProblem& problem, double energy, cplx boundary) {
  ScatteringResult result;
  result.energy = energy;
  result.k = wave_number(energy);
  result.boundary_param = boundary;
  result.r_value = r_matrix(problem, energy, boundary);
  result.s_value = s_from_r(problem.l(), result.k * problem.radius(), result.r_value, boundary);
  result.phase_shift_deg = phase_shift_deg(result.s_value);
  return result;
}

cplx s_matrix_at_k(const ScatteringProblem& problem, cplx k, cplx boundary) {
  const cplx r_value = r_matrix(problem, 0.5 * k * k, boundary);
  return s_from_r(problem.l(), k * problem.radius(), r_value, boundary);
}

ScatteringResult s_matrix_complexB(const ScatteringProblem& problem, double energy) {
  if (!(energy > 0.0)) throw std::invalid_argument("complex-B form needs a positive energy");
  const int l = problem.l();
  const double k = std::sqrt(2.0 * energy);
  const double ka = k * problem.radius();
  const cplx boundary = log_derivative(l, ka);

  ScatteringResult result;
  result.energy = energy;
  result.k = k;
  result.boundary_param = boundary;
  result.r_value = r_matrix(problem, energy, boundary);
  const double phi = hard_sphere_phase(l, ka);
  const double p = penetration_factor(l, ka);
  result.s_value = std::exp(-2.0 * kI * phi) * (1.0 + 2.0 * kI * p * result.r_value);
  result.phase_shift_deg = phase_shift_deg(result.s_value);
  return result;
}

Eigen::VectorXcd internal_wavefunction(const ScatteringProblem& problem, double energy,
                                       cplx boundary, std::span<const double> r_grid) {
  const Resolvent res = solve_resolvent(problem, energy, boundary);
  const cplx ka = wave_number(energy) * problem.radius();
  const cplx s = s_from_r(problem.l(), ka, res.r_value, boundary);
  const AsymptoticPair w = asymptotics(problem.l(), ka);
  const cplx amplitude = (w.value_in - s * w.value_out) / (2.0 * problem.radius() * res.r_value);
  const Eigen::VectorXcd coefficients = amplitude * res.solution;

  Eigen::VectorXcd u(static_cast<Eigen::Index>(r_grid.size()));
  for (std::size_t p = 0; p < r_grid.size(); ++p)
    u[static_cast<Eigen::Index>(p)] =
        basis_row(problem.mesh(), r_grid[p]).cast<cplx>().dot(coefficients);
  return u;
}

double phase_shift_deg(cplx s) {
  double arg = std::arg(s);
  if (arg < 0.0) arg += 2.0 * std::numbers::pi;
  double delta = 0.5 * arg * 180.0 / std::numbers::pi;
  // S = 1 - i eps would otherwise read as 180.
  if (delta >= 180.0 - 1e-9) delta -= 180.0;
  return delta;
}

double phase_difference_deg(double lhs, double rhs) {
  double d = std::fmod(lhs - rhs, 180.0);
  if (d > 90.0) d -= 180.0;
  if (d <= -90.0) d += 180.0;
  return d;
}

}  // namespace rmx
