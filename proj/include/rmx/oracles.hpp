#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "rmx/potential.hpp"

namespace rmx {

using cplx = std::complex<double>;

/// Bargmann potential with Jost function (k + ic)/(k + ib).
/// c < 0 gives one bound state at k = -ic, c > 0 a virtual state.
struct BargmannParams {
  double b = 2.0;
  double c = -1.0;

  BargmannParams() = default;
  BargmannParams(double b_, double c_);
  double beta() const { return (b - c) / (b + c); }
};

double bargmann_potential(const BargmannParams& p, double r);
Potential bargmann(const BargmannParams& p);

/// S_0(k) = (k + ib)(k - ic) / [(k - ib)(k + ic)].
cplx bargmann_s_exact(const BargmannParams& p, cplx k);
/// Exact phase shift in degrees, [0, 180).
double bargmann_phase_shift_deg(const BargmannParams& p, double energy);

/// Unnormalized regular solution of the truncated potential at wave number k.
cplx bargmann_truncated_wf(const BargmannParams& p, cplx k, double r);

/// Argument of the squared tanh in the first bracket term of the truncated
/// Siegert condition. Only tanh^2(ba) agrees with the outgoing condition on
/// bargmann_truncated_wf; tanh^2(ka) is kept for comparison.
enum class TruncationForm { corrected, tanh_ka };

/// LHS - RHS of the truncated-potential Siegert condition.
cplx bargmann_truncated_k_residual(const BargmannParams& p, double a, cplx k,
                                   TruncationForm form = TruncationForm::corrected);

struct RootSearchFailure {
  cplx seed;
  cplx last_iterate;
  std::string reason;
};

struct TruncatedPoles {
  std::vector<cplx> roots;
  std::vector<RootSearchFailure> failures;
};

/// Newton on the truncated condition from each seed; duplicates (closer
/// than 1e-8) are merged, non-convergent seeds reported in failures.
TruncatedPoles find_truncated_poles(const BargmannParams& p, double a, std::span<const cplx> seeds,
                                    TruncationForm form = TruncationForm::corrected);

/// Riccati-Bessel u_1(kr) = sin(kr)/(kr) - cos(kr).
double free_l1_wave(double k, double r);

}  // namespace rmx
