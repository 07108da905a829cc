#include "rmx/oracles.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rmx/errors.hpp"
#include "rmx/newton.hpp"
#include "rmx/scattering.hpp"

namespace rmx {

namespace {

constexpr cplx kI{0.0, 1.0};

// sech^2(x) for x >= 0 without overflowing cosh.
double sech_squared(double x) {
  const double e = std::exp(-2.0 * std::abs(x));
  return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

}  // namespace

BargmannParams::BargmannParams(double b_, double c_) : b(b_), c(c_) {
  if (!(b > 0.0)) throw std::invalid_argument("Bargmann b must be positive");
  if (b + c == 0.0) throw std::invalid_argument("Bargmann b + c must not vanish");
}

double bargmann_potential(const BargmannParams& p, double r) {
  const double beta = p.beta();
  const double e = std::exp(-2.0 * p.b * r);
  const double d = 1.0 + beta * e;
  return -4.0 * p.b * p.b * beta * e / (d * d);
}

Potential bargmann(const BargmannParams& p) {
  std::ostringstream name;
  name << "bargmann:b=" << p.b << ",c=" << p.c;
  return {name.str(), [p](double r) { return bargmann_potential(p, r); }, true};
}

cplx bargmann_s_exact(const BargmannParams& p, cplx k) {
  const cplx denominator = (k - kI * p.b) * (k + kI * p.c);
  if (denominator == 0.0) throw pole_error("wave number is a pole of the Bargmann S matrix", k);
  return (k + kI * p.b) * (k - kI * p.c) / denominator;
}

double bargmann_phase_shift_deg(const BargmannParams& p, double energy) {
  return phase_shift_deg(bargmann_s_exact(p, std::sqrt(2.0 * energy)));
}

cplx bargmann_truncated_wf(const BargmannParams& p, cplx k, double r) {
  const double b = p.b;
  const double c = p.c;
  const double t = std::tanh(b * r);
  const double shape = b + c * t;
  const cplx k2b2 = k * k + b * b;
  if (shape == 0.0 || k2b2 == 0.0)
    throw std::domain_error("truncated Bargmann solution has a singular denominator");
  const cplx s = std::sin(k * r);
  return s + (b * b - c * c) / k2b2 * (k * t * std::cos(k * r) - b * s) / shape;
}

cplx bargmann_truncated_k_residual(const BargmannParams& p, double a, cplx k,
                                   TruncationForm form) {
  const double b = p.b;
  const double c = p.c;
  const double b2c2 = b * b - c * c;
  if (b2c2 == 0.0) throw std::domain_error("truncated condition is degenerate for |c| = b");
  const double tba = std::tanh(b * a);
  const cplx first_tanh = (form == TruncationForm::corrected) ? cplx(tba) : std::tanh(k * a);

  const cplx lhs = b * b * (c + kI * k) * sech_squared(b * a) * std::sin(k * a);
  const double shape = b + c * tba;
  const cplx bracket = (b * b + kI * k * c) * first_tanh * first_tanh + b * (c + kI * k) * tba -
                       (k * k + b * b) / b2c2 * shape * shape;
  const cplx rhs = k * bracket * std::exp(-kI * k * a);
  return lhs - rhs;
}

TruncatedPoles find_truncated_poles(const BargmannParams& p, double a, std::span<const cplx> seeds,
                                    TruncationForm form) {
  TruncatedPoles out;
  const auto f = [&](cplx k) { return bargmann_truncated_k_residual(p, a, k, form); };
  for (const cplx seed : seeds) {
    const NewtonResult nr = complex_newton(f, seed);
    if (!nr.converged) {
      out.failures.push_back({seed, nr.root, "Newton iteration did not converge"});
      continue;
    }
    bool duplicate = false;
    for (const cplx known : out.roots) {
      if (std::abs(known - nr.root) <= 1e-8) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) out.roots.push_back(nr.root);
  }
  return out;
}

double free_l1_wave(double k, double r) {
  const double x = k * r;
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return x2 / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0));
  }
  return std::sin(x) / x - std::cos(x);
}

}  // namespace rmx
