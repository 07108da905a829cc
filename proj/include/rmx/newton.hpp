#pragma once

#include <cmath>
#include <complex>
#include <algorithm>

namespace rmx {

struct NewtonOptions {
  double tolerance = 1e-12;     ///< stop when |dz| falls below this
  int max_iterations = 200;
  double relative_step = 1e-7;  ///< central-difference step, relative to max(1, |z|)
};

struct NewtonResult {
  std::complex<double> root;
  int iterations = 0;
  bool converged = false;
};

/// Newton iteration for an analytic f: C -> C with a central-difference
/// derivative along the real axis.
template <typename Function>
NewtonResult complex_newton(Function&& f, std::complex<double> seed, NewtonOptions opts = {}) {
  NewtonResult result{seed, 0, false};
  std::complex<double> z = seed;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const double h = opts.relative_step * std::max(1.0, std::abs(z));
    const std::complex<double> value = f(z);
    if (value == 0.0) {
      result = {z, it, true};
      return result;
    }
    const std::complex<double> slope = (f(z + h) - f(z - h)) / (2.0 * h);
    if (slope == 0.0 || !std::isfinite(std::abs(slope))) break;
    const std::complex<double> step = value / slope;
    z -= step;
    result.root = z;
    result.iterations = it;
    if (!std::isfinite(std::abs(z))) break;
    if (std::abs(step) < opts.tolerance) {
      result.converged = true;
      return result;
    }
  }
  return result;
}

}  // namespace rmx
