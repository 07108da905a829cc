#pragma once

#include <functional>
#include <string>

namespace rmx {

/// Radial potential V(r) in units hbar = m = 1.
struct Potential {
  std::string name;
  std::function<double(double)> value;
  /// Decays faster than 1/r, so the free l = 0 asymptotics apply beyond a.
  bool short_range = true;

  double operator()(double r) const { return value(r); }
};

Potential zero_potential();
Potential constant_potential(double v0);

}  // namespace rmx
