#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmx {

/// Base for every numerical failure raised by the solver (as opposed to
/// plain argument validation, which uses the std exceptions directly).
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class singular_potential : public numerical_error {
 public:
  explicit singular_potential(double r)
      : numerical_error("potential is not finite at r = " + std::to_string(r)), radius(r) {}
  double radius;
};

/// Raised when E sits on a pole of the R matrix (C(B) - E N singular).
class pole_error : public numerical_error {
 public:
  pole_error(const std::string& what, std::complex<double> at)
      : numerical_error(what), location(at) {}
  std::complex<double> location;
};

class singular_update : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

class solver_error : public numerical_error {
 public:
  solver_error(const std::string& what, long dimension)
      : numerical_error(what + " (dimension " + std::to_string(dimension) + ")"),
        subspace_dimension(dimension) {}
  long subspace_dimension;
};

/// The pole-sum route was asked to use states whose normalization is
/// numerically meaningless. The partial sum over the usable states is kept.
class accuracy_error : public numerical_error {
 public:
  accuracy_error(const std::string& what, std::vector<std::complex<double>> partial, int flagged)
      : numerical_error(what), partial_result(std::move(partial)), flagged_states(flagged) {}
  /// Result computed from the usable states only.
  std::vector<std::complex<double>> partial_result;
  int flagged_states;
};

class not_implemented : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace rmx
