#include "rmx/potential.hpp"

#include <sstream>

namespace rmx {

Potential zero_potential() { return {"zero", [](double) { return 0.0; }, true}; }

Potential constant_potential(double v0) {
  std::ostringstream name;
  name << "constant:v0=" << v0;
  // A constant is not short-range, but inside [0, a] it is just a shift.
  return {name.str(), [v0](double) { return v0; }, v0 == 0.0};
}

}  // namespace rmx
