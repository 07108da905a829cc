#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmx/potential.hpp"

namespace rmx::cli {

enum class Command { phaseshift, poles, wavefunction, table2, table3, fig1, check };

struct RunConfig {
  Command command = Command::phaseshift;
  std::string potential_spec = "bargmann:b=2,c=-1";
  int l = 0;
  double a = 5.0;
  int n_points = 25;
  std::vector<double> energies;
  bool gauss_overlap = true;
  std::string output_path;  ///< empty: write to the output stream
  bool a_given = false;
  bool n_given = false;
};

class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode : int { success = 0, usage_failure = 1, numerical_failure = 2 };

/// Parses `name:key=val,...`. Known names: zero, constant (v0), bargmann (b, c).
Potential parse_potential(const std::string& spec);

Command parse_command(const std::string& name);

/// Produces the CSV text for a configuration. Throws on failure.
std::string render(const RunConfig& config);

/// Renders and writes the CSV (to config.output_path, or `out` if empty).
/// Nothing is left on disk when rendering fails.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command-line entry point.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace rmx::cli
