#include "rmx/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "rmx/errors.hpp"
#include "rmx/oracles.hpp"
#include "rmx/scattering.hpp"
#include "rmx/siegert.hpp"

namespace rmx::cli {

namespace {

struct ParsedPotential {
  Potential potential;
  std::optional<BargmannParams> bargmann;
  bool zero = false;
};

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(value))
    throw usage_error("potential parameter " + key + ": not a number: '" + text + "'");
  return value;
}

std::map<std::string, double> parse_keys(const std::string& body,
                                         const std::vector<std::string>& allowed,
                                         const std::string& name) {
  std::map<std::string, double> out;
  if (body.empty()) return out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw usage_error("potential parameter '" + item + "' is not of the form key=value");
    const std::string key = item.substr(0, eq);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      std::string known;
      for (const auto& k : allowed) known += (known.empty() ? "" : ", ") + k;
      throw usage_error("unknown parameter '" + key + "' for potential " + name +
                        (known.empty() ? " (takes none)" : " (known: " + known + ")"));
    }
    if (out.count(key)) throw usage_error("parameter '" + key + "' given twice");
    out[key] = parse_number(key, item.substr(eq + 1));
  }
  return out;
}

ParsedPotential parse_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
  ParsedPotential out;
  if (name == "zero") {
    parse_keys(body, {}, name);
    out.potential = zero_potential();
    out.zero = true;
  } else if (name == "constant") {
    const auto keys = parse_keys(body, {"v0"}, name);
    const auto it = keys.find("v0");
    if (it == keys.end()) throw usage_error("potential constant needs v0=<value>");
    out.potential = constant_potential(it->second);
    out.zero = it->second == 0.0;
  } else if (name == "bargmann") {
    const auto keys = parse_keys(body, {"b", "c"}, name);
    BargmannParams p;
    try {
      p = BargmannParams(keys.count("b") ? keys.at("b") : 2.0, keys.count("c") ? keys.at("c") : -1.0);
    } catch (const std::invalid_argument& e) {
      throw usage_error(e.what());
    }
    out.potential = bargmann(p);
    out.bargmann = p;
  } else {
    throw usage_error("unknown potential '" + name + "' (available: zero, constant, bargmann)");
  }
  return out;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::vector<double> energies_or(const RunConfig& c, std::vector<double> fallback) {
  return c.energies.empty() ? fallback : c.energies;
}

void require_l0(const RunConfig& c, const char* what) {
  if (c.l != 0) throw usage_error(std::string(what) + " is only defined for l = 0");
}

BargmannParams require_bargmann(const ParsedPotential& p, const char* what) {
  if (!p.bargmann) throw usage_error(std::string(what) + " needs a bargmann potential");
  return *p.bargmann;
}

SiegertSet pseudostates(const Potential& v, int n, double a, bool gauss, bool long_range = false) {
  const LagrangeMesh mesh(n, a);
  return siegert_solve_l0(assemble_system(mesh, v, 0, gauss), mesh,
                          SiegertOptions{.allow_long_range = long_range});
}

// Imaginary axis first (Im descending), then by |Re|, Re > 0 before Re < 0.
bool pole_order(cplx lhs, cplx rhs) {
  const auto axis = [](cplx k) { return std::abs(k.real()) <= 1e-8 * std::max(1.0, std::abs(k)); };
  if (axis(lhs) != axis(rhs)) return axis(lhs);
  if (axis(lhs)) return lhs.imag() > rhs.imag();
  if ((lhs.real() > 0) != (rhs.real() > 0)) return lhs.real() > 0;
  return std::abs(lhs.real()) < std::abs(rhs.real());
}

// Bound states and the poles along Im k ~ -b that stand for the Jost-function
// pole; deeper states are discretization artefacts and are not tabulated.
std::vector<cplx> tabulated(const std::vector<cplx>& poles, double b) {
  std::vector<cplx> out;
  for (const cplx k : poles) {
    const bool axis = std::abs(k.real()) <= 1e-8 * std::max(1.0, std::abs(k));
    if (axis ? k.imag() > 0.0 : (k.real() > 0.0 && k.imag() > -1.5 * b)) out.push_back(k);
  }
  return out;
}

std::vector<cplx> truncated_roots(const BargmannParams& p, double a,
                                  const std::vector<const SiegertSet*>& seeds_from) {
  std::vector<cplx> seeds;
  for (const auto* set : seeds_from)
    for (const cplx k : set->wave_numbers) seeds.push_back(k);
  const int line = static_cast<int>(seeds.size());
  for (int j = 1; j <= line; ++j) seeds.emplace_back(j * std::numbers::pi / a, -p.b);
  auto roots = find_truncated_poles(p, a, seeds).roots;
  std::sort(roots.begin(), roots.end(), pole_order);
  return roots;
}

std::string render_phaseshift(const RunConfig& c, const ParsedPotential& pot) {
  const ScatteringProblem problem(LagrangeMesh(c.n_points, c.a), pot.potential, c.l,
                                  c.gauss_overlap);
  std::optional<SiegertSet> set;
  if (c.l == 0 && pot.potential.short_range)
    set = pseudostates(pot.potential, c.n_points, c.a, c.gauss_overlap);

  std::ostringstream out;
  out << "E,k,delta_deg_rmatrix,delta_deg_product,delta_deg_exact\n";
  for (const double e : energies_or(c, {0.1, 1.0, 10.0})) {
    const ScatteringResult r = s_matrix(problem, e);
    out << num(e) << ',' << num(r.k.real()) << ',' << num(r.phase_shift_deg) << ',';
    if (set) out << num(phase_shift_deg(s_matrix_product(*set, r.k.real())));
    out << ',';
    if (pot.bargmann && c.l == 0) out << num(bargmann_phase_shift_deg(*pot.bargmann, e));
    else if (pot.zero) out << num(0.0);
    out << '\n';
  }
  return out.str();
}

std::string render_poles(const RunConfig& c, const ParsedPotential& pot) {
  require_l0(c, "poles");
  const SiegertSet set = pseudostates(pot.potential, c.n_points, c.a, c.gauss_overlap);
  std::optional<std::vector<cplx>> reference;
  if (pot.bargmann) reference = truncated_roots(*pot.bargmann, c.a, {&set});
  const PoleClassification cls = classify_poles(set, reference);

  std::vector<bool> physical(set.size(), false);
  for (const int m : cls.physical) physical[m] = true;
  std::ostringstream out;
  out << "n,re_k,im_k,residual,class\n";
  for (int m = 0; m < set.size(); ++m) {
    const cplx k = set.wave_numbers[m];
    const Eigen::VectorXcd col = set.coefficients.col(m);
    const double res = siegert_residual(set.system, set.mesh, 0, k, col);
    out << m + 1 << ',' << num(k.real()) << ',' << num(k.imag()) << ',' << num(res) << ','
        << (physical[m] ? "physical" : "unphysical") << '\n';
  }
  return out.str();
}

std::string render_wavefunction(const RunConfig& c, const ParsedPotential& pot) {
  if (c.energies.size() > 1) throw usage_error("wavefunction takes a single --E");
  const double e = c.energies.empty() ? 1.0 : c.energies.front();
  const LagrangeMesh mesh(c.n_points, c.a);
  const ScatteringProblem problem(mesh, pot.potential, c.l, c.gauss_overlap);

  std::vector<double> grid(101);
  for (int i = 0; i <= 100; ++i) grid[i] = c.a * i / 100.0;

  const Eigen::VectorXcd u_r = internal_wavefunction(problem, e, 0.0, grid);
  // The pseudostates are always the l = 0 outgoing ones; with a centrifugal
  // term they only span the solution, so allow it explicitly.
  const SiegertSet set = siegert_normalize(
      siegert_solve_l0(problem.system(), mesh, SiegertOptions{.allow_long_range = c.l != 0}));
  const double k = std::sqrt(2.0 * e);
  const Eigen::VectorXcd u_s =
      siegert_wavefunction(set, k, grid) * std::exp(cplx(0.0, k * c.a));

  std::ostringstream out;
  out << "r,re_u_rmatrix,im_u_rmatrix,re_u_siegert,im_u_siegert\n";
  for (int i = 0; i <= 100; ++i)
    out << num(grid[i]) << ',' << num(u_r[i].real()) << ',' << num(u_r[i].imag()) << ','
        << num(u_s[i].real()) << ',' << num(u_s[i].imag()) << '\n';
  return out.str();
}

std::string render_table2(const RunConfig& c, const ParsedPotential& pot) {
  require_l0(c, "table2");
  const BargmannParams p = require_bargmann(pot, "table2");
  const SiegertSet exact_overlap = pseudostates(pot.potential, c.n_points, c.a, false);
  const SiegertSet gauss = pseudostates(pot.potential, c.n_points, c.a, true);

  const auto wn = [](const SiegertSet& s) {
    return std::vector<cplx>(s.wave_numbers.begin(), s.wave_numbers.end());
  };
  const std::vector<cplx> exact = tabulated(truncated_roots(p, c.a, {&gauss, &exact_overlap}), p.b);
  const std::vector<cplx> exact_ov = tabulated(wn(exact_overlap), p.b);
  const std::vector<cplx> gauss_ov = tabulated(wn(gauss), p.b);

  const std::size_t rows = std::min({exact.size(), exact_ov.size(), gauss_ov.size()});
  std::ostringstream out;
  out << "row,exact_re,exact_im,exact_overlap_re,exact_overlap_im,gauss_overlap_re,gauss_overlap_im\n";
  for (std::size_t n = 0; n < rows; ++n)
    out << n + 1 << ',' << num(exact[n].real()) << ',' << num(exact[n].imag()) << ','
        << num(exact_ov[n].real()) << ',' << num(exact_ov[n].imag()) << ',' << num(gauss_ov[n].real())
        << ',' << num(gauss_ov[n].imag()) << '\n';
  return out.str();
}

std::string render_table3(const RunConfig& c, const ParsedPotential& pot) {
  require_l0(c, "table3");
  const BargmannParams p = require_bargmann(pot, "table3");
  const std::vector<double> radii = c.a_given ? std::vector<double>{c.a} : std::vector{5.0, 6.0};
  const std::vector<int> sizes = c.n_given ? std::vector<int>{c.n_points} : std::vector{25, 40};

  std::ostringstream out;
  out << "E,exact,a,N,siegert_exact_overlap,siegert_gauss_overlap,rmatrix\n";
  const std::vector<double> energies = energies_or(c, {0.1, 1.0, 10.0});
  for (const double e : energies) {
    const double k = std::sqrt(2.0 * e);
    for (const double a : radii)
      for (const int n : sizes) {
        const SiegertSet s36 = pseudostates(pot.potential, n, a, false);
        const SiegertSet s37 = pseudostates(pot.potential, n, a, true);
        const ScatteringProblem problem(LagrangeMesh(n, a), pot.potential, 0, true);
        out << num(e) << ',' << num(bargmann_phase_shift_deg(p, e)) << ',' << num(a) << ','
            << n << ',' << num(phase_shift_deg(s_matrix_product(s36, k))) << ','
            << num(phase_shift_deg(s_matrix_product(s37, k))) << ','
            << num(s_matrix(problem, e).phase_shift_deg) << '\n';
      }
  }
  return out.str();
}

std::string render_fig1(const RunConfig& c, const ParsedPotential& pot) {
  require_l0(c, "fig1");
  const BargmannParams p = require_bargmann(pot, "fig1");
  const SiegertSet exact_overlap = pseudostates(pot.potential, c.n_points, c.a, false);
  const SiegertSet gauss = pseudostates(pot.potential, c.n_points, c.a, true);

  // Roots come in pairs k, -conj(k); seed with both halves and keep all.
  std::ostringstream out;
  out << "re_k,im_k,series\n";
  for (const cplx k : truncated_roots(p, c.a, {&gauss, &exact_overlap}))
    out << num(k.real()) << ',' << num(k.imag()) << ",exact\n";
  for (const cplx k : exact_overlap.wave_numbers)
    out << num(k.real()) << ',' << num(k.imag()) << ",exact_overlap\n";
  for (const cplx k : gauss.wave_numbers)
    out << num(k.real()) << ',' << num(k.imag()) << ",gauss_overlap\n";
  return out.str();
}

struct CheckRow {
  std::string name;
  double value;
  double tolerance;
  bool pass() const { return std::isfinite(value) && value < tolerance; }
};

std::vector<CheckRow> run_checks(const RunConfig& c, const ParsedPotential& pot) {
  const LagrangeMesh mesh(c.n_points, c.a);
  const ScatteringProblem problem(mesh, pot.potential, c.l, c.gauss_overlap);
  std::vector<double> energies = c.energies;
  if (energies.empty())
    for (int i = 0; i < 50; ++i) energies.push_back(0.05 + i * (10.0 - 0.05) / 49.0);

  std::vector<CheckRow> rows;
  double unitarity = 0.0;
  double complex_b = 0.0;
  for (const double e : energies) {
    const ScatteringResult r = s_matrix(problem, e);
    unitarity = std::max(unitarity, std::abs(std::abs(r.s_value) - 1.0));
    complex_b = std::max(complex_b, std::abs(s_matrix_complexB(problem, e).s_value - r.s_value));
  }
  rows.push_back({"unitarity", unitarity, 1e-10});
  rows.push_back({"complex_boundary_form", complex_b, 1e-9});

  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> draw(-5.0, 5.0);
  double b_inv = 0.0;
  double r_shift = 0.0;
  const double e_probe = energies[energies.size() / 2];
  const cplx s0 = s_matrix(problem, e_probe).s_value;
  const cplx r0 = r_matrix(problem, e_probe, 0.0);
  for (int i = 0; i < 20; ++i) {
    const cplx b(draw(rng), draw(rng));
    b_inv = std::max(b_inv, std::abs(s_matrix(problem, e_probe, b).s_value - s0));
    const cplx shift = 1.0 / r0 - 1.0 / r_matrix(problem, e_probe, b);
    r_shift = std::max(r_shift, std::abs(shift - b) / std::abs(b));
  }
  rows.push_back({"boundary_invariance", b_inv, 1e-9});
  rows.push_back({"r_matrix_shift", r_shift, 1e-9});

  if (c.l == 0 && pot.potential.short_range) {
    SiegertSet set = siegert_solve_l0(problem.system(), mesh);
    double equiv = 0.0;
    for (const double e : energies)
      equiv = std::max(equiv, std::abs(s_matrix_product(set, std::sqrt(2.0 * e)) -
                                       s_matrix(problem, e).s_value));
    rows.push_back({"product_equals_rmatrix", equiv, 1e-8});

    double symmetry = 0.0;
    double residual = 0.0;
    for (int m = 0; m < set.size(); ++m) {
      const cplx k = set.wave_numbers[m];
      double nearest = std::numeric_limits<double>::infinity();
      for (const cplx q : set.wave_numbers) nearest = std::min(nearest, std::abs(q + std::conj(k)));
      symmetry = std::max(symmetry, nearest);
      const Eigen::VectorXcd col = set.coefficients.col(m);
      residual = std::max(residual, siegert_residual(set.system, mesh, 0, k, col));
    }
    rows.push_back({"pole_reflection_symmetry", symmetry, 1e-6});
    rows.push_back({"pole_residual", residual, 1e-8});

    set = siegert_normalize(std::move(set));
    double sum_gap = 0.0;
    if (set.flagged_count() == 0)
      for (const double e : energies) {
        const double k = std::sqrt(2.0 * e);
        sum_gap = std::max(sum_gap, std::abs(s_matrix_sum(set, k) - s_matrix_product(set, k)));
      }
    rows.push_back({"sum_matches_product_or_flagged", sum_gap, 1e-4});
  }

  if (pot.bargmann && c.l == 0) {
    const BargmannParams p = *pot.bargmann;
    const double mirror = p.b * p.b * p.c * p.c / 4.0;
    double analytic = 0.0;
    double computed = 0.0;
    const auto [lo, hi] = std::minmax_element(energies.begin(), energies.end());
    for (const double e : energies) {
      if (mirror / e < *lo || mirror / e > *hi) continue;
      analytic = std::max(analytic, std::abs(bargmann_phase_shift_deg(p, e) +
                                             bargmann_phase_shift_deg(p, mirror / e) - 180.0));
      const double d = s_matrix(problem, e).phase_shift_deg +
                       s_matrix(problem, mirror / e).phase_shift_deg;
      computed = std::max(computed, std::abs(phase_difference_deg(d, 180.0)));
    }
    rows.push_back({"bargmann_reflection_exact", analytic, 1e-10});
    rows.push_back({"bargmann_reflection_computed", computed, 1e-6});
  }
  return rows;
}

std::string render_check(RunConfig c, const ParsedPotential& pot, int& failures) {
  // The reflection check compares against the exact phase shift, so by
  // default run on a mesh converged to better than its tolerance.
  if (!c.a_given) c.a = 6.0;
  if (!c.n_given) c.n_points = 40;
  const std::vector<CheckRow> rows = run_checks(c, pot);
  std::ostringstream out;
  out << "check,value,tolerance,status\n";
  failures = 0;
  for (const auto& r : rows) {
    failures += !r.pass();
    out << r.name << ',' << num(r.value) << ',' << num(r.tolerance) << ','
        << (r.pass() ? "pass" : "fail") << '\n';
  }
  return out.str();
}

std::string render_impl(const RunConfig& config, int& failures) {
  if (config.n_points < 1) throw usage_error("--n must be at least 1");
  if (!(config.a > 0.0) || !std::isfinite(config.a)) throw usage_error("--a must be positive");
  if (config.l < 0) throw usage_error("--l must be non-negative");
  for (const double e : config.energies)
    if (!(e > 0.0) || !std::isfinite(e)) throw usage_error("--E values must be positive");

  const ParsedPotential pot = parse_spec(config.potential_spec);
  failures = 0;
  switch (config.command) {
    case Command::phaseshift: return render_phaseshift(config, pot);
    case Command::poles: return render_poles(config, pot);
    case Command::wavefunction: return render_wavefunction(config, pot);
    case Command::table2: return render_table2(config, pot);
    case Command::table3: return render_table3(config, pot);
    case Command::fig1: return render_fig1(config, pot);
    case Command::check: return render_check(config, pot, failures);
  }
  throw usage_error("unhandled command");
}

}  // namespace

Potential parse_potential(const std::string& spec) { return parse_spec(spec).potential; }

Command parse_command(const std::string& name) {
  static const std::map<std::string, Command> table{
      {"phaseshift", Command::phaseshift}, {"poles", Command::poles},
      {"wavefunction", Command::wavefunction}, {"table2", Command::table2},
      {"table3", Command::table3}, {"fig1", Command::fig1}, {"check", Command::check}};
  const auto it = table.find(name);
  if (it == table.end())
    throw usage_error("unknown command '" + name +
                      "' (available: phaseshift, poles, wavefunction, table2, table3, fig1, check)");
  return it->second;
}

std::string render(const RunConfig& config) {
  int failures = 0;
  return render_impl(config, failures);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::string text;
  int failures = 0;
  try {
    text = render_impl(config, failures);
  } catch (const usage_error& e) {
    err << "error: " << e.what() << '\n';
    return usage_failure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return usage_failure;
  } catch (const not_implemented& e) {
    err << "error: " << e.what() << '\n';
    return usage_failure;
  } catch (const accuracy_error& e) {
    err << "numerical failure: " << e.what() << " (" << e.flagged_states
        << " states flagged; try a smaller --n)\n";
    return numerical_failure;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return numerical_failure;
  }

  if (config.output_path.empty()) {
    out << text;
  } else {
    const std::filesystem::path path(config.output_path);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (file) file << text;
    if (!file || !file.flush()) {
      file.close();
      std::error_code ec;
      std::filesystem::remove(path, ec);
      err << "error: cannot write " << config.output_path << '\n';
      return numerical_failure;
    }
  }
  if (failures > 0) {
    err << failures << " check(s) failed\n";
    return numerical_failure;
  }
  return success;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lagrange-mesh R-matrix and Siegert pseudostate scattering"};
  RunConfig config;
  std::string command;
  app.add_option("command", command,
                 "phaseshift | poles | wavefunction | table2 | table3 | fig1 | check")
      ->required();
  app.add_option("potential", config.potential_spec,
                 "zero | constant:v0=<V> | bargmann:b=<b>,c=<c>")
      ->capture_default_str();
  auto* a_opt = app.add_option("--a", config.a, "channel radius")->capture_default_str();
  auto* n_opt = app.add_option("--n", config.n_points, "mesh size")->capture_default_str();
  app.add_option("--l", config.l, "partial wave")->capture_default_str();
  app.add_option("--E", config.energies, "energy (repeatable)")->allow_extra_args(false);
  app.add_option("--gauss-overlap", config.gauss_overlap, "use the identity overlap")
      ->capture_default_str();
  app.add_option("--out", config.output_path, "output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
    config.command = parse_command(command);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return success;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return usage_failure;
  } catch (const usage_error& e) {
    err << "error: " << e.what() << '\n';
    return usage_failure;
  }
  config.a_given = a_opt->count() > 0;
  config.n_given = n_opt->count() > 0;
  return run(config, out, err);
}

}  // namespace rmx::cli
