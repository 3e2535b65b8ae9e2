#ifndef VBAND_SCENARIO_HPP_
#define VBAND_SCENARIO_HPP_

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vband/coupling.hpp"
#include "vband/field_init.hpp"
#include "vband/fluid.hpp"
#include "vband/mesh.hpp"

namespace vband {

/// Closed time interval used for rate fits.
struct Window {
  double begin = 0.0;
  double end = 0.0;
};

/// Fully resolved run configuration.
struct ScenarioConfig {
  std::string scenario = "weak_landau";
  double x_min = 0.0;
  double x_max = 1.0;
  double v_min = -1.0;
  double v_max = 1.0;
  int n_elements = 40;
  int n_bands = 80;
  /// Polynomial degree of the spatial DG space; n_basis = order + 1.
  int order = 3;
  double cfl = 0.09;
  double t_final = 1.0;
  double alpha = 0.0;
  double wave_number = 0.5;
  double theta0 = 1.0;
  double rho0 = 1.0;
  bool forcing = false;
  BoundaryKind boundary = BoundaryKind::kPeriodic;
  Gauge gauge = Gauge::kZeroMean;
  double gauge_anchor = 0.0;
  std::vector<double> snapshot_times;
  /// Record a series point every this many steps; 0 records only t = 0 and
  /// the final time, which are always recorded.
  int series_cadence = 1;
  double kappa_guard = 1.0;
  int workers = 1;
  /// Use the largest closure eigenvalue instead of max(|v_min|, |v_max|) in
  /// the CFL bound.
  bool adaptive_dt = false;
  int snapshot_x_samples = 4;
  int snapshot_v_samples = 4;
  std::string output_dir = "out";
  std::optional<Window> decay_window;
  std::optional<Window> growth_window;
  /// Minimum spacing of peaks accepted by the rate fit.
  double peak_separation = 1.0;

  int n_basis() const { return order + 1; }
};

/// Throws ConfigError naming the first offending field.
void validate(const ScenarioConfig& config);

/// Exact solution for error norms: f(t, x, v) and E(t, x).
struct ExactSolution {
  std::function<double(double t, double x, double v)> f;
  std::function<double(double t, double x)> e;
};

struct Scenario {
  std::string name;
  std::string summary;
  bool experimental = false;
  ScenarioConfig defaults;
  std::function<double(const ScenarioConfig&, double x, double v)> initial;
  /// Empty Forcing when the scenario is unforced.
  std::function<Forcing(const ScenarioConfig&)> forcing;
  std::function<std::optional<ExactSolution>(const ScenarioConfig&)> exact;
};

const std::vector<Scenario>& scenario_registry();

/// Throws ConfigError with the closest registered name as a suggestion.
const Scenario& find_scenario(const std::string& name);

/// Closest candidate by edit distance, if reasonably close.
std::optional<std::string> closest_match(const std::string& word,
                                         const std::vector<std::string>& candidates);

}  // namespace vband

#endif  // VBAND_SCENARIO_HPP_
