#ifndef VBAND_DRIVER_HPP_
#define VBAND_DRIVER_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vband/diagnostics.hpp"
#include "vband/discretization.hpp"
#include "vband/scenario.hpp"
#include "vband/state.hpp"

namespace vband {

struct RunState {
  double time = 0.0;
  long steps = 0;
  BandMomentField field;
  FieldState e;
  std::vector<SeriesPoint> series;
};

/// Band moments of g(x, v) projected onto the spatial basis with
/// n_basis + 2 Gauss points per element and the 10-point band rule.
BandMomentField project_initial(const std::function<double(double, double)>& g,
                                const Discretization& disc);

/// Owns the discretization and scenario hooks for one configuration.
class Solver {
 public:
  /// Validates config; throws ConfigError.
  explicit Solver(ScenarioConfig config);

  const ScenarioConfig& config() const { return config_; }
  const Discretization& discretization() const { return disc_; }
  const Scenario& scenario() const { return *scenario_; }
  const std::optional<ExactSolution>& exact() const { return exact_; }

  /// Initial moments, Gauss-consistent E and background constants at t = 0.
  RunState initialize() const;

  /// min(CFL dx / V, kappa_guard dv / (5 max|E|), next_stop - time).
  /// Throws NumericalError when the result underflows 1e-12.
  double select_dt(const RunState& state, double next_stop) const;

  /// A(dt/2), B(dt), A(dt/2). Advances time and step count.
  void strang_step(RunState& state, double dt) const;

  /// The CFL bound alone.
  double cfl_dt() const;

 private:
  ScenarioConfig config_;
  const Scenario* scenario_;
  Discretization disc_;
  Forcing forcing_;
  std::optional<ExactSolution> exact_;
  double speed_ = 0.0;
};

struct RunResult {
  ScenarioConfig config;
  bool ok = true;
  std::string failure;
  RunState state;
  std::vector<PdfSnapshot> snapshots;
  std::vector<DensityProfile> densities;
  std::optional<double> moment_error;
  std::optional<double> band_moment_error;
  std::optional<double> field_error;
  std::optional<RateFit> decay_fit;
  std::optional<RateFit> growth_fit;
  std::string decay_fit_error;
  std::string growth_fit_error;
  double wall_seconds = 0.0;
};

/// Runs to t_final. Numerical failures are caught and reported in the
/// result with the partial series; configuration errors propagate.
RunResult run(const ScenarioConfig& config);

}  // namespace vband

#endif  // VBAND_DRIVER_HPP_
