#include "vband/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "vband/coupling.hpp"
#include "vband/error.hpp"
#include "vband/field_init.hpp"
#include "vband/fluid.hpp"

namespace vband {
namespace {

constexpr double kMinDt = 1e-12;

std::string context(const RunState& s) {
  return " (t = " + std::to_string(s.time) + ", step " + std::to_string(s.steps) + ")";
}

}  // namespace

BandMomentField project_initial(const std::function<double(double, double)>& g,
                                const Discretization& disc) {
  const int np = disc.n_basis();
  const GaussRule rule = gauss_legendre_rule(np + 2);
  BandMomentField field(disc.n_elements(), disc.n_bands(), np);
  for (int i = 0; i < disc.n_elements(); ++i) {
    for (int q = 0; q < rule.size(); ++q) {
      const double xi = rule.nodes[q];
      const double x = disc.mesh.to_physical(i, xi);
      for (int j = 0; j < disc.n_bands(); ++j) {
        const Moments m = moments_of_function([&](double v) { return g(x, v); },
                                              disc.grid.lower_edge(j), disc.grid.upper_edge(j));
        for (int k = 0; k < np; ++k) {
          const double w = 0.5 * rule.weights[q] * basis_value(k, xi);
          for (int l = 0; l < kMomentCount; ++l) field(i, j, l, k) += w * m[l];
        }
      }
    }
  }
  return field;
}

Solver::Solver(ScenarioConfig config) : config_(std::move(config)) {
  validate(config_);
  scenario_ = &find_scenario(config_.scenario);
  disc_ = Discretization::build(build_band_grid(config_.v_min, config_.v_max, config_.n_bands),
                                build_spatial_mesh(config_.x_min, config_.x_max,
                                                   config_.n_elements, config_.boundary),
                                config_.n_basis());
  forcing_ = scenario_->forcing(config_);
  exact_ = scenario_->exact(config_);
  speed_ = disc_.grid.speed_bound();
  if (config_.adaptive_dt) {
    speed_ = 0.0;
    for (const BandClosure& c : disc_.closures) speed_ = std::max(speed_, c.op.spectral_radius);
  }
}

RunState Solver::initialize() const {
  RunState s;
  const ScenarioConfig& c = config_;
  s.field = project_initial(
      [&](double x, double v) { return scenario_->initial(c, x, v); }, disc_);
  const BackgroundConstants bg = background_constants(s.field, disc_);
  // An open domain has no compatibility condition; the scenario's rho0 is
  // the fixed ion background there.
  const double rho0 = c.boundary == BoundaryKind::kPeriodic ? bg.rho0 : c.rho0;
  s.e = solve_gauss(s.field, rho0, disc_, c.gauge, c.gauge_anchor);
  s.e.j0 = bg.j0;
  s.series.push_back(series_point(0.0, s.field, s.e, disc_));
  return s;
}

double Solver::cfl_dt() const { return config_.cfl * disc_.mesh.dx / speed_; }

double Solver::select_dt(const RunState& state, double next_stop) const {
  double dt = cfl_dt();
  const double kappa_rate = max_kappa(state.e, 1.0, disc_);
  if (kappa_rate > 0.0) dt = std::min(dt, config_.kappa_guard / kappa_rate);
  dt = std::min(dt, next_stop - state.time);
  if (!(dt >= kMinDt)) {
    throw NumericalError("time step underflow: dt = " + std::to_string(dt) + context(state));
  }
  return dt;
}

void Solver::strang_step(RunState& state, double dt) const {
  const ExecutionPolicy policy = ExecutionPolicy::from_workers(config_.workers);
  const CouplingOptions coupling{policy};
  const Forcing* forcing =
      forcing_.has_kinetic() || forcing_.has_ampere() ? &forcing_ : nullptr;
  try {
    coupling_step_in_place(state.field, state.e, 0.5 * dt, disc_, coupling);
    fluid_step_in_place(state.field, state.e, forcing, state.time, dt, disc_, policy);
    coupling_step_in_place(state.field, state.e, 0.5 * dt, disc_, coupling);
  } catch (const NumericalError& err) {
    throw NumericalError(std::string(err.what()) + context(state));
  }
  state.time += dt;
  ++state.steps;
}

RunResult run(const ScenarioConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.config = config;
  Solver solver(config);
  const Discretization& disc = solver.discretization();
  const ScenarioConfig& c = solver.config();

  std::vector<double> stops = c.snapshot_times;
  stops.push_back(c.t_final);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  auto snapshot = [&](const RunState& s) {
    result.snapshots.push_back(
        reconstruct_pdf(s.field, disc, s.time, c.snapshot_x_samples, c.snapshot_v_samples));
    result.densities.push_back(density_profile(s.field, disc, s.time, c.snapshot_x_samples));
  };

  RunState& state = result.state;
  state = solver.initialize();
  std::size_t next = 0;
  if (stops[0] == 0.0) {
    snapshot(state);
    next = 1;
  }
  try {
    while (next < stops.size()) {
      const double stop = stops[next];
      const double dt = solver.select_dt(state, stop);
      solver.strang_step(state, dt);
      const bool reached = stop - state.time <= 1e-12 * std::max(1.0, stop);
      if (reached) state.time = stop;
      const bool last = reached && next + 1 == stops.size();
      if (last || (c.series_cadence > 0 && state.steps % c.series_cadence == 0)) {
        state.series.push_back(series_point(state.time, state.field, state.e, disc));
      }
      if (reached) {
        snapshot(state);
        ++next;
      }
    }
  } catch (const NumericalError& err) {
    result.ok = false;
    result.failure = err.what();
  }

  if (result.ok && solver.exact()) {
    result.moment_error = relative_l2_error(state.field, disc, &*solver.exact(), state.time);
    result.band_moment_error =
        relative_band_l2_error(state.field, disc, &*solver.exact(), state.time);
    result.field_error = relative_e_error(state.e, disc, &*solver.exact(), state.time);
  }
  std::vector<double> t;
  std::vector<double> y;
  for (const SeriesPoint& p : state.series) {
    t.push_back(p.time);
    y.push_back(p.e_l2);
  }
  auto fit = [&](const std::optional<Window>& w, std::optional<RateFit>& out, std::string& err) {
    if (!w) return;
    try {
      out = fit_decay_rate(t, y, *w, c.peak_separation);
    } catch (const FitError& e) {
      err = e.what();
    }
  };
  fit(c.decay_window, result.decay_fit, result.decay_fit_error);
  fit(c.growth_window, result.growth_fit, result.growth_fit_error);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace vband
