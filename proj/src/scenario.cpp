#include "vband/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vband/error.hpp"

namespace vband {
namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);

double maxwellian(double v) { return std::exp(-0.5 * v * v) / std::sqrt(2.0 * kPi); }

ScenarioConfig manufactured_defaults() {
  ScenarioConfig c;
  c.scenario = "manufactured";
  c.x_min = -kPi;
  c.x_max = kPi;
  c.v_min = -4.0;
  c.v_max = 4.0;
  c.n_elements = 40;
  c.n_bands = 200;
  c.order = 3;
  c.cfl = 0.09;
  c.t_final = 0.1;
  c.forcing = true;
  return c;
}

ScenarioConfig landau_defaults(const std::string& name, double alpha, double t_final) {
  ScenarioConfig c;
  c.scenario = name;
  c.x_min = -2.0 * kPi;
  c.x_max = 2.0 * kPi;
  c.v_min = -2.0 * kPi;
  c.v_max = 2.0 * kPi;
  c.n_elements = 40;
  c.n_bands = 80;
  c.order = 3;
  c.cfl = 0.09;
  c.t_final = t_final;
  c.alpha = alpha;
  c.wave_number = 0.5;
  return c;
}

ScenarioConfig sheath_defaults() {
  ScenarioConfig c;
  c.scenario = "sheath";
  c.x_min = 0.0;
  c.x_max = 1.0;
  c.v_min = -0.2;
  c.v_max = 0.2;
  c.n_elements = 80;
  c.n_bands = 80;
  c.order = 1;
  c.cfl = 0.09;
  c.t_final = 140.0;
  c.rho0 = 1.0;
  c.theta0 = 1e-3;
  c.boundary = BoundaryKind::kOpen;
  c.gauge = Gauge::kLeftAnchor;
  c.snapshot_times = {140.0};
  c.series_cadence = 10;
  return c;
}

ScenarioConfig two_stream_defaults() {
  ScenarioConfig c;
  c.scenario = "two_stream";
  c.x_min = 0.0;
  c.x_max = 4.0 * kPi;
  c.v_min = -2.0 * kPi;
  c.v_max = 2.0 * kPi;
  c.n_elements = 40;
  c.n_bands = 80;
  c.order = 3;
  c.t_final = 40.0;
  c.alpha = 0.05;
  c.wave_number = 0.5;
  return c;
}

double manufactured_f(double t, double x, double v) {
  const double w = 4.0 * v - 1.0;
  return (2.0 - std::cos(2.0 * x - 2.0 * kPi * t)) * std::exp(-0.25 * w * w);
}

double manufactured_e(double t, double x) {
  return 0.25 * kSqrtPi * std::sin(2.0 * x - 2.0 * kPi * t);
}

// Kinetic source for f_t + v f_x - E f_v = psi with the exact pair above.
double manufactured_psi(double t, double x, double v) {
  const double phase = 2.0 * x - 2.0 * kPi * t;
  const double s = std::sin(phase);
  const double c = std::cos(phase);
  const double w = 4.0 * v - 1.0;
  return 0.5 * s * std::exp(-0.25 * w * w) *
         ((2.0 * kSqrtPi + 1.0) * (4.0 * v - 2.0 * kSqrtPi) - kSqrtPi * w * c);
}

// The source above carries charge, so Ampere's law needs the matching
// current to keep E_t consistent with the exact field:
//   G = E_t - (int v f dv - J0) = -(sqrt(pi)/8)(4 pi - 1) cos(2x - 2 pi t).
double manufactured_ampere(double t, double x) {
  return -(kSqrtPi / 8.0) * (4.0 * kPi - 1.0) * std::cos(2.0 * x - 2.0 * kPi * t);
}

std::vector<Scenario> build_registry() {
  std::vector<Scenario> r;
  auto no_forcing = [](const ScenarioConfig&) { return Forcing{}; };
  auto no_exact = [](const ScenarioConfig&) { return std::optional<ExactSolution>{}; };

  Scenario m;
  m.name = "manufactured";
  m.summary = "forced problem with exact solution, periodic, error norms and orders";
  m.defaults = manufactured_defaults();
  m.initial = [](const ScenarioConfig&, double x, double v) { return manufactured_f(0.0, x, v); };
  m.forcing = [](const ScenarioConfig& c) {
    Forcing f;
    if (!c.forcing) return f;
    f.kinetic = [](double t, double x, std::span<const double> v, std::span<double> out) {
      for (std::size_t q = 0; q < v.size(); ++q) out[q] = manufactured_psi(t, x, v[q]);
    };
    f.ampere = manufactured_ampere;
    return f;
  };
  m.exact = [](const ScenarioConfig& c) -> std::optional<ExactSolution> {
    if (!c.forcing) return std::nullopt;
    return ExactSolution{manufactured_f, manufactured_e};
  };
  r.push_back(m);

  auto landau_ic = [](const ScenarioConfig& c, double x, double v) {
    return (1.0 + c.alpha * std::cos(c.wave_number * x)) * maxwellian(v);
  };

  Scenario weak;
  weak.name = "weak_landau";
  weak.summary = "alpha = 0.01 Landau damping, E_L2 decay rate fit";
  weak.defaults = landau_defaults("weak_landau", 0.01, 45.0);
  weak.defaults.decay_window = Window{0.0, 45.0};
  weak.initial = landau_ic;
  weak.forcing = no_forcing;
  weak.exact = no_exact;
  r.push_back(weak);

  Scenario strong;
  strong.name = "strong_landau";
  strong.summary = "alpha = 0.5 nonlinear Landau damping, decay then growth";
  strong.defaults = landau_defaults("strong_landau", 0.5, 60.0);
  strong.defaults.decay_window = Window{0.0, 15.0};
  strong.defaults.growth_window = Window{20.0, 40.0};
  strong.initial = landau_ic;
  strong.forcing = no_forcing;
  strong.exact = no_exact;
  r.push_back(strong);

  Scenario sheath;
  sheath.name = "sheath";
  sheath.summary = "absorbing walls with zero inflow, sheath formation";
  sheath.defaults = sheath_defaults();
  sheath.initial = [](const ScenarioConfig& c, double, double v) {
    return c.rho0 / std::sqrt(2.0 * kPi * c.theta0) * std::exp(-0.5 * v * v / c.theta0);
  };
  sheath.forcing = no_forcing;
  sheath.exact = no_exact;
  r.push_back(sheath);

  Scenario two;
  two.name = "two_stream";
  two.summary = "two-stream instability, standard literature setup";
  two.experimental = true;
  two.defaults = two_stream_defaults();
  two.initial = [](const ScenarioConfig& c, double x, double v) {
    return v * v * maxwellian(v) * (1.0 + c.alpha * std::cos(c.wave_number * x));
  };
  two.forcing = no_forcing;
  two.exact = no_exact;
  r.push_back(two);
  return r;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

void validate(const ScenarioConfig& c) {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigError("invalid " + field + ": " + why);
  };
  if (!(c.x_max > c.x_min)) fail("x_min/x_max", "x_max must exceed x_min");
  if (!(c.v_max > c.v_min)) fail("v_min/v_max", "v_max must exceed v_min");
  if (c.n_elements < 1) fail("n_elements", "must be at least 1");
  if (c.n_bands < 1) fail("n_bands", "must be at least 1");
  if (c.order < 0 || c.order + 1 > kMaxBasis) fail("order", "supported degrees are 0..3");
  if (!(c.cfl > 0.0 && c.cfl < 1.0)) fail("cfl", "must lie in (0, 1)");
  if (!(c.t_final > 0.0)) fail("t_final", "must be positive");
  if (!(c.kappa_guard > 0.0)) fail("kappa_guard", "must be positive");
  if (!(c.theta0 > 0.0)) fail("theta0", "must be positive");
  if (c.series_cadence < 0) fail("series_cadence", "must be non-negative");
  if (c.workers < 1) fail("workers", "must be at least 1");
  if (c.snapshot_x_samples < 1) fail("snapshot_x_samples", "must be at least 1");
  if (c.snapshot_v_samples < 1) fail("snapshot_v_samples", "must be at least 1");
  if (!(c.peak_separation >= 0.0)) fail("peak_separation", "must be non-negative");
  for (double t : c.snapshot_times) {
    if (!(t >= 0.0 && t <= c.t_final)) fail("snapshot_times", "times must lie in [0, t_final]");
  }
  for (const auto* w : {&c.decay_window, &c.growth_window}) {
    if (*w && !((*w)->end > (*w)->begin)) fail("window", "end must exceed begin");
  }
}

const std::vector<Scenario>& scenario_registry() {
  static const std::vector<Scenario> registry = build_registry();
  return registry;
}

std::optional<std::string> closest_match(const std::string& word,
                                         const std::vector<std::string>& candidates) {
  std::optional<std::string> best;
  std::size_t best_d = 0;
  for (const std::string& c : candidates) {
    const std::size_t d = edit_distance(word, c);
    if (!best || d < best_d) {
      best = c;
      best_d = d;
    }
  }
  if (best && best_d <= std::max<std::size_t>(2, word.size() / 3)) return best;
  return std::nullopt;
}

const Scenario& find_scenario(const std::string& name) {
  std::vector<std::string> names;
  for (const Scenario& s : scenario_registry()) {
    if (s.name == name) return s;
    names.push_back(s.name);
  }
  std::string msg = "unknown scenario '" + name + "'";
  if (auto hint = closest_match(name, names)) msg += "; did you mean '" + *hint + "'?";
  throw ConfigError(msg);
}

}  // namespace vband
