// Prints one PASS/FAIL line per acceptance criterion and exits non-zero if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "closure_oracle.hpp"
#include "test_util.hpp"
#include "vband/closure.hpp"
#include "vband/converge.hpp"
#include "vband/coupling.hpp"
#include "vband/diagnostics.hpp"
#include "vband/driver.hpp"
#include "vband/error.hpp"

namespace {

using namespace vband;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[1024];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

std::vector<std::pair<double, double>> closure_samples() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> vc(-5.0, 5.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < 1000; ++i) out.emplace_back(vc(rng), 1.0 - u(rng));
  return out;
}

void closure_row_criterion() {
  const auto start = Clock::now();
  double worst_closed = 0.0;
  double worst_oracle = 0.0;
  for (const auto& [vc, dv] : closure_samples()) {
    const ClosureOperator op = closure_matrix(vc, dv);
    const test::Row closed = test::closed_form_row(vc, dv);
    const test::Row oracle = test::reconstruction_row_oracle(vc, dv);
    for (int l = 0; l < kMomentCount; ++l) {
      const double c = static_cast<double>(closed[l]);
      const double o = static_cast<double>(oracle[l]);
      worst_closed = std::max(worst_closed, std::abs(op.matrix[4][l] - c) / std::max(1.0, std::abs(c)));
      worst_oracle = std::max(worst_oracle, std::abs(op.matrix[4][l] - o) / std::max(1.0, std::abs(o)));
    }
  }
  const double t = seconds_since(start);
  report(1, "closure row", worst_closed <= 1e-13 && worst_oracle <= 1e-11 && t < 1.0,
         fmt("max rel dev closed form %.2e (<=1e-13), reconstruction oracle %.2e (<=1e-11), "
             "1000 samples in %.3f s (<1 s)",
             worst_closed, worst_oracle, t));
}

void conservation_criterion() {
  const auto start = Clock::now();
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int np = 1 + trial % 4;
    const Discretization disc = Discretization::build(
        build_band_grid(-2.0 * test::kPi, 2.0 * test::kPi, 48),
        build_spatial_mesh(0.0, 4.0 * test::kPi, 8, BoundaryKind::kPeriodic), np);
    const BandMomentField f = test::random_field(disc, rng, 4);
    const FieldState e = test::random_efield(disc, rng, 0.5);
    const double dt = 0.4 * disc.grid.dv / (5.0 * 0.5 * std::sqrt(2.0 * np - 1.0) * np);
    const BandMomentField g = coupling_step(f, e, dt, disc);
    const Moments a = global_moment_totals(f, disc);
    const Moments b = global_moment_totals(g, disc);
    for (int l = 0; l < kMomentCount; ++l) {
      worst = std::max(worst, std::abs(b[l] - a[l]) / std::abs(a[l]));
    }
  }
  const double t = seconds_since(start);
  report(2, "global-moment conservation of the coupling step", worst <= 1e-13 && t < 10.0,
         fmt("max relative change %.2e over 100 states (<=1e-13), %.2f s (<10 s)", worst, t));
}

void convergence_criterion() {
  const auto start = Clock::now();
  ScenarioConfig base = find_scenario("manufactured").defaults;
  base.n_bands = 200;
  base.cfl = 0.09;
  base.series_cadence = 0;
  const auto rows = converge(base, {1, 2, 3}, {20, 40, 80});
  const double min_rate[] = {1.7, 2.7, 3.6};
  const double table_n40[] = {1.454e-02, 4.075e-04, 7.829e-06};
  bool rates_ok = true;
  bool magnitude_ok = true;
  std::string detail;
  for (int p = 1; p <= 3; ++p) {
    double e40 = 0.0;
    std::string rates;
    for (const auto& r : rows) {
      if (r.order != p) continue;
      if (r.n_elements == 40) e40 = r.error;
      if (r.rate) {
        rates += fmt(" %.2f", *r.rate);
        rates_ok &= *r.rate >= min_rate[p - 1];
      }
    }
    const double ratio = table_n40[p - 1] / e40;
    magnitude_ok &= ratio <= 3.0 && ratio >= 1.0 / 3.0;
    detail += fmt("P%d rates%s (>=%.1f), e40 %.3e vs %.3e (x%.1f); ", p, rates.c_str(),
                  min_rate[p - 1], e40, table_n40[p - 1], ratio);
  }
  detail += fmt("orders %s, magnitudes %s, %.1f s", rates_ok ? "ok" : "LOW",
                magnitude_ok ? "within x3" : "OUTSIDE x3", seconds_since(start));
  report(3, "manufactured convergence", rates_ok && magnitude_ok, detail);
}

RateFit line_fit(const std::vector<double>& t, const std::vector<double>& y) {
  const double n = static_cast<double>(t.size());
  double st = 0, sl = 0, stt = 0, stl = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double l = std::log(y[i]);
    st += t[i];
    sl += l;
    stt += t[i] * t[i];
    stl += t[i] * l;
  }
  RateFit f;
  f.rate = (n * stl - st * sl) / (n * stt - st * st);
  return f;
}

void weak_landau_criterion() {
  const auto start = Clock::now();
  ScenarioConfig c = find_scenario("weak_landau").defaults;
  c.n_elements = 40;
  c.n_bands = 80;
  c.t_final = 45.0;
  c.snapshot_times.clear();
  const RunResult r = run(c);
  const double target = -0.1536;
  if (!r.ok || !r.decay_fit) {
    report(4, "weak Landau decay rate", false,
           "run failed or no fit: " + r.failure + r.decay_fit_error);
    return;
  }
  const double g = r.decay_fit->rate;
  const double rel = std::abs(g - target) / std::abs(target);
  report(4, "weak Landau decay rate", rel <= 0.10,
         fmt("gamma %.5f vs %.4f (%.1f%% off, tolerance 10%%), %zu peaks, %.1f s", g, target,
             100 * rel, r.decay_fit->peak_times.size(), seconds_since(start)));
}

void strong_landau_criterion() {
  const auto start = Clock::now();
  ScenarioConfig c = find_scenario("strong_landau").defaults;
  c.n_elements = 40;
  c.n_bands = 80;
  c.t_final = 60.0;
  c.snapshot_times.clear();
  const RunResult r = run(c);
  if (!r.ok || !r.decay_fit || !r.growth_fit) {
    report(5, "strong Landau decay and growth rates", false,
           "run failed or fit missing: " + r.failure + " " + r.decay_fit_error + " " +
               r.growth_fit_error);
    return;
  }
  const double g1 = r.decay_fit->rate;
  const double g2 = r.growth_fit->rate;
  const double t1 = -0.2918;
  const double t2 = 0.08584;
  const double rel1 = std::abs(g1 - t1) / std::abs(t1);
  const double rel2 = std::abs(g2 - t2) / std::abs(t2);
  const bool sign_change = g1 < 0.0 && g2 > 0.0;
  std::string info;
  const auto& pt = r.decay_fit->peak_times;
  const auto& pv = r.decay_fit->peak_values;
  if (pt.size() >= 4) {
    const RateFit early = line_fit({pt.begin(), pt.begin() + 4}, {pv.begin(), pv.begin() + 4});
    info = fmt("; for reference, the first four peaks alone give %.4f", early.rate);
  }
  report(5, "strong Landau decay and growth rates", rel1 <= 0.15 && rel2 <= 0.20 && sign_change,
         fmt("gamma1 %.5f on [%g, %g] vs %.4f (%.1f%% off, tol 15%%), gamma2 %.5f on [%g, %g] "
             "vs %.5f (%.1f%% off, tol 20%%), decay-then-growth %s%s, %.1f s",
             g1, c.decay_window->begin, c.decay_window->end, t1, 100 * rel1, g2,
             c.growth_window->begin, c.growth_window->end, t2, 100 * rel2,
             sign_change ? "yes" : "no", info.c_str(), seconds_since(start)));
}

void sheath_criterion() {
  const auto start = Clock::now();
  ScenarioConfig c = find_scenario("sheath").defaults;
  c.n_elements = 80;
  c.n_bands = 80;
  c.t_final = 140.0;
  c.series_cadence = 1;
  const RunResult r = run(c);
  if (!r.ok) {
    report(6, "sheath", false, "run failed: " + r.failure);
    return;
  }
  // Mass may not grow beyond round-off of the mass itself.
  const auto& s = r.state.series;
  int increases = 0;
  double largest = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double d = s[i].moments[0] - s[i - 1].moments[0];
    if (d > 1e-12 * s[i - 1].moments[0]) {
      ++increases;
      largest = std::max(largest, d / s[i - 1].moments[0]);
    }
  }
  const DensityProfile& d = r.densities.back();
  const auto peak = std::max_element(d.rho.begin(), d.rho.end());
  const double interior_max = *peak;
  const bool interior = peak != d.rho.begin() && peak != d.rho.end() - 1;
  const double wall = std::max(d.rho.front(), d.rho.back());
  const bool sheath_shape = interior && wall < 0.5 * interior_max;
  const bool monotone = increases == 0;
  report(6, "sheath", monotone && sheath_shape,
         fmt("completed to t=%.1f in %ld steps; mass %.6f -> %.6f, %d increases in %zu records "
             "(largest %.2e relative) -> %s; density walls %.4f/%.4f, interior max %.4f -> %s; "
             "%.1f s",
             r.state.time, r.state.steps, s.front().moments[0], s.back().moments[0], increases,
             s.size() - 1, largest, monotone ? "non-increasing" : "NOT non-increasing",
             d.rho.front(), d.rho.back(), interior_max,
             sheath_shape ? "sheath profile" : "NO sheath profile", seconds_since(start)));
}

void spectral_criterion() {
  double worst = 0.0;
  int failed = 0;
  for (const auto& [vc, dv] : closure_samples()) {
    try {
      worst = std::max(worst, closure_matrix(vc, dv).max_imag_part);
    } catch (const NumericalError&) {
      ++failed;
    }
  }
  report(7, "real closure spectrum", worst <= 1e-10 && failed == 0,
         fmt("max |Im lambda| %.2e over 1000 samples (<=1e-10), %d eigensolve failures", worst,
             failed));
}

void invariant_suite_criterion() {
  const auto start = Clock::now();
  const std::string cmd = std::string("\"") + VBAND_UNIT_TEST_BINARY +
                          "\" --gtest_brief=1 > unit_suite.log 2>&1";
  const int status = std::system(cmd.c_str());
  const double t = seconds_since(start);
  report(8, "module invariant suites", status == 0 && t < 300.0,
         fmt("unit suite exit status %d, %.1f s (<300 s); log in unit_suite.log", status, t));
}

}  // namespace

int main() {
  closure_row_criterion();
  conservation_criterion();
  convergence_criterion();
  weak_landau_criterion();
  strong_landau_criterion();
  sheath_criterion();
  spectral_criterion();
  invariant_suite_criterion();
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
