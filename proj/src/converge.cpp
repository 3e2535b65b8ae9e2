#include "vband/converge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "vband/driver.hpp"
#include "vband/error.hpp"

namespace vband {

std::vector<ConvergenceRow> converge(const ScenarioConfig& base, const std::vector<int>& orders,
                                     const std::vector<int>& n_elements) {
  std::vector<ConvergenceRow> rows;
  for (int order : orders) {
    std::optional<double> previous;
    for (int n : n_elements) {
      ScenarioConfig c = base;
      c.order = order;
      c.n_elements = n;
      c.snapshot_times.clear();
      c.series_cadence = 0;
      c.decay_window.reset();
      c.growth_window.reset();
      const RunResult r = run(c);
      if (!r.ok) throw NumericalError("convergence run failed: " + r.failure);
      if (!r.moment_error) {
        throw UnsupportedDiagnostic("scenario '" + c.scenario + "' has no exact solution");
      }
      ConvergenceRow row;
      row.order = order;
      row.n_elements = n;
      row.error = *r.moment_error;
      row.band_error = r.band_moment_error.value_or(0.0);
      row.field_error = r.field_error.value_or(0.0);
      row.wall_seconds = r.wall_seconds;
      if (previous) row.rate = std::log2(*previous / row.error);
      previous = row.error;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string format_convergence_table(const std::vector<ConvergenceRow>& rows) {
  std::vector<int> orders;
  std::vector<int> ns;
  std::map<std::pair<int, int>, const ConvergenceRow*> cell;
  for (const ConvergenceRow& r : rows) {
    if (std::find(orders.begin(), orders.end(), r.order) == orders.end()) orders.push_back(r.order);
    if (std::find(ns.begin(), ns.end(), r.n_elements) == ns.end()) ns.push_back(r.n_elements);
    cell[{r.order, r.n_elements}] = &r;
  }
  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%6s", "N");
  out += buf;
  for (int p : orders) {
    std::snprintf(buf, sizeof(buf), " | %12s %6s", ("e_N(P" + std::to_string(p) + ")").c_str(),
                  "rate");
    out += buf;
  }
  out += '\n';
  for (int n : ns) {
    std::snprintf(buf, sizeof(buf), "%6d", n);
    out += buf;
    for (int p : orders) {
      auto it = cell.find({p, n});
      if (it == cell.end()) {
        std::snprintf(buf, sizeof(buf), " | %12s %6s", "", "");
      } else if (it->second->rate) {
        std::snprintf(buf, sizeof(buf), " | %12.3e %6.3f", it->second->error, *it->second->rate);
      } else {
        std::snprintf(buf, sizeof(buf), " | %12.3e %6s", it->second->error, "--");
      }
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace vband
