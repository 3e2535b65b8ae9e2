#ifndef VBAND_CONVERGE_HPP_
#define VBAND_CONVERGE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "vband/scenario.hpp"

namespace vband {

struct ConvergenceRow {
  int order = 0;
  int n_elements = 0;
  double error = 0.0;
  /// log2(e_{previous N} / e_N); empty for the first row of each order.
  std::optional<double> rate;
  double band_error = 0.0;
  double field_error = 0.0;
  double wall_seconds = 0.0;
};

/// Runs base at every (order, N) with CFL and n_bands held fixed, so dt
/// shrinks with dx. error is relative_l2_error (global moments).
/// Throws UnsupportedDiagnostic if the scenario has no exact solution and
/// NumericalError if a run fails.
std::vector<ConvergenceRow> converge(const ScenarioConfig& base, const std::vector<int>& orders,
                                     const std::vector<int>& n_elements);

/// Text table: one row per N, an error and a rate column per order.
std::string format_convergence_table(const std::vector<ConvergenceRow>& rows);

}  // namespace vband

#endif  // VBAND_CONVERGE_HPP_
