#ifndef VBAND_DIAGNOSTICS_HPP_
#define VBAND_DIAGNOSTICS_HPP_

#include <span>
#include <vector>

#include "vband/discretization.hpp"
#include "vband/scenario.hpp"
#include "vband/state.hpp"

namespace vband {

struct SeriesPoint {
  double time = 0.0;
  double e_l2 = 0.0;
  double field_energy = 0.0;
  Moments moments{};
  /// (1/2) int M_2 dx + field energy.
  double total_energy = 0.0;

  friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

/// int sum_j M_l dx for l = 0..4.
Moments global_moment_totals(const BandMomentField& field, const Discretization& disc);

/// sqrt(int E^2 dx), exact for the modal expansion.
double e_field_l2(const FieldState& e, const Discretization& disc);

SeriesPoint series_point(double time, const BandMomentField& field, const FieldState& e,
                         const Discretization& disc);

struct RateFit {
  double rate = 0.0;
  double intercept = 0.0;  ///< log amplitude at t = 0
  std::vector<double> peak_times;
  std::vector<double> peak_values;
};

/// Least-squares slope of log(peak) against peak time for the local maxima
/// of y inside [window.begin, window.end]. Peaks closer than min_separation
/// to an already accepted larger peak are dropped; peak positions are
/// refined by a parabola through log y. Throws FitError below 3 peaks.
RateFit fit_decay_rate(std::span<const double> t, std::span<const double> y, Window window,
                       double min_separation = 0.0);

struct PdfSnapshot {
  double time = 0.0;
  /// Rows in x-major order: for each x sample, every v sample.
  std::vector<double> x;
  std::vector<double> v;
  std::vector<double> f;
};

/// Evaluates each band's degree-4 reconstruction on a uniform sub-grid:
/// x_per_element midpoints in every element, v_per_band midpoints in every
/// band.
PdfSnapshot reconstruct_pdf(const BandMomentField& field, const Discretization& disc,
                            double time, int x_per_element, int v_per_band);

struct DensityProfile {
  double time = 0.0;
  std::vector<double> x;
  std::vector<double> rho;
};

/// rho(x) = sum_j M_0 at x_per_element midpoints of every element.
DensityProfile density_profile(const BandMomentField& field, const Discretization& disc,
                               double time, int x_per_element);

/// Largest |f(v_{j+1/2}^-) - f(v_{j+1/2}^+)| over interior band interfaces
/// and spatial quadrature nodes.
double band_edge_defect(const BandMomentField& field, const Discretization& disc);

/// Relative L2 error of the global moments sum_j M_l against those of
/// exact.f at time t, aggregated over l = 0..4:
///   sqrt(sum_l int (Mhat_l - M_l)^2 dx / sum_l int Mhat_l^2 dx).
/// This is the convergence-study norm; the splitting leaves no error here.
/// Throws UnsupportedDiagnostic when exact is null.
double relative_l2_error(const BandMomentField& field, const Discretization& disc,
                         const ExactSolution* exact, double t);

/// Same norm taken band by band, sum over l and j. Contains the O(dt^2)
/// splitting error.
double relative_band_l2_error(const BandMomentField& field, const Discretization& disc,
                              const ExactSolution* exact, double t);

/// Relative L2 error of E against exact.e.
double relative_e_error(const FieldState& e, const Discretization& disc,
                        const ExactSolution* exact, double t);

}  // namespace vband

#endif  // VBAND_DIAGNOSTICS_HPP_
