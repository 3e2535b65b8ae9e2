#ifndef VBAND_FLUID_HPP_
#define VBAND_FLUID_HPP_

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "vband/discretization.hpp"
#include "vband/parallel.hpp"
#include "vband/state.hpp"

namespace vband {

// In-band fluid half of the split: for every band
//   M_t + A M_x = -E S(M) + Psi,    E_t = sum_j M_1 - J_0 + G,
// advanced one full step by a Lax-Wendroff DG scheme. The predictor is a
// time Taylor expansion obtained by substituting the PDE repeatedly
// (Cauchy-Kovalevskaya), E included; the corrector is one DG update with
// time-integrated fluxes and sources.

/// Optional external sources. Psi is the kinetic source psi(t, x, v); G is
/// a current added to Ampere's law. Both may be empty.
struct Forcing {
  /// Fills out[q] = psi(t, x, v[q]).
  std::function<void(double t, double x, std::span<const double> v, std::span<double> out)>
      kinetic;
  std::function<double(double t, double x)> ampere;

  bool has_kinetic() const { return static_cast<bool>(kinetic); }
  bool has_ampere() const { return static_cast<bool>(ampere); }
};

/// Band moments int v^l psi(t, x, v) dv of the kinetic source for every band.
std::vector<Moments> apply_forcing_moments(const Forcing& forcing, double t, double x,
                                           const BandGrid& grid);

/// Rusanov flux 0.5 A (qL + qR) - 0.5 s (qR - qL), s the band spectral radius.
Moments numerical_flux(const Moments& left, const Moments& right, const ClosureOperator& op);

/// Time-Taylor coefficients d^r/dt^r of one element's modal state at t^n,
/// r = 0..n_basis-1.
struct ElementPrediction {
  int n_bands = 0;
  int n_basis = 0;
  int n_terms = 0;
  std::vector<double> moments;  // [r][j][l][k]
  std::vector<double> efield;   // [r][k]

  void resize(int bands, int basis, int terms);
  double& moment(int r, int j, int l, int k) {
    return moments[((static_cast<std::size_t>(r) * n_bands + j) * kMomentCount + l) * n_basis + k];
  }
  double moment(int r, int j, int l, int k) const {
    return moments[((static_cast<std::size_t>(r) * n_bands + j) * kMomentCount + l) * n_basis + k];
  }
  double& e(int r, int k) { return efield[static_cast<std::size_t>(r) * n_basis + k]; }
  double e(int r, int k) const { return efield[static_cast<std::size_t>(r) * n_basis + k]; }

  /// Modal coefficient of moment l of band j at relative time tau.
  double moment_at(int j, int l, int k, double tau) const;
  double e_at(int k, double tau) const;
};

/// Element-local space-time predictions over [t, t + dt].
struct SpaceTimePrediction {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<ElementPrediction> elements;
};

/// Predictor for every element. forcing may be null.
SpaceTimePrediction cauchy_kovalevskaya_predict(const BandMomentField& field,
                                                const FieldState& e, const Forcing* forcing,
                                                double t, double dt,
                                                const Discretization& disc,
                                                const ExecutionPolicy& policy = {});

/// One Problem-B step, overwriting field and e. Throws NumericalError on
/// non-finite output.
void fluid_step_in_place(BandMomentField& field, FieldState& e, const Forcing* forcing,
                         double t, double dt, const Discretization& disc,
                         const ExecutionPolicy& policy = {});

/// Pure form of fluid_step_in_place.
std::pair<BandMomentField, FieldState> fluid_step(const BandMomentField& field,
                                                  const FieldState& e,
                                                  const Forcing* forcing, double t,
                                                  double dt, const Discretization& disc,
                                                  const ExecutionPolicy& policy = {});

}  // namespace vband

#endif  // VBAND_FLUID_HPP_
