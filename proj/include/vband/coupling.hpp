#ifndef VBAND_COUPLING_HPP_
#define VBAND_COUPLING_HPP_

#include <array>
#include <span>
#include <vector>

#include "vband/discretization.hpp"
#include "vband/parallel.hpp"
#include "vband/state.hpp"

namespace vband {

// Inter-band coupling (the velocity-flux half of the split). At every spatial
// quadrature node the field E is frozen, electrons are pushed with velocity-
// space speed a = -E, and band j exchanges
//   M^(j) <- M^(j) - dt (S_+^(j) F_{j+1/2} - S_-^(j) F_{j-1/2})
// with interface fluxes F = a * beta shared by the two bands they separate.
// The outer walls carry no flux, so every global moment is conserved.
//
// With upwind edge values the edge values themselves obey a closed linear
// system, e.g. for a > 0
//   d/dt alpha_+^(j) = -(a/dv) (25 alpha_+^(j) - 5 alpha_+^(j-1)),
// since N_+ . S_+ = 25/dv and N_+ . S_- = 5/dv for the degree-4
// reconstruction. beta is the cubic Taylor expansion of the time average of
// alpha over the step, which gives the kappa = 5 |a| dt / dv weights below.
// The weights sum to 1 - 2k + 8k^2/3 - 8k^3/3, the expansion of
// (1 - exp(-4k)) / (4k): this half of the split alone does not keep constants.

struct CouplingOptions {
  ExecutionPolicy policy{};
};

/// Reconstructed edge values of every band at one spatial quadrature node.
struct EdgeValues {
  std::vector<double> plus;   ///< f at the upper edge of band j
  std::vector<double> minus;  ///< f at the lower edge of band j
};

EdgeValues alpha_edges(const BandMomentField& field, const Discretization& disc,
                       int element, int node);

/// Weights (w0, w1, w2, w3) of the four-band formula:
///   w0 = 1 - 5k/2 + 25k^2/6 - 125k^3/24
///   w1 = k/2 - 5k^2/3 + 25k^3/8
///   w2 = k^2/6 - 5k^3/8
///   w3 = k^3/24
std::array<double, 4> printed_beta_weights(double kappa);

/// beta = sum_k w_k(kappa) alphas[k]. alphas are ordered from the band at
/// the interface outward in the upwind direction: (j, j-1, j-2, j-3) for an
/// upward push, (j, j+1, j+2, j+3) for a downward push. kappa >= 0.
double beta_weights(std::span<const double, 4> alphas, double kappa);

/// Advances Problem A by dt with E frozen. Pure: returns the new field.
/// Throws NumericalError on non-finite output.
BandMomentField coupling_step(const BandMomentField& field, const FieldState& e,
                              double dt, const Discretization& disc,
                              const CouplingOptions& options = {});

/// Same update, overwriting `field`. Elements are independent in Problem A,
/// so each worker owns whole elements.
void coupling_step_in_place(BandMomentField& field, const FieldState& e, double dt,
                            const Discretization& disc,
                            const CouplingOptions& options = {});

/// Straightforward serial composition of alpha_edges and beta_weights, kept
/// as the reference the fast kernel is tested against.
BandMomentField coupling_step_reference(const BandMomentField& field,
                                        const FieldState& e, double dt,
                                        const Discretization& disc);

/// Largest kappa = 5 |E| dt / dv over all spatial quadrature nodes.
double max_kappa(const FieldState& e, double dt, const Discretization& disc);

}  // namespace vband

#endif  // VBAND_COUPLING_HPP_
