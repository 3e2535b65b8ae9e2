#ifndef VBAND_FIELD_INIT_HPP_
#define VBAND_FIELD_INIT_HPP_

#include "vband/discretization.hpp"
#include "vband/state.hpp"

namespace vband {

struct BackgroundConstants {
  double rho0 = 0.0;
  double j0 = 0.0;
};

/// Domain averages of the total density sum_j M_0 and current sum_j M_1.
BackgroundConstants background_constants(const BandMomentField& field,
                                         const Discretization& disc);

/// Which additive constant fixes E after integrating Gauss's law.
enum class Gauge {
  kZeroMean,    ///< mean of E over the domain is zero (periodic default)
  kLeftAnchor,  ///< E(x_min) = anchor value (open default)
};

/// E with E_x = rho0 - rho, rho = sum_j M_0, integrated exactly element by
/// element and L2-projected onto the modal basis.
///
/// On a periodic mesh the net charge int (rho0 - rho) dx must vanish to
/// 1e-10 relative to int |rho| dx; otherwise ConfigError reports the residual.
FieldState solve_gauss(const BandMomentField& field, double rho0, const Discretization& disc,
                       Gauge gauge, double anchor = 0.0);

/// sqrt(int (E_x - (rho0 - rho))^2 dx) using the element-interior derivative.
double gauss_residual(const BandMomentField& field, const FieldState& e,
                      const Discretization& disc);

}  // namespace vband

#endif  // VBAND_FIELD_INIT_HPP_
