#ifndef VBAND_MESH_HPP_
#define VBAND_MESH_HPP_

#include <array>
#include <optional>
#include <vector>

namespace vband {

/// Moments kept per velocity band: int v^l f dv for l = 0..4.
inline constexpr int kMomentCount = 5;
/// Largest number of spatial Legendre modes per element (cubic elements).
inline constexpr int kMaxBasis = 4;

/// Uniform partition of [v_min, v_max] into velocity bands.
///
/// Bands are 0-based here: band j covers [interfaces[j], interfaces[j+1]]
/// and has center v_min + (j + 1/2) dv. Interfaces are stored rather than
/// recomputed so that the upper edge of band j and the lower edge of band
/// j+1 are the same double.
struct BandGrid {
  double v_min = 0.0;
  double v_max = 0.0;
  int n_bands = 0;
  double dv = 0.0;
  std::vector<double> centers;
  std::vector<double> interfaces;

  double lower_edge(int j) const { return interfaces[j]; }
  double upper_edge(int j) const { return interfaces[j + 1]; }
  double half_width() const { return 0.5 * dv; }
  /// Largest |v| on the grid; the CFL speed bound.
  double speed_bound() const;
};

BandGrid build_band_grid(double v_min, double v_max, int n_bands);

enum class BoundaryKind { kPeriodic, kOpen };

struct SpatialMesh {
  double x_min = 0.0;
  double x_max = 0.0;
  int n_elements = 0;
  double dx = 0.0;
  BoundaryKind boundary = BoundaryKind::kPeriodic;
  std::vector<double> centers;

  double length() const { return x_max - x_min; }
  double left_edge(int i) const { return x_min + i * dx; }
  /// Physical coordinate of reference point xi in [-1, 1] of element i.
  double to_physical(int i, double xi) const {
    return centers[i] + 0.5 * dx * xi;
  }
  /// Neighbor indices; empty at an open boundary.
  std::optional<int> left_neighbor(int i) const;
  std::optional<int> right_neighbor(int i) const;
};

SpatialMesh build_spatial_mesh(double x_min, double x_max, int n_elements,
                               BoundaryKind boundary);

/// Plain Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

/// n-point Gauss-Legendre rule, n in [1, 64]. Exact for degree 2n-1.
GaussRule gauss_legendre_rule(int n);

/// Legendre polynomial P_n(x) (standard normalization, P_n(1) = 1).
double legendre(int n, double x);
/// d/dx P_n(x).
double legendre_derivative(int n, double x);

/// Legendre basis orthonormal under (1/2) int_{-1}^{1}: psi_k = sqrt(2k+1) P_k.
/// With this scaling mode 0 of an expansion is the element average.
double basis_value(int k, double xi);
double basis_derivative(int k, double xi);

/// Spatial DG tables for n_basis modes evaluated on the n_basis-point
/// Gauss-Legendre rule.
struct BasisQuadrature {
  int n_basis = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
  /// values[k][m] = psi_k(nodes[m]).
  std::vector<std::vector<double>> values;
  /// Trace values psi_k(-1) and psi_k(+1).
  std::vector<double> left_trace;
  std::vector<double> right_trace;
  /// stiffness[k][l] = int_{-1}^{1} psi_k'(xi) psi_l(xi) dxi.
  std::vector<std::vector<double>> stiffness;
  /// derivative[k][l]: coefficient of psi_k in d/dxi psi_l.
  std::vector<std::vector<double>> derivative;

  int n_nodes() const { return static_cast<int>(nodes.size()); }
};

/// Tables for n_basis in [1, kMaxBasis]; throws ConfigError otherwise.
BasisQuadrature make_basis_quadrature(int n_basis);

/// Point value of a modal expansion sum_k coeffs[k] psi_k(xi).
double evaluate_modal(const double* coeffs, int n_basis, double xi);

}  // namespace vband

#endif  // VBAND_MESH_HPP_
