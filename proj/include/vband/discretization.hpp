#ifndef VBAND_DISCRETIZATION_HPP_
#define VBAND_DISCRETIZATION_HPP_

#include <vector>

#include "vband/closure.hpp"
#include "vband/mesh.hpp"

namespace vband {

/// Grids, spatial DG tables and per-band closures; immutable once built and
/// shared read-only by every kernel.
struct Discretization {
  BandGrid grid;
  SpatialMesh mesh;
  BasisQuadrature quad;
  std::vector<BandClosure> closures;

  int n_bands() const { return grid.n_bands; }
  int n_elements() const { return mesh.n_elements; }
  int n_basis() const { return quad.n_basis; }

  static Discretization build(BandGrid grid, SpatialMesh mesh, int n_basis);
};

}  // namespace vband

#endif  // VBAND_DISCRETIZATION_HPP_
