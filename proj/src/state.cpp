#include "vband/state.hpp"

#include <algorithm>
#include <cmath>

namespace vband {

BandMomentField::BandMomentField(int n_elements, int n_bands, int n_basis)
    : n_elements_(n_elements),
      n_bands_(n_bands),
      n_basis_(n_basis),
      data_(static_cast<std::size_t>(n_elements) * n_bands * kMomentCount * n_basis,
            0.0) {}

std::span<double> BandMomentField::element(int i) {
  return std::span<double>(data_).subspan(i * element_size(), element_size());
}

std::span<const double> BandMomentField::element(int i) const {
  return std::span<const double>(data_).subspan(i * element_size(), element_size());
}

Moments BandMomentField::point_moments(int i, int j, double xi) const {
  Moments m{};
  for (int l = 0; l < kMomentCount; ++l) {
    m[l] = evaluate_modal(&data_[index(i, j, l, 0)], n_basis_, xi);
  }
  return m;
}

bool BandMomentField::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

void BandMomentField::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

}  // namespace vband

#include "vband/discretization.hpp"

namespace vband {

Discretization Discretization::build(BandGrid grid, SpatialMesh mesh, int n_basis) {
  Discretization d;
  d.quad = make_basis_quadrature(n_basis);
  d.closures = build_band_closures(grid);
  d.grid = std::move(grid);
  d.mesh = std::move(mesh);
  return d;
}

}  // namespace vband
