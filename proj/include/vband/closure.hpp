#ifndef VBAND_CLOSURE_HPP_
#define VBAND_CLOSURE_HPP_

#include <array>
#include <vector>

#include "vband/mesh.hpp"

namespace vband {

using Moments = std::array<double, kMomentCount>;
using Matrix5 = std::array<std::array<double, kMomentCount>, kMomentCount>;

/// Degree-4 polynomial on one band that reproduces the band's five moments.
///
/// Stored as Legendre coefficients in u = (v - v_j) / (dv/2) so that small
/// bands stay well conditioned: coeffs = legendre_from_moments * M.
struct Reconstruction {
  double center = 0.0;
  double half_width = 0.0;
  Matrix5 legendre_from_moments{};

  Moments legendre_coefficients(const Moments& m) const;
  double value(const Moments& m, double v) const;
};

Reconstruction band_reconstruction(double v_center, double dv);

/// Weights with f(v_{j+1/2}) ~ plus . M and f(v_{j-1/2}) ~ minus . M.
struct InterfaceFunctional {
  Moments plus{};
  Moments minus{};
};

InterfaceFunctional interface_functional(double v_center, double dv);

/// Row 5 of the band flux matrix: M_5 ~ row . (M_0..M_4). Closed form,
/// valid for dv = 0 (pure transport with speed v_j).
Moments closure_row(double v_center, double dv);

/// Companion-form flux matrix of one band with its real eigensystem.
struct ClosureOperator {
  int band = 0;
  double center = 0.0;
  double dv = 0.0;
  Matrix5 matrix{};
  /// Ascending.
  Moments eigenvalues{};
  /// Columns are right eigenvectors (raw moment coordinates).
  Matrix5 right_eigenvectors{};
  /// Rows are left eigenvectors, normalized so left_i . right_i = 1.
  Matrix5 left_eigenvectors{};
  /// Largest |Im lambda| returned by the numerical eigensolve.
  double max_imag_part = 0.0;
  double spectral_radius = 0.0;

  Moments apply(const Moments& q) const;
};

/// Builds A for band center v_center and width dv > 0.
///
/// The eigensolve runs on the similar matrix v_j I + (dv/2) C written in
/// scaled central moments int ((v - v_j)/(dv/2))^m f dv; the raw companion
/// form is too ill-conditioned for small bands. Throws NumericalError if the
/// spectrum comes back non-real beyond 1e-10.
ClosureOperator closure_matrix(double v_center, double dv, int band = 0);

/// Canonical closure on [-1, 1]: mu_5 = row . (mu_0..mu_4) for u-moments.
Moments canonical_closure_row();

/// In-band force source [0, M0, 2 M1, 3 M2, 4 M3] and the edge power vectors.
struct SourceVectors {
  Moments force{};
  Moments plus{};
  Moments minus{};
};

/// [1, v, v^2, v^3, v^4].
Moments edge_powers(double v);

/// Source vectors for band j. Edge vectors use the grid's stored interfaces,
/// so plus of band j and minus of band j+1 are bitwise equal.
SourceVectors source_vectors(const Moments& m, const BandGrid& grid, int j);

/// 10-point Gauss-Legendre rule used for all band integrals.
const GaussRule& band_rule();

/// int_{lo}^{hi} v^l g(v) dv for l = 0..4.
template <typename Fn>
Moments moments_of_function(Fn&& g, double lo, double hi) {
  const GaussRule& rule = band_rule();
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  Moments out{};
  for (int q = 0; q < rule.size(); ++q) {
    const double v = mid + half * rule.nodes[q];
    double w = half * rule.weights[q] * g(v);
    for (int l = 0; l < kMomentCount; ++l) {
      out[l] += w;
      w *= v;
    }
  }
  return out;
}

/// Everything Problem A and Problem B need for one band, built once.
struct BandClosure {
  ClosureOperator op;
  Reconstruction recon;
  InterfaceFunctional edges;
  Moments s_plus{};
  Moments s_minus{};
};

std::vector<BandClosure> build_band_closures(const BandGrid& grid);

}  // namespace vband

#endif  // VBAND_CLOSURE_HPP_
