#ifndef VBAND_STATE_HPP_
#define VBAND_STATE_HPP_

#include <span>
#include <vector>

#include "vband/closure.hpp"
#include "vband/mesh.hpp"

namespace vband {

/// Modal coefficients of the five local moments, per element and band.
///
/// Layout is element-major, ((i * n_bands + j) * 5 + l) * n_basis + k, so
/// one element's whole velocity column is contiguous; both split problems
/// work element by element.
class BandMomentField {
 public:
  BandMomentField() = default;
  BandMomentField(int n_elements, int n_bands, int n_basis);

  int n_elements() const { return n_elements_; }
  int n_bands() const { return n_bands_; }
  int n_basis() const { return n_basis_; }

  double& operator()(int i, int j, int l, int k) { return data_[index(i, j, l, k)]; }
  double operator()(int i, int j, int l, int k) const { return data_[index(i, j, l, k)]; }

  /// Contiguous block of element i: n_bands * 5 * n_basis values.
  std::span<double> element(int i);
  std::span<const double> element(int i) const;
  std::size_t element_size() const {
    return static_cast<std::size_t>(n_bands_) * kMomentCount * n_basis_;
  }

  /// Band moments of element i evaluated at reference point xi.
  Moments point_moments(int i, int j, double xi) const;

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool all_finite() const;
  void fill(double value);

  friend bool operator==(const BandMomentField&, const BandMomentField&) = default;

 private:
  std::size_t index(int i, int j, int l, int k) const {
    return ((static_cast<std::size_t>(i) * n_bands_ + j) * kMomentCount + l) *
               n_basis_ + k;
  }

  int n_elements_ = 0;
  int n_bands_ = 0;
  int n_basis_ = 0;
  std::vector<double> data_;
};

/// Electric field modes per element plus the background constants.
struct FieldState {
  int n_basis = 0;
  /// e[i * n_basis + k].
  std::vector<double> e;
  double rho0 = 0.0;
  double j0 = 0.0;

  FieldState() = default;
  FieldState(int n_elements, int n_basis_in)
      : n_basis(n_basis_in),
        e(static_cast<std::size_t>(n_elements) * n_basis_in, 0.0) {}

  int n_elements() const { return n_basis == 0 ? 0 : static_cast<int>(e.size()) / n_basis; }
  const double* element(int i) const { return e.data() + static_cast<std::size_t>(i) * n_basis; }
  double* element(int i) { return e.data() + static_cast<std::size_t>(i) * n_basis; }
  double value(int i, double xi) const { return evaluate_modal(element(i), n_basis, xi); }

  friend bool operator==(const FieldState&, const FieldState&) = default;
};

}  // namespace vband

#endif  // VBAND_STATE_HPP_
