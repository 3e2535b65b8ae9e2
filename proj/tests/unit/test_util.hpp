#ifndef VBAND_TEST_UTIL_HPP_
#define VBAND_TEST_UTIL_HPP_

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "vband/coupling.hpp"
#include "vband/discretization.hpp"
#include "vband/state.hpp"

namespace vband::test {

inline constexpr double kPi = std::numbers::pi;

inline double maxwellian(double v) {
  return std::exp(-0.5 * v * v) / std::sqrt(2.0 * kPi);
}

/// Random band moments of a smooth positive f(x, v) = a(x) g(v) + b(x) h(v):
/// g and h are fixed smooth velocity profiles and a, b have random modes.
/// The plasma drifts to positive v, so odd global moments stay away from zero.
/// `empty` bands at each end of the velocity grid are left at zero.
inline BandMomentField random_field(const Discretization& disc, std::mt19937_64& rng,
                                    int empty = 0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double shift = 0.75 + 0.25 * u(rng);
  const double width = 1.0 + 0.3 * u(rng);
  auto g = [&](double v) {
    const double z = (v - shift) / width;
    return std::exp(-0.5 * z * z) * (1.0 + 0.2 * std::sin(3.0 * v));
  };
  auto h = [&](double v) {
    const double z = v + 1.0 - shift;
    return std::exp(-z * z);
  };
  BandMomentField f(disc.n_elements(), disc.n_bands(), disc.n_basis());
  for (int i = 0; i < disc.n_elements(); ++i) {
    std::vector<double> a(disc.n_basis());
    std::vector<double> b(disc.n_basis());
    a[0] = 1.0 + 0.3 * u(rng);
    b[0] = 0.5 + 0.2 * u(rng);
    for (int k = 1; k < disc.n_basis(); ++k) {
      a[k] = 0.1 * u(rng) / k;
      b[k] = 0.05 * u(rng) / k;
    }
    for (int j = empty; j < disc.n_bands() - empty; ++j) {
      const double lo = disc.grid.lower_edge(j);
      const double hi = disc.grid.upper_edge(j);
      const Moments mg = moments_of_function(g, lo, hi);
      const Moments mh = moments_of_function(h, lo, hi);
      for (int l = 0; l < kMomentCount; ++l) {
        for (int k = 0; k < disc.n_basis(); ++k) f(i, j, l, k) = a[k] * mg[l] + b[k] * mh[l];
      }
    }
  }
  return f;
}

inline FieldState random_efield(const Discretization& disc, std::mt19937_64& rng,
                                double scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FieldState e(disc.n_elements(), disc.n_basis());
  for (double& c : e.e) c = scale * u(rng);
  return e;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

/// Rounding scale of one coupling update, entry by entry in the field layout.
/// Edge values sum terms N_l M_l that can exceed the result by many orders,
/// so two correct kernels agree only to eps times these absolute sums.
inline BandMomentField coupling_rounding_bound(const BandMomentField& f, const FieldState& e,
                                               double dt, const Discretization& disc) {
  constexpr double kEps = 2.220446049250313e-16;
  const int np = disc.n_basis();
  double weight_sum = 0.0;
  for (double w : printed_beta_weights(max_kappa(e, dt, disc))) weight_sum += std::abs(w);
  BandMomentField bound(f.n_elements(), f.n_bands(), np);
  for (int i = 0; i < f.n_elements(); ++i) {
    double speed = 0.0;
    for (int k = 0; k < np; ++k) speed += std::sqrt(2.0 * k + 1.0) * std::abs(e.element(i)[k]);
    double edge = 0.0;
    for (int j = 0; j < f.n_bands(); ++j) {
      const auto& n = disc.closures[j].edges;
      double s = 0.0;
      for (int k = 0; k < np; ++k) {
        for (int l = 0; l < kMomentCount; ++l) {
          s += std::sqrt(2.0 * k + 1.0) * std::max(std::abs(n.plus[l]), std::abs(n.minus[l])) *
               std::abs(f(i, j, l, k));
        }
      }
      edge = std::max(edge, s);
    }
    const double flux = speed * weight_sum * edge * 2.0 * np;
    for (int j = 0; j < f.n_bands(); ++j) {
      const BandClosure& c = disc.closures[j];
      for (int l = 0; l < kMomentCount; ++l) {
        const double sources = std::abs(c.s_plus[l]) + std::abs(c.s_minus[l]);
        for (int k = 0; k < np; ++k) {
          bound(i, j, l, k) = 64.0 * kEps * (std::abs(f(i, j, l, k)) + dt * sources * flux);
        }
      }
    }
  }
  return bound;
}

/// max |a - b| / bound over all entries.
inline double max_scaled_diff(std::span<const double> a, std::span<const double> b,
                              std::span<const double> bound) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]) / bound[i]);
  return m;
}

}  // namespace vband::test

#endif  // VBAND_TEST_UTIL_HPP_
