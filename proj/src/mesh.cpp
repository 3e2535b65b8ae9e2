#include "vband/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vband/error.hpp"

namespace vband {

double BandGrid::speed_bound() const {
  return std::max(std::abs(v_min), std::abs(v_max));
}

BandGrid build_band_grid(double v_min, double v_max, int n_bands) {
  if (n_bands < 1) {
    throw ConfigError("band grid: n_bands must be >= 1, got " +
                      std::to_string(n_bands));
  }
  if (!(v_max > v_min) || !std::isfinite(v_min) || !std::isfinite(v_max)) {
    throw ConfigError("band grid: require v_max > v_min, got [" +
                      std::to_string(v_min) + ", " + std::to_string(v_max) +
                      "]");
  }
  BandGrid g;
  g.v_min = v_min;
  g.v_max = v_max;
  g.n_bands = n_bands;
  g.dv = (v_max - v_min) / n_bands;
  g.centers.resize(n_bands);
  g.interfaces.resize(n_bands + 1);
  for (int j = 0; j < n_bands; ++j) {
    g.centers[j] = v_min + (j + 0.5) * g.dv;
    g.interfaces[j] = v_min + j * g.dv;
  }
  g.interfaces[n_bands] = v_max;
  return g;
}

std::optional<int> SpatialMesh::left_neighbor(int i) const {
  if (i > 0) return i - 1;
  if (boundary == BoundaryKind::kPeriodic) return n_elements - 1;
  return std::nullopt;
}

std::optional<int> SpatialMesh::right_neighbor(int i) const {
  if (i + 1 < n_elements) return i + 1;
  if (boundary == BoundaryKind::kPeriodic) return 0;
  return std::nullopt;
}

SpatialMesh build_spatial_mesh(double x_min, double x_max, int n_elements,
                               BoundaryKind boundary) {
  if (n_elements < 1) {
    throw ConfigError("spatial mesh: n_elements must be >= 1, got " +
                      std::to_string(n_elements));
  }
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw ConfigError("spatial mesh: require x_max > x_min");
  }
  SpatialMesh m;
  m.x_min = x_min;
  m.x_max = x_max;
  m.n_elements = n_elements;
  m.dx = (x_max - x_min) / n_elements;
  m.boundary = boundary;
  m.centers.resize(n_elements);
  for (int i = 0; i < n_elements; ++i) m.centers[i] = x_min + (i + 0.5) * m.dx;
  return m;
}

double legendre(int n, double x) {
  if (n == 0) return 1.0;
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double legendre_derivative(int n, double x) {
  // P'_n = sum over k = n-1, n-3, ... of (2k+1) P_k; valid at x = +-1 too.
  double d = 0.0;
  for (int k = n - 1; k >= 0; k -= 2) d += (2 * k + 1) * legendre(k, x);
  return d;
}

double basis_value(int k, double xi) {
  return std::sqrt(2.0 * k + 1.0) * legendre(k, xi);
}

double basis_derivative(int k, double xi) {
  return std::sqrt(2.0 * k + 1.0) * legendre_derivative(k, xi);
}

GaussRule gauss_legendre_rule(int n) {
  if (n < 1 || n > 64) {
    throw ConfigError("gauss_legendre_rule: unsupported point count " +
                      std::to_string(n));
  }
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton iteration from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const double dx = legendre(n, x) / legendre_derivative(n, x);
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre_derivative(n, x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

BasisQuadrature make_basis_quadrature(int n_basis) {
  if (n_basis < 1 || n_basis > kMaxBasis) {
    throw ConfigError("basis quadrature: unsupported number of modes " +
                      std::to_string(n_basis) + " (supported 1.." +
                      std::to_string(kMaxBasis) + ")");
  }
  const GaussRule rule = gauss_legendre_rule(n_basis);
  BasisQuadrature q;
  q.n_basis = n_basis;
  q.nodes = rule.nodes;
  q.weights = rule.weights;
  q.values.assign(n_basis, std::vector<double>(n_basis));
  q.left_trace.resize(n_basis);
  q.right_trace.resize(n_basis);
  for (int k = 0; k < n_basis; ++k) {
    for (int m = 0; m < n_basis; ++m) q.values[k][m] = basis_value(k, q.nodes[m]);
    q.left_trace[k] = basis_value(k, -1.0);
    q.right_trace[k] = basis_value(k, 1.0);
  }
  // psi_k' psi_l has degree <= 2 n_basis - 3, so the rule is exact.
  q.stiffness.assign(n_basis, std::vector<double>(n_basis, 0.0));
  q.derivative.assign(n_basis, std::vector<double>(n_basis, 0.0));
  for (int k = 0; k < n_basis; ++k) {
    for (int l = 0; l < n_basis; ++l) {
      double s = 0.0;
      for (int m = 0; m < n_basis; ++m) {
        s += q.weights[m] * basis_derivative(k, q.nodes[m]) * q.values[l][m];
      }
      q.stiffness[k][l] = s;
      // (1/2) int psi_k psi_l' = coefficient of psi_k in psi_l'.
      double d = 0.0;
      for (int m = 0; m < n_basis; ++m) {
        d += 0.5 * q.weights[m] * q.values[k][m] *
             basis_derivative(l, q.nodes[m]);
      }
      q.derivative[k][l] = d;
    }
  }
  return q;
}

double evaluate_modal(const double* coeffs, int n_basis, double xi) {
  double s = 0.0;
  for (int k = 0; k < n_basis; ++k) s += coeffs[k] * basis_value(k, xi);
  return s;
}

}  // namespace vband
