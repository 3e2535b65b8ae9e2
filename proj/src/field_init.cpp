#include "vband/field_init.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vband/error.hpp"

namespace vband {
namespace {

// Net charge density rho0 - sum_j M_0 of element i, modal.
std::vector<double> charge_modes(const BandMomentField& field, double rho0, int i) {
  std::vector<double> c(field.n_basis(), 0.0);
  for (int j = 0; j < field.n_bands(); ++j) {
    for (int k = 0; k < field.n_basis(); ++k) c[k] -= field(i, j, 0, k);
  }
  c[0] += rho0;
  return c;
}

// int_{-1}^{xi} psi_k(s) ds.
double basis_antiderivative(int k, double xi) {
  if (k == 0) return xi + 1.0;
  const double scale = std::sqrt(2.0 * k + 1.0);
  return scale * (legendre(k + 1, xi) - legendre(k - 1, xi)) / (2.0 * k + 1.0);
}

}  // namespace

BackgroundConstants background_constants(const BandMomentField& field,
                                         const Discretization& disc) {
  double mass = 0.0;
  double current = 0.0;
  for (int i = 0; i < field.n_elements(); ++i) {
    for (int j = 0; j < field.n_bands(); ++j) {
      mass += field(i, j, 0, 0);
      current += field(i, j, 1, 0);
    }
  }
  // Element averages times dx, divided by the length.
  const double n = static_cast<double>(field.n_elements());
  (void)disc;
  return {mass / n, current / n};
}

FieldState solve_gauss(const BandMomentField& field, double rho0, const Discretization& disc,
                       Gauge gauge, double anchor) {
  const int ne = field.n_elements();
  const int np = field.n_basis();
  const double dx = disc.mesh.dx;

  if (disc.mesh.boundary == BoundaryKind::kPeriodic) {
    double net = 0.0;
    double scale = 0.0;
    for (int i = 0; i < ne; ++i) {
      const std::vector<double> c = charge_modes(field, rho0, i);
      net += c[0] * dx;
      scale += std::abs(c[0] - rho0) * dx;
    }
    if (std::abs(net) > 1e-10 * std::max(1.0, scale)) {
      throw ConfigError("periodic Gauss solve: net charge int (rho0 - rho) dx = " +
                        std::to_string(net) + " is not zero");
    }
  }

  const GaussRule rule = gauss_legendre_rule(np + 2);
  FieldState e(ne, np);
  double left_value = 0.0;
  for (int i = 0; i < ne; ++i) {
    const std::vector<double> c = charge_modes(field, rho0, i);
    auto antideriv = [&](double xi) {
      double s = 0.0;
      for (int k = 0; k < np; ++k) s += c[k] * basis_antiderivative(k, xi);
      return left_value + 0.5 * dx * s;
    };
    for (int k = 0; k < np; ++k) {
      double s = 0.0;
      for (int q = 0; q < rule.size(); ++q) {
        s += 0.5 * rule.weights[q] * basis_value(k, rule.nodes[q]) * antideriv(rule.nodes[q]);
      }
      e.element(i)[k] = s;
    }
    left_value = antideriv(1.0);
  }

  double shift = anchor;
  if (gauge == Gauge::kZeroMean) {
    double mean = 0.0;
    for (int i = 0; i < ne; ++i) mean += e.element(i)[0];
    shift = -mean / ne;
  }
  for (int i = 0; i < ne; ++i) e.element(i)[0] += shift;
  e.rho0 = rho0;
  return e;
}

double gauss_residual(const BandMomentField& field, const FieldState& e,
                      const Discretization& disc) {
  const int np = field.n_basis();
  const GaussRule rule = gauss_legendre_rule(np + 1);
  double sum = 0.0;
  for (int i = 0; i < field.n_elements(); ++i) {
    const std::vector<double> c = charge_modes(field, e.rho0, i);
    for (int q = 0; q < rule.size(); ++q) {
      double ex = 0.0;
      double rhs = 0.0;
      for (int k = 0; k < np; ++k) {
        ex += e.element(i)[k] * basis_derivative(k, rule.nodes[q]);
        rhs += c[k] * basis_value(k, rule.nodes[q]);
      }
      ex *= 2.0 / disc.mesh.dx;
      const double r = ex - rhs;
      sum += 0.5 * disc.mesh.dx * rule.weights[q] * r * r;
    }
  }
  return std::sqrt(sum);
}

}  // namespace vband
