#include "vband/closure.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "vband/error.hpp"

namespace vband {
namespace {

using Mat5 = Eigen::Matrix<double, kMomentCount, kMomentCount>;

// Monomial coefficients of P_n(u): P_n = sum_m kLegendreMonomial[n][m] u^m.
constexpr double kLegendreMonomial[5][5] = {
    {1.0, 0.0, 0.0, 0.0, 0.0},
    {0.0, 1.0, 0.0, 0.0, 0.0},
    {-0.5, 0.0, 1.5, 0.0, 0.0},
    {0.0, -1.5, 0.0, 2.5, 0.0},
    {0.375, 0.0, -3.75, 0.0, 4.375},
};

constexpr double kBinomial[5][5] = {
    {1, 0, 0, 0, 0},
    {1, 1, 0, 0, 0},
    {1, 2, 1, 0, 0},
    {1, 3, 3, 1, 0},
    {1, 4, 6, 4, 1},
};

// scaled[m][l]: mu_m = sum_l scaled[m][l] M_l, mu_m = int u^m f dv.
Mat5 raw_to_scaled(double vc, double h) {
  Mat5 t = Mat5::Zero();
  for (int m = 0; m < kMomentCount; ++m) {
    const double hm = std::pow(h, -m);
    for (int l = 0; l <= m; ++l) {
      t(m, l) = hm * kBinomial[m][l] * std::pow(-vc, m - l);
    }
  }
  return t;
}

Mat5 scaled_to_raw(double vc, double h) {
  Mat5 t = Mat5::Zero();
  for (int l = 0; l < kMomentCount; ++l) {
    for (int m = 0; m <= l; ++m) {
      t(l, m) = kBinomial[l][m] * std::pow(vc, l - m) * std::pow(h, m);
    }
  }
  return t;
}

}  // namespace

Moments Reconstruction::legendre_coefficients(const Moments& m) const {
  Moments c{};
  for (int n = 0; n < kMomentCount; ++n) {
    double s = 0.0;
    for (int l = 0; l < kMomentCount; ++l) s += legendre_from_moments[n][l] * m[l];
    c[n] = s;
  }
  return c;
}

double Reconstruction::value(const Moments& m, double v) const {
  const Moments c = legendre_coefficients(m);
  const double u = (v - center) / half_width;
  double s = 0.0;
  for (int n = 0; n < kMomentCount; ++n) s += c[n] * legendre(n, u);
  return s;
}

Reconstruction band_reconstruction(double v_center, double dv) {
  if (!(dv > 0.0)) {
    throw NumericalError("band reconstruction: band width must be positive");
  }
  const double h = 0.5 * dv;
  Reconstruction r;
  r.center = v_center;
  r.half_width = h;
  const Mat5 t = raw_to_scaled(v_center, h);
  for (int n = 0; n < kMomentCount; ++n) {
    const double scale = (2.0 * n + 1.0) / (2.0 * h);
    for (int l = 0; l < kMomentCount; ++l) {
      double s = 0.0;
      for (int m = 0; m < kMomentCount; ++m) s += kLegendreMonomial[n][m] * t(m, l);
      r.legendre_from_moments[n][l] = scale * s;
    }
  }
  return r;
}

InterfaceFunctional interface_functional(double v_center, double dv) {
  const Reconstruction r = band_reconstruction(v_center, dv);
  InterfaceFunctional f;
  for (int l = 0; l < kMomentCount; ++l) {
    double up = 0.0;
    double down = 0.0;
    for (int n = 0; n < kMomentCount; ++n) {
      up += r.legendre_from_moments[n][l];
      down += (n % 2 == 0 ? 1.0 : -1.0) * r.legendre_from_moments[n][l];
    }
    f.plus[l] = up;
    f.minus[l] = down;
  }
  return f;
}

Moments closure_row(double vc, double dv) {
  const double dv2 = dv * dv;
  const double dv4 = dv2 * dv2;
  const double v2 = vc * vc;
  const double v3 = v2 * vc;
  return {
      5.0 * dv4 * vc / 336.0 - 5.0 * dv2 * v3 / 18.0 + v2 * v3,
      -5.0 * dv4 / 336.0 + 5.0 * dv2 * v2 / 6.0 - 5.0 * v2 * v2,
      -5.0 * dv2 * vc / 6.0 + 10.0 * v3,
      (5.0 / 18.0) * (dv2 - 36.0 * v2),
      5.0 * vc,
  };
}

Moments canonical_closure_row() {
  // mu_5 of the degree-4 moment-matching polynomial on [-1, 1]:
  // c_n = (2n+1)/2 sum_m a_nm mu_m, mu_5 = sum_n c_n int u^5 P_n du.
  const GaussRule rule = gauss_legendre_rule(6);
  Moments row{};
  for (int n = 0; n < kMomentCount; ++n) {
    double b = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      b += rule.weights[q] * std::pow(rule.nodes[q], 5) * legendre(n, rule.nodes[q]);
    }
    for (int m = 0; m < kMomentCount; ++m) {
      row[m] += b * 0.5 * (2.0 * n + 1.0) * kLegendreMonomial[n][m];
    }
  }
  return row;
}

Moments ClosureOperator::apply(const Moments& q) const {
  Moments out{q[1], q[2], q[3], q[4], 0.0};
  double s = 0.0;
  for (int l = 0; l < kMomentCount; ++l) s += matrix[4][l] * q[l];
  out[4] = s;
  return out;
}

ClosureOperator closure_matrix(double v_center, double dv, int band) {
  if (!(dv > 0.0)) {
    throw NumericalError("closure_matrix: band width must be positive");
  }
  ClosureOperator op;
  op.band = band;
  op.center = v_center;
  op.dv = dv;
  for (auto& row : op.matrix) row.fill(0.0);
  for (int l = 0; l + 1 < kMomentCount; ++l) op.matrix[l][l + 1] = 1.0;
  op.matrix[4] = closure_row(v_center, dv);

  const double h = 0.5 * dv;
  const Moments canon = canonical_closure_row();
  Mat5 scaled = Mat5::Zero();
  for (int m = 0; m < kMomentCount; ++m) {
    scaled(m, m) = v_center;
    if (m + 1 < kMomentCount) scaled(m, m + 1) = h;
  }
  for (int m = 0; m < kMomentCount; ++m) scaled(4, m) += h * canon[m];

  Eigen::EigenSolver<Mat5> solver(scaled, true);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("closure_matrix: eigensolve failed for band " +
                         std::to_string(band));
  }
  const auto evals = solver.eigenvalues();
  const auto evecs = solver.eigenvectors();
  double max_imag = 0.0;
  for (int i = 0; i < kMomentCount; ++i) {
    max_imag = std::max(max_imag, std::abs(evals(i).imag()));
  }
  op.max_imag_part = max_imag;
  if (max_imag > 1e-10) {
    throw NumericalError("closure_matrix: non-real spectrum (|Im| = " +
                         std::to_string(max_imag) + ") for band " +
                         std::to_string(band));
  }

  std::array<int, kMomentCount> order{};
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return evals(a).real() < evals(b).real();
  });

  const Mat5 to_raw = scaled_to_raw(v_center, h);
  Mat5 right = Mat5::Zero();
  for (int c = 0; c < kMomentCount; ++c) {
    const int src = order[c];
    op.eigenvalues[c] = evals(src).real();
    Eigen::Matrix<double, kMomentCount, 1> r = evecs.col(src).real();
    r = to_raw * r;
    // Companion eigenvectors are [1, lambda, ..., lambda^4]; scale to that.
    r /= r(0);
    right.col(c) = r;
  }
  const Mat5 left = right.inverse();
  for (int i = 0; i < kMomentCount; ++i) {
    for (int l = 0; l < kMomentCount; ++l) {
      op.right_eigenvectors[l][i] = right(l, i);
      op.left_eigenvectors[i][l] = left(i, l);
    }
  }
  op.spectral_radius = 0.0;
  for (double lam : op.eigenvalues) {
    op.spectral_radius = std::max(op.spectral_radius, std::abs(lam));
  }
  return op;
}

Moments edge_powers(double v) {
  return {1.0, v, v * v, v * v * v, v * v * v * v};
}

SourceVectors source_vectors(const Moments& m, const BandGrid& grid, int j) {
  SourceVectors s;
  s.force = {0.0, m[0], 2.0 * m[1], 3.0 * m[2], 4.0 * m[3]};
  s.plus = edge_powers(grid.upper_edge(j));
  s.minus = edge_powers(grid.lower_edge(j));
  return s;
}

const GaussRule& band_rule() {
  static const GaussRule rule = gauss_legendre_rule(10);
  return rule;
}

std::vector<BandClosure> build_band_closures(const BandGrid& grid) {
  std::vector<BandClosure> out;
  out.reserve(grid.n_bands);
  for (int j = 0; j < grid.n_bands; ++j) {
    BandClosure c;
    c.op = closure_matrix(grid.centers[j], grid.dv, j);
    c.recon = band_reconstruction(grid.centers[j], grid.dv);
    c.edges = interface_functional(grid.centers[j], grid.dv);
    c.s_plus = edge_powers(grid.upper_edge(j));
    c.s_minus = edge_powers(grid.lower_edge(j));
    out.push_back(c);
  }
  return out;
}

}  // namespace vband
