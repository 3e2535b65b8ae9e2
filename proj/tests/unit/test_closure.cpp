#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "closure_oracle.hpp"
#include "test_util.hpp"
#include "vband/closure.hpp"
#include "vband/error.hpp"

namespace vband {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Random (vc, dv) pairs over the full sampled range.
std::vector<std::pair<double, double>> sample_bands(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> vc(-5.0, 5.0);
  std::uniform_real_distribution<double> dv(0.0, 1.0);
  std::vector<std::pair<double, double>> out;
  while (static_cast<int>(out.size()) < n) {
    const double w = 1.0 - dv(rng);  // (0, 1]
    out.emplace_back(vc(rng), w);
  }
  return out;
}

// Moments of p(v) = sum_k c[k] (v - vc)^k over the band, exact to rounding.
Moments poly_moments(const std::array<double, 5>& c, double vc, double dv) {
  return moments_of_function(
      [&](double v) {
        const double u = v - vc;
        return c[0] + u * (c[1] + u * (c[2] + u * (c[3] + u * c[4])));
      },
      vc - 0.5 * dv, vc + 0.5 * dv);
}

double poly_value(const std::array<double, 5>& c, double u) {
  return c[0] + u * (c[1] + u * (c[2] + u * (c[3] + u * c[4])));
}

TEST(ClosureRow, MatchesClosedForm) {
  for (const auto& [vc, dv] : sample_bands(1000, 1)) {
    const ClosureOperator op = closure_matrix(vc, dv);
    const test::Row ref = test::closed_form_row(vc, dv);
    for (int l = 0; l < kMomentCount; ++l) {
      const double r = static_cast<double>(ref[l]);
      EXPECT_LE(std::abs(op.matrix[4][l] - r), 1e-13 * std::max(1.0, std::abs(r)))
          << "vc=" << vc << " dv=" << dv << " l=" << l;
    }
  }
}

TEST(ClosureRow, MatchesMomentMatchingOracle) {
  for (const auto& [vc, dv] : sample_bands(1000, 2)) {
    const Moments row = closure_row(vc, dv);
    const test::Row ref = test::reconstruction_row_oracle(vc, dv);
    for (int l = 0; l < kMomentCount; ++l) {
      const double r = static_cast<double>(ref[l]);
      EXPECT_LE(std::abs(row[l] - r), 1e-11 * std::max(1.0, std::abs(r)))
          << "vc=" << vc << " dv=" << dv << " l=" << l;
    }
  }
}

TEST(ClosureRow, CanonicalRowIsLegendreClosure) {
  // On [-1, 1] the degree-4 moment-matching closure is mu_5 = (10/9) mu_3 - (5/21) mu_1.
  const Moments c = canonical_closure_row();
  const double expect[] = {0.0, -5.0 / 21.0, 0.0, 10.0 / 9.0, 0.0};
  for (int l = 0; l < kMomentCount; ++l) EXPECT_NEAR(c[l], expect[l], 1e-15);
}

TEST(ClosureRow, PointBandIsPureTransport) {
  // dv = 0: M_l = v^l M_0, so M_5 = vc^5 M_0 for every admissible state.
  const double vc = 1.7;
  const Moments row = closure_row(vc, 0.0);
  const Moments m = {2.0, 2.0 * vc, 2.0 * vc * vc, 2.0 * std::pow(vc, 3), 2.0 * std::pow(vc, 4)};
  double s = 0.0;
  for (int l = 0; l < kMomentCount; ++l) s += row[l] * m[l];
  EXPECT_NEAR(s, 2.0 * std::pow(vc, 5), 1e-12);
}

TEST(ClosureMatrix, CompanionStructure) {
  const ClosureOperator op = closure_matrix(0.3, 0.2, 7);
  EXPECT_EQ(op.band, 7);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < kMomentCount; ++c) EXPECT_EQ(op.matrix[r][c], c == r + 1 ? 1.0 : 0.0);
  }
  const Moments q = {1.0, 2.0, 3.0, 4.0, 5.0};
  const Moments a = op.apply(q);
  for (int l = 0; l < 4; ++l) EXPECT_EQ(a[l], q[l + 1]);
  double s = 0.0;
  for (int l = 0; l < kMomentCount; ++l) s += op.matrix[4][l] * q[l];
  EXPECT_NEAR(a[4], s, 1e-15);
  EXPECT_THROW(closure_matrix(0.0, 0.0), NumericalError);
  EXPECT_THROW(closure_matrix(0.0, -1.0), NumericalError);
}

TEST(ClosureMatrix, SpectrumIsRealAndAtGaussNodes) {
  // The closure is the 5-point Gauss quadrature closure, so eigenvalues sit
  // at the Gauss-Legendre nodes mapped into the band.
  const GaussRule g5 = gauss_legendre_rule(5);
  for (const auto& [vc, dv] : sample_bands(1000, 3)) {
    const ClosureOperator op = closure_matrix(vc, dv);
    EXPECT_LE(op.max_imag_part, 1e-10);
    for (int i = 0; i < kMomentCount; ++i) {
      const double expect = vc + 0.5 * dv * g5.nodes[i];
      EXPECT_NEAR(op.eigenvalues[i], expect, 1e-12 * (1.0 + std::abs(vc)))
          << "vc=" << vc << " dv=" << dv;
      EXPECT_LT(std::abs(op.eigenvalues[i] - vc), 0.5 * dv);
    }
    double rho = 0.0;
    for (double lam : op.eigenvalues) rho = std::max(rho, std::abs(lam));
    EXPECT_DOUBLE_EQ(op.spectral_radius, rho);
  }
}

TEST(ClosureMatrix, EigenvectorsDiagonalize) {
  for (const auto& [vc, dv] : sample_bands(200, 4)) {
    const ClosureOperator op = closure_matrix(vc, dv);
    for (int i = 0; i < kMomentCount; ++i) {
      Moments r{};
      for (int l = 0; l < kMomentCount; ++l) r[l] = op.right_eigenvectors[l][i];
      const Moments ar = op.apply(r);
      double scale = 0.0;
      for (int l = 0; l < kMomentCount; ++l) scale = std::max(scale, std::abs(ar[l]));
      for (int l = 0; l < kMomentCount; ++l) {
        EXPECT_LE(std::abs(ar[l] - op.eigenvalues[i] * r[l]), 1e-9 * std::max(1.0, scale));
      }
      // The raw eigenvector matrix is a Vandermonde matrix on nodes packed
      // into one band, so biorthogonality holds to eps times its condition.
      auto row_norm = [](const Matrix5& m) {
        double n = 0.0;
        for (const auto& row : m) {
          double r = 0.0;
          for (double x : row) r += std::abs(x);
          n = std::max(n, r);
        }
        return n;
      };
      const double cond = row_norm(op.left_eigenvectors) * row_norm(op.right_eigenvectors);
      for (int k = 0; k < kMomentCount; ++k) {
        double s = 0.0;
        for (int l = 0; l < kMomentCount; ++l) {
          s += op.left_eigenvectors[k][l] * op.right_eigenvectors[l][i];
        }
        EXPECT_LE(std::abs(s - (k == i ? 1.0 : 0.0)), 64.0 * kEps * cond)
            << "vc=" << vc << " dv=" << dv;
      }
    }
  }
}

TEST(Reconstruction, ReproducesQuarticsOnWellConditionedBands) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> w(0.5, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double vc = 0.25 * u(rng);
    const double dv = w(rng);
    std::array<double, 5> c{};
    for (double& x : c) x = u(rng);
    const Moments m = poly_moments(c, vc, dv);
    const InterfaceFunctional f = interface_functional(vc, dv);
    const Reconstruction r = band_reconstruction(vc, dv);
    double up = 0.0;
    double down = 0.0;
    for (int l = 0; l < kMomentCount; ++l) {
      up += f.plus[l] * m[l];
      down += f.minus[l] * m[l];
    }
    EXPECT_NEAR(up, poly_value(c, 0.5 * dv), 1e-12);
    EXPECT_NEAR(down, poly_value(c, -0.5 * dv), 1e-12);
    for (double s : {-0.3, 0.1, 0.45}) {
      EXPECT_NEAR(r.value(m, vc + s * dv), poly_value(c, s * dv), 1e-12);
    }
  }
}

TEST(Reconstruction, ReproducesQuarticsWithinConditioningBound) {
  // Raw moments of a narrow band far from v = 0 carry rounding of relative
  // size eps, amplified by the size of the edge functional. The bound below
  // is that amplification; no double-precision method can do better.
  for (const auto& [vc, dv] : sample_bands(500, 6)) {
    const std::array<double, 5> c = {1.0, 0.3, -0.7, 0.2, 0.5};
    const Moments m = poly_moments(c, vc, dv);
    const InterfaceFunctional f = interface_functional(vc, dv);
    double up = 0.0;
    double amplification = 0.0;
    for (int l = 0; l < kMomentCount; ++l) {
      up += f.plus[l] * m[l];
      amplification += std::abs(f.plus[l] * m[l]);
    }
    EXPECT_LE(std::abs(up - poly_value(c, 0.5 * dv)), 64.0 * kEps * amplification + 1e-14)
        << "vc=" << vc << " dv=" << dv;
  }
}

TEST(Reconstruction, ClosureMatchesFifthMomentOfQuartic) {
  for (const auto& [vc, dv] : sample_bands(500, 7)) {
    const std::array<double, 5> c = {0.8, -0.1, 0.4, 0.3, -0.2};
    const Moments m = poly_moments(c, vc, dv);
    // Fifth moment directly from the band rule (exact for degree 9).
    const GaussRule& rule = band_rule();
    double m5 = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const double v = vc + 0.5 * dv * rule.nodes[q];
      m5 += 0.5 * dv * rule.weights[q] * std::pow(v, 5) * poly_value(c, v - vc);
    }
    const Moments row = closure_row(vc, dv);
    double s = 0.0;
    double amplification = 0.0;
    for (int l = 0; l < kMomentCount; ++l) {
      s += row[l] * m[l];
      amplification += std::abs(row[l] * m[l]);
    }
    EXPECT_LE(std::abs(s - m5), 64.0 * kEps * amplification + 1e-14);
  }
}

TEST(SourceVectors, Examples) {
  const BandGrid g = build_band_grid(-1.0, 1.0, 4);
  const SourceVectors a = source_vectors({1.0, 0.0, 0.0, 0.0, 0.0}, g, 1);
  const Moments f1 = {0.0, 1.0, 0.0, 0.0, 0.0};
  EXPECT_EQ(a.force, f1);
  const SourceVectors b = source_vectors({1.0, 2.0, 3.0, 4.0, 99.0}, g, 2);
  const Moments f2 = {0.0, 1.0, 4.0, 9.0, 16.0};
  EXPECT_EQ(b.force, f2);
  const Moments plus = {1.0, 0.5, 0.25, 0.125, 0.0625};
  EXPECT_EQ(b.plus, plus);
  const Moments minus = {1.0, 0.0, 0.0, 0.0, 0.0};
  EXPECT_EQ(b.minus, minus);
}

TEST(SourceVectors, EdgeVectorsTelescopeBitwise) {
  const BandGrid g = build_band_grid(-2.0 * test::kPi, 2.0 * test::kPi, 80);
  const std::vector<BandClosure> c = build_band_closures(g);
  for (int j = 0; j + 1 < g.n_bands; ++j) {
    EXPECT_EQ(c[j].s_plus, c[j + 1].s_minus);
    const SourceVectors s = source_vectors(Moments{}, g, j);
    const SourceVectors t = source_vectors(Moments{}, g, j + 1);
    EXPECT_EQ(s.plus, t.minus);
  }
}

TEST(MomentsOfFunction, Monomials) {
  const Moments m = moments_of_function([](double) { return 1.0; }, 0.0, 1.0);
  for (int l = 0; l < kMomentCount; ++l) EXPECT_NEAR(m[l], 1.0 / (l + 1), 1e-15);
  const Moments g = moments_of_function([](double v) { return v; }, -1.0, 1.0);
  const Moments expect = {0.0, 2.0 / 3.0, 0.0, 2.0 / 5.0, 0.0};
  for (int l = 0; l < kMomentCount; ++l) EXPECT_NEAR(g[l], expect[l], 1e-15);
}

TEST(MomentsOfFunction, MaxwellianTotals) {
  const BandGrid g = build_band_grid(-8.0, 8.0, 64);
  Moments total{};
  for (int j = 0; j < g.n_bands; ++j) {
    const Moments m = moments_of_function(test::maxwellian, g.lower_edge(j), g.upper_edge(j));
    for (int l = 0; l < kMomentCount; ++l) total[l] += m[l];
  }
  EXPECT_NEAR(total[0], 1.0, 1e-13);
  EXPECT_NEAR(total[1], 0.0, 1e-14);
  EXPECT_NEAR(total[2], 1.0, 1e-12);
  EXPECT_NEAR(total[3], 0.0, 1e-13);
  EXPECT_NEAR(total[4], 3.0, 1e-11);
}

}  // namespace
}  // namespace vband
