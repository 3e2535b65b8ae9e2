#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "vband/coupling.hpp"
#include "vband/diagnostics.hpp"

namespace vband {
namespace {

using test::kPi;

Discretization make_disc(int n_elements, int n_bands, int n_basis, double vmax = 2.0 * kPi) {
  return Discretization::build(build_band_grid(-vmax, vmax, n_bands),
                               build_spatial_mesh(0.0, 4.0 * kPi, n_elements,
                                                  BoundaryKind::kPeriodic),
                               n_basis);
}

// Time average over one step of the edge values obeying
//   d alpha_j / ds = -kappa (5 alpha_j - alpha_{j-1}),
// truncated after the cubic term: sum_n (-kappa L)^n / (n+1)!, L = 5 I - shift.
std::array<double, 4> averaged_edge_weights(double kappa) {
  std::array<double, 4> w{};
  double fact = 1.0;
  for (int n = 0; n <= 3; ++n) {
    fact *= (n + 1);
    for (int m = 0; m <= n; ++m) {
      double binom = 1.0;
      for (int i = 1; i <= m; ++i) binom = binom * (n - m + i) / i;
      w[m] += std::pow(-kappa, n) / fact * binom * std::pow(5.0, n - m) * (m % 2 ? -1.0 : 1.0);
    }
  }
  return w;
}

TEST(BetaWeights, IdentityAtZeroKappa) {
  const auto w = printed_beta_weights(0.0);
  EXPECT_EQ(w[0], 1.0);
  EXPECT_EQ(w[1], 0.0);
  EXPECT_EQ(w[2], 0.0);
  EXPECT_EQ(w[3], 0.0);
}

TEST(BetaWeights, SingleUpwindNeighbourExample) {
  const std::array<double, 4> alphas = {0.0, 1.0, 0.0, 0.0};
  EXPECT_NEAR(beta_weights(alphas, 0.1), 0.1 / 2 - 5 * 0.01 / 3 + 25 * 0.001 / 8, 1e-16);
  EXPECT_NEAR(beta_weights(alphas, 0.1), 0.0364583333333333, 1e-15);
}

TEST(BetaWeights, SumPolynomialAndTimeAverage) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> k(0.0, 0.6);
  for (int trial = 0; trial < 200; ++trial) {
    const double kappa = k(rng);
    const auto w = printed_beta_weights(kappa);
    const double sum = w[0] + w[1] + w[2] + w[3];
    EXPECT_NEAR(sum, 1.0 - 2.0 * kappa + 8.0 * kappa * kappa / 3.0 -
                         8.0 * kappa * kappa * kappa / 3.0,
                1e-14);
    const auto ref = averaged_edge_weights(kappa);
    for (int m = 0; m < 4; ++m) EXPECT_NEAR(w[m], ref[m], 1e-14) << "kappa=" << kappa;
    const std::array<double, 4> alphas = {0.3, -1.2, 0.7, 2.0};
    EXPECT_NEAR(beta_weights(alphas, kappa),
                w[0] * 0.3 - w[1] * 1.2 + w[2] * 0.7 + w[3] * 2.0, 1e-15);
  }
}

TEST(Coupling, ZeroFieldIsIdentity) {
  const Discretization disc = make_disc(4, 32, 3);
  std::mt19937_64 rng(1);
  const BandMomentField f = test::random_field(disc, rng);
  const FieldState e(disc.n_elements(), disc.n_basis());
  EXPECT_EQ(coupling_step(f, e, 0.05, disc), f);
}

TEST(Coupling, ConservesGlobalMoments) {
  // Interface fluxes telescope and the walls are closed.
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const int np = 1 + trial % 4;
    const Discretization disc = make_disc(3, 40, np);
    const BandMomentField f = test::random_field(disc, rng, 4);
    const FieldState e = test::random_efield(disc, rng, 0.5);
    const double dt = 0.5 * disc.grid.dv / (5.0 * 2.0);
    const BandMomentField g = coupling_step(f, e, dt, disc);
    const Moments before = global_moment_totals(f, disc);
    const Moments after = global_moment_totals(g, disc);
    for (int l = 0; l < kMomentCount; ++l) {
      EXPECT_LE(std::abs(after[l] - before[l]), 1e-13 * std::abs(before[l]))
          << "trial " << trial << " l=" << l;
    }
    EXPECT_NE(g, f);
  }
}

TEST(Coupling, FastKernelMatchesReference) {
  std::mt19937_64 rng(3);
  for (int np = 1; np <= 4; ++np) {
    const Discretization disc = make_disc(5, 24, np);
    const BandMomentField f = test::random_field(disc, rng, 2);
    const FieldState e = test::random_efield(disc, rng, 0.8);
    const double dt = 0.02;
    const BandMomentField a = coupling_step(f, e, dt, disc);
    const BandMomentField b = coupling_step_reference(f, e, dt, disc);
    const BandMomentField bound = test::coupling_rounding_bound(f, e, dt, disc);
    EXPECT_LE(test::max_scaled_diff(a.data(), b.data(), bound.data()), 1.0) << "np=" << np;
  }
}

TEST(Coupling, SerialAndOpenMPAreBitwiseEqual) {
  std::mt19937_64 rng(4);
  const Discretization disc = make_disc(9, 32, 4);
  const BandMomentField f = test::random_field(disc, rng, 2);
  const FieldState e = test::random_efield(disc, rng, 0.5);
  const BandMomentField a = coupling_step(f, e, 0.01, disc, {ExecutionPolicy::serial()});
  const BandMomentField b = coupling_step(f, e, 0.01, disc, {ExecutionPolicy::openmp(3)});
  EXPECT_EQ(a, b);
}

// v -> -v: band j <-> nb-1-j, M_l -> (-1)^l M_l, E -> -E.
BandMomentField mirror(const BandMomentField& f) {
  BandMomentField g(f.n_elements(), f.n_bands(), f.n_basis());
  for (int i = 0; i < f.n_elements(); ++i) {
    for (int j = 0; j < f.n_bands(); ++j) {
      for (int l = 0; l < kMomentCount; ++l) {
        for (int k = 0; k < f.n_basis(); ++k) {
          g(i, f.n_bands() - 1 - j, l, k) = (l % 2 ? -1.0 : 1.0) * f(i, j, l, k);
        }
      }
    }
  }
  return g;
}

TEST(Coupling, SignSymmetry) {
  std::mt19937_64 rng(5);
  for (int np = 1; np <= 4; ++np) {
    const Discretization disc = make_disc(4, 32, np);
    const BandMomentField f = test::random_field(disc, rng, 3);
    FieldState e = test::random_efield(disc, rng, 0.5);
    FieldState minus_e = e;
    for (double& c : minus_e.e) c = -c;
    const BandMomentField a = mirror(coupling_step(f, e, 0.02, disc));
    const BandMomentField b = coupling_step(mirror(f), minus_e, 0.02, disc);
    const BandMomentField bound = mirror(test::coupling_rounding_bound(f, e, 0.02, disc));
    std::vector<double> abs_bound(bound.data().begin(), bound.data().end());
    for (double& x : abs_bound) x = std::abs(x);
    EXPECT_LE(test::max_scaled_diff(a.data(), b.data(), abs_bound), 1.0) << "np=" << np;
  }
}

TEST(Coupling, UpwindDirectionFollowsField) {
  // A single occupied band with E < 0 (a > 0) pushes mass only upward.
  const Discretization disc = make_disc(1, 16, 1);
  BandMomentField f(1, 16, 1);
  const Moments m = moments_of_function([](double) { return 1.0; }, disc.grid.lower_edge(8),
                                        disc.grid.upper_edge(8));
  for (int l = 0; l < kMomentCount; ++l) f(0, 8, l, 0) = m[l];
  FieldState e(1, 1);
  e.e[0] = -0.3;
  const BandMomentField g = coupling_step(f, e, 0.05, disc);
  EXPECT_GT(g(0, 9, 0, 0), 0.0);
  EXPECT_EQ(g(0, 7, 0, 0), 0.0);
  EXPECT_LT(g(0, 8, 0, 0), f(0, 8, 0, 0));
  e.e[0] = 0.3;
  const BandMomentField h = coupling_step(f, e, 0.05, disc);
  EXPECT_GT(h(0, 7, 0, 0), 0.0);
  EXPECT_EQ(h(0, 9, 0, 0), 0.0);
}

// The moment system this half-step discretizes, with upwind edge values:
//   dM^(j)/dt = -(S_+^(j) F_{j+1/2} - S_-^(j) F_{j-1/2}),  F = a alpha_upwind,
// integrated with RK4 on a much finer step.
std::vector<double> edge_exchange_oracle(const std::vector<double>& m0, double a, double dt,
                                         const Discretization& disc) {
  const int nb = disc.n_bands();
  auto rhs = [&](const std::vector<double>& m) {
    std::vector<double> flux(nb + 1, 0.0);
    std::vector<double> d(m.size(), 0.0);
    for (int i = 1; i < nb; ++i) {
      const int src = a > 0 ? i - 1 : i;
      const Moments& w = a > 0 ? disc.closures[src].edges.plus : disc.closures[src].edges.minus;
      double alpha = 0.0;
      for (int l = 0; l < kMomentCount; ++l) alpha += w[l] * m[src * kMomentCount + l];
      flux[i] = a * alpha;
    }
    for (int j = 0; j < nb; ++j) {
      for (int l = 0; l < kMomentCount; ++l) {
        d[j * kMomentCount + l] = -(disc.closures[j].s_plus[l] * flux[j + 1] -
                                    disc.closures[j].s_minus[l] * flux[j]);
      }
    }
    return d;
  };
  std::vector<double> m = m0;
  const int n = 400;
  const double h = dt / n;
  for (int s = 0; s < n; ++s) {
    auto axpy = [&](const std::vector<double>& k, double c) {
      std::vector<double> t(m);
      for (std::size_t i = 0; i < t.size(); ++i) t[i] += c * k[i];
      return t;
    };
    const auto k1 = rhs(m);
    const auto k2 = rhs(axpy(k1, 0.5 * h));
    const auto k3 = rhs(axpy(k2, 0.5 * h));
    const auto k4 = rhs(axpy(k3, h));
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return m;
}

TEST(Coupling, MatchesEdgeExchangeSystemToHighOrder) {
  const Discretization disc = make_disc(1, 64, 1);
  std::vector<double> m0(64 * kMomentCount);
  BandMomentField f(1, 64, 1);
  for (int j = 0; j < 64; ++j) {
    const Moments m = moments_of_function(test::maxwellian, disc.grid.lower_edge(j),
                                          disc.grid.upper_edge(j));
    for (int l = 0; l < kMomentCount; ++l) {
      m0[j * kMomentCount + l] = m[l];
      f(0, j, l, 0) = m[l];
    }
  }
  for (double field : {0.5, -0.5}) {
    FieldState e(1, 1);
    e.e[0] = field;
    std::vector<double> errors;
    for (double dt : {0.02, 0.01, 0.005}) {
      const std::vector<double> ref = edge_exchange_oracle(m0, -field, dt, disc);
      const BandMomentField g = coupling_step(f, e, dt, disc);
      double num = 0.0;
      double den = 0.0;
      for (int j = 0; j < 64; ++j) {
        for (int l = 0; l < kMomentCount; ++l) {
          const double d = g(0, j, l, 0) - ref[j * kMomentCount + l];
          num += d * d;
          den += ref[j * kMomentCount + l] * ref[j * kMomentCount + l];
        }
      }
      errors.push_back(std::sqrt(num / den));
    }
    // Local error of a cubic-in-time update: the ratio per halving is ~2^5.
    EXPECT_GT(errors[0] / errors[1], 16.0);
    EXPECT_GT(errors[1] / errors[2], 16.0);
    EXPECT_LT(errors[2], 1e-6);
  }
}

TEST(Coupling, MaxKappa) {
  const Discretization disc = make_disc(2, 10, 1, 1.0);
  FieldState e(2, 1);
  e.e = {0.5, -2.0};
  EXPECT_NEAR(max_kappa(e, 0.01, disc), 5.0 * 2.0 * 0.01 / 0.2, 1e-15);
}

TEST(Coupling, EdgeValuesOfConstant) {
  const Discretization disc = make_disc(1, 8, 2, 1.0);
  BandMomentField f(1, 8, 2);
  for (int j = 0; j < 8; ++j) {
    const Moments m = moments_of_function([](double) { return 3.0; }, disc.grid.lower_edge(j),
                                          disc.grid.upper_edge(j));
    for (int l = 0; l < kMomentCount; ++l) f(0, j, l, 0) = m[l];
  }
  const EdgeValues ev = alpha_edges(f, disc, 0, 1);
  for (int j = 0; j < 8; ++j) {
    // Exact up to eps times the absolute sum of N_l M_l.
    const auto& n = disc.closures[j].edges;
    double up = 0.0;
    double down = 0.0;
    for (int l = 0; l < kMomentCount; ++l) {
      up += std::abs(n.plus[l] * f(0, j, l, 0));
      down += std::abs(n.minus[l] * f(0, j, l, 0));
    }
    EXPECT_NEAR(ev.plus[j], 3.0, 64.0 * 2.220446049250313e-16 * up) << "j=" << j;
    EXPECT_NEAR(ev.minus[j], 3.0, 64.0 * 2.220446049250313e-16 * down) << "j=" << j;
  }
}

}  // namespace
}  // namespace vband
