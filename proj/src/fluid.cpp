#include "vband/fluid.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <type_traits>

#include "vband/error.hpp"

namespace vband {
namespace {

// Time nodes of the corrector and the map from samples at those nodes to
// Taylor coefficients at tau = 0.
struct StepTables {
  int n_t = 0;
  double dt = 0.0;
  std::vector<double> tau;
  std::vector<double> weight;                    // sums to dt
  std::vector<std::vector<double>> from_samples; // [r][g]
  std::vector<double> average;                   // [r] = dt^r / (r+1)!
  std::vector<std::vector<double>> product;      // [r][s] = int tau^r/r! tau^s/s!
};

StepTables make_tables(int n_basis, double dt) {
  StepTables t;
  t.n_t = n_basis;
  t.dt = dt;
  const GaussRule rule = gauss_legendre_rule(n_basis);
  t.tau.resize(n_basis);
  t.weight.resize(n_basis);
  Eigen::MatrixXd v(n_basis, n_basis);
  for (int g = 0; g < n_basis; ++g) {
    t.tau[g] = 0.5 * dt * (1.0 + rule.nodes[g]);
    t.weight[g] = 0.5 * dt * rule.weights[g];
    double p = 1.0;
    for (int r = 0; r < n_basis; ++r) {
      v(g, r) = p;
      p *= t.tau[g] / (r + 1);
    }
  }
  const Eigen::MatrixXd inv = v.inverse();
  t.from_samples.assign(n_basis, std::vector<double>(n_basis));
  for (int r = 0; r < n_basis; ++r) {
    for (int g = 0; g < n_basis; ++g) t.from_samples[r][g] = inv(r, g);
  }
  t.average.resize(n_basis);
  double p = 1.0;
  for (int r = 0; r < n_basis; ++r) {
    p /= (r + 1);
    t.average[r] = p;
    p *= dt;
  }
  t.product.assign(n_basis, std::vector<double>(n_basis));
  for (int r = 0; r < n_basis; ++r) {
    for (int q = 0; q < n_basis; ++q) {
      t.product[r][q] = std::pow(dt, r + q + 1) /
                        (std::tgamma(r + 1.0) * std::tgamma(q + 1.0) * (r + q + 1));
    }
  }
  return t;
}

// Velocity sample points of every band for forcing moments.
struct VelocityNodes {
  std::vector<double> v;       // [j][q]
  std::vector<double> weight;  // [j][q], includes the band Jacobian
};

VelocityNodes make_velocity_nodes(const BandGrid& grid) {
  const GaussRule& rule = band_rule();
  VelocityNodes n;
  n.v.reserve(static_cast<std::size_t>(grid.n_bands) * rule.size());
  n.weight.reserve(n.v.capacity());
  for (int j = 0; j < grid.n_bands; ++j) {
    const double lo = grid.lower_edge(j);
    const double hi = grid.upper_edge(j);
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (int q = 0; q < rule.size(); ++q) {
      n.v.push_back(mid + half * rule.nodes[q]);
      n.weight.push_back(half * rule.weights[q]);
    }
  }
  return n;
}

void band_moments_from_samples(const VelocityNodes& nodes, std::span<const double> psi,
                               int n_bands, double* out /* [j][l] */) {
  const int nq = band_rule().size();
  for (int j = 0; j < n_bands; ++j) {
    double acc[kMomentCount] = {0, 0, 0, 0, 0};
    for (int q = 0; q < nq; ++q) {
      const std::size_t idx = static_cast<std::size_t>(j) * nq + q;
      double w = nodes.weight[idx] * psi[idx];
      for (int l = 0; l < kMomentCount; ++l) {
        acc[l] += w;
        w *= nodes.v[idx];
      }
    }
    for (int l = 0; l < kMomentCount; ++l) out[j * kMomentCount + l] = acc[l];
  }
}

constexpr double kBinom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};

struct ElementWorkspace {
  ElementPrediction pred;
  std::vector<double> psi;             // [j][q] samples
  std::vector<double> forcing_nodal;   // [g][m][j][l]
  std::vector<double> forcing_modal;   // [g][j][l][k]
  std::vector<double> forcing_taylor;  // [r][j][l][k]
  std::vector<double> ampere_modal;    // [g][k]
  std::vector<double> ampere_taylor;   // [r][k]
  std::vector<double> m_nodal;         // [r][j][l][m]
  std::vector<double> e_nodal;         // [r][m]
};

struct Sizes {
  int nb, np, nt;
  std::size_t block;  // nb * 5 * np
};

// Samples forcing at the corrector's space-time nodes and converts it to
// modal values per time node and Taylor coefficients at tau = 0.
void sample_forcing(const Forcing& forcing, int element, double t, const StepTables& tab,
                    const Discretization& disc, const VelocityNodes& vnodes,
                    ElementWorkspace& ws, const Sizes& s) {
  const BasisQuadrature& q = disc.quad;
  ws.forcing_modal.assign(static_cast<std::size_t>(s.nt) * s.block, 0.0);
  ws.forcing_taylor.assign(static_cast<std::size_t>(s.nt) * s.block, 0.0);
  ws.ampere_modal.assign(static_cast<std::size_t>(s.nt) * s.np, 0.0);
  ws.ampere_taylor.assign(static_cast<std::size_t>(s.nt) * s.np, 0.0);
  std::vector<double> nodal(static_cast<std::size_t>(s.nb) * kMomentCount);
  for (int g = 0; g < s.nt; ++g) {
    const double time = t + tab.tau[g];
    for (int m = 0; m < q.n_nodes(); ++m) {
      const double x = disc.mesh.to_physical(element, q.nodes[m]);
      const double pw = 0.5 * q.weights[m];
      if (forcing.has_kinetic()) {
        ws.psi.resize(vnodes.v.size());
        forcing.kinetic(time, x, vnodes.v, ws.psi);
        band_moments_from_samples(vnodes, ws.psi, s.nb, nodal.data());
        double* dst = &ws.forcing_modal[g * s.block];
        for (int j = 0; j < s.nb; ++j) {
          for (int l = 0; l < kMomentCount; ++l) {
            const double val = nodal[j * kMomentCount + l];
            double* d = dst + (static_cast<std::size_t>(j) * kMomentCount + l) * s.np;
            for (int k = 0; k < s.np; ++k) d[k] += pw * q.values[k][m] * val;
          }
        }
      }
      if (forcing.has_ampere()) {
        const double a = forcing.ampere(time, x);
        for (int k = 0; k < s.np; ++k) ws.ampere_modal[g * s.np + k] += pw * q.values[k][m] * a;
      }
    }
  }
  for (int r = 0; r < s.nt; ++r) {
    for (int g = 0; g < s.nt; ++g) {
      const double c = tab.from_samples[r][g];
      const double* src = &ws.forcing_modal[g * s.block];
      double* dst = &ws.forcing_taylor[r * s.block];
      for (std::size_t idx = 0; idx < s.block; ++idx) dst[idx] += c * src[idx];
      for (int k = 0; k < s.np; ++k) ws.ampere_taylor[r * s.np + k] += c * ws.ampere_modal[g * s.np + k];
    }
  }
}

// Basis tables with the mode count fixed at compile time so the per-band
// loops below unroll.
template <int NP>
struct Quad {
  double val[NP][NP];   // psi_k(xi_m)
  double proj[NP][NP];  // (1/2) w_m psi_k(xi_m)
  double der[NP][NP];   // coefficient of psi_k in psi_kk'
  double stiff[NP][NP];
  double left[NP];
  double right[NP];

  explicit Quad(const BasisQuadrature& q) {
    for (int k = 0; k < NP; ++k) {
      for (int m = 0; m < NP; ++m) {
        val[k][m] = q.values[k][m];
        proj[k][m] = 0.5 * q.weights[m] * q.values[k][m];
        der[k][m] = q.derivative[k][m];
        stiff[k][m] = q.stiffness[k][m];
      }
      left[k] = q.left_trace[k];
      right[k] = q.right_trace[k];
    }
  }
};

template <int NP>
void nodal_level(const ElementPrediction& p, int r, const Quad<NP>& q, ElementWorkspace& ws,
                 int nb) {
  const double* src = &p.moments[static_cast<std::size_t>(r) * nb * kMomentCount * NP];
  double* dst = &ws.m_nodal[static_cast<std::size_t>(r) * nb * kMomentCount * NP];
  for (int row = 0; row < nb * kMomentCount; ++row) {
    const double* a = src + row * NP;
    double* b = dst + row * NP;
    for (int m = 0; m < NP; ++m) {
      double v = 0.0;
      for (int k = 0; k < NP; ++k) v += a[k] * q.val[k][m];
      b[m] = v;
    }
  }
  for (int m = 0; m < NP; ++m) {
    double v = 0.0;
    for (int k = 0; k < NP; ++k) v += p.e(r, k) * q.val[k][m];
    ws.e_nodal[r * NP + m] = v;
  }
}

// Cauchy-Kovalevskaya recursion for one element. Leaves nodal values of
// every Taylor level in ws.m_nodal / ws.e_nodal.
template <int NP>
void predict_element(std::span<const double> block, const double* e_coeffs, double j0,
                     bool forced, const Discretization& disc, const Quad<NP>& q,
                     ElementWorkspace& ws, const Sizes& s) {
  ElementPrediction& p = ws.pred;
  if (p.n_bands != s.nb || p.n_basis != NP || p.n_terms != NP) p.resize(s.nb, NP, NP);
  ws.m_nodal.resize(static_cast<std::size_t>(NP) * s.nb * kMomentCount * NP);
  ws.e_nodal.resize(static_cast<std::size_t>(NP) * NP);
  std::copy(block.begin(), block.end(), p.moments.begin());
  for (int k = 0; k < NP; ++k) p.e(0, k) = e_coeffs[k];
  nodal_level<NP>(p, 0, q, ws, s.nb);

  const double ddx = 2.0 / disc.mesh.dx;
  const std::size_t level = s.block;
  for (int r = 0; r + 1 < NP; ++r) {
    for (int k = 0; k < NP; ++k) {
      double v = 0.0;
      for (int j = 0; j < s.nb; ++j) v += p.moment(r, j, 1, k);
      if (r == 0 && k == 0) v -= j0;
      if (forced) v += ws.ampere_taylor[r * NP + k];
      p.e(r + 1, k) = v;
    }
    double em[NP][NP];  // C(r, s) E_s at node m
    for (int sIdx = 0; sIdx <= r; ++sIdx) {
      for (int m = 0; m < NP; ++m) em[sIdx][m] = kBinom[r][sIdx] * ws.e_nodal[sIdx * NP + m];
    }
    for (int j = 0; j < s.nb; ++j) {
      const Moments& row = disc.closures[j].op.matrix[4];
      const double* mr = &p.moments[r * level + static_cast<std::size_t>(j) * kMomentCount * NP];
      double deriv[kMomentCount][NP];
      for (int l = 0; l < kMomentCount; ++l) {
        for (int k = 0; k < NP; ++k) {
          double d = 0.0;
          for (int kk = 0; kk < NP; ++kk) d += q.der[k][kk] * mr[l * NP + kk];
          deriv[l][k] = ddx * d;
        }
      }
      // Leibniz: d^r/dt^r (E S(M)) = sum_s C(r,s) E_s S(M_{r-s}).
      double src[kMomentCount][NP] = {};
      for (int sIdx = 0; sIdx <= r; ++sIdx) {
        const double* mn =
            &ws.m_nodal[(r - sIdx) * level + static_cast<std::size_t>(j) * kMomentCount * NP];
        for (int l = 1; l < kMomentCount; ++l) {
          for (int m = 0; m < NP; ++m) src[l][m] += em[sIdx][m] * l * mn[(l - 1) * NP + m];
        }
      }
      double* out = &p.moments[(r + 1) * level + static_cast<std::size_t>(j) * kMomentCount * NP];
      const double* forcing =
          forced ? &ws.forcing_taylor[r * level + static_cast<std::size_t>(j) * kMomentCount * NP]
                 : nullptr;
      for (int k = 0; k < NP; ++k) {
        double flux_last = 0.0;
        for (int l = 0; l < kMomentCount; ++l) flux_last += row[l] * deriv[l][k];
        for (int l = 0; l < kMomentCount; ++l) {
          double prod = 0.0;
          for (int m = 0; m < NP; ++m) prod += q.proj[k][m] * src[l][m];
          const double adx = (l + 1 < kMomentCount) ? deriv[l + 1][k] : flux_last;
          double v = -adx - prod;
          if (forcing) v += forcing[l * NP + k];
          out[l * NP + k] = v;
        }
      }
    }
    nodal_level<NP>(p, r + 1, q, ws, s.nb);
  }
}

// Element-local part of the corrector: time-averaged modes (for fluxes),
// integrated sources, and the Ampere update of E. The source E S(M) is a
// product of two Taylor polynomials in tau and is integrated over [0, dt]
// exactly: int tau^r/r! tau^s/s! = dt^(r+s+1) / (r! s! (r+s+1)).
template <int NP>
void corrector_local(const StepTables& tab, double j0, bool forced, const Quad<NP>& q,
                     ElementWorkspace& ws, const Sizes& s, double* avg_out, double* delta_out,
                     const double* e_old, double* e_out) {
  const ElementPrediction& p = ws.pred;
  double avg_w[NP];
  for (int r = 0; r < NP; ++r) avg_w[r] = tab.average[r];
  for (std::size_t idx = 0; idx < s.block; ++idx) {
    double v = 0.0;
    for (int r = 0; r < NP; ++r) v += avg_w[r] * p.moments[r * s.block + idx];
    avg_out[idx] = v;
  }

  // ew[s][m] = sum_r c_rs E_r(xi_m).
  double ew[NP][NP];
  for (int sIdx = 0; sIdx < NP; ++sIdx) {
    for (int m = 0; m < NP; ++m) {
      double v = 0.0;
      for (int r = 0; r < NP; ++r) v += tab.product[r][sIdx] * ws.e_nodal[r * NP + m];
      ew[sIdx][m] = v;
    }
  }
  const std::size_t level = s.block;
  for (int j = 0; j < s.nb; ++j) {
    const std::size_t base = static_cast<std::size_t>(j) * kMomentCount * NP;
    double* dj = delta_out + base;
    for (int k = 0; k < NP; ++k) dj[k] = 0.0;
    for (int l = 1; l < kMomentCount; ++l) {
      double src[NP];
      for (int m = 0; m < NP; ++m) {
        double v = 0.0;
        for (int sIdx = 0; sIdx < NP; ++sIdx) {
          v += ew[sIdx][m] * ws.m_nodal[sIdx * level + base + (l - 1) * NP + m];
        }
        src[m] = -l * v;
      }
      for (int k = 0; k < NP; ++k) {
        double v = 0.0;
        for (int m = 0; m < NP; ++m) v += q.proj[k][m] * src[m];
        dj[l * NP + k] = v;
      }
    }
  }
  if (forced) {
    for (int g = 0; g < NP; ++g) {
      const double* src = &ws.forcing_modal[g * s.block];
      for (std::size_t idx = 0; idx < s.block; ++idx) delta_out[idx] += tab.weight[g] * src[idx];
    }
  }

  for (int k = 0; k < NP; ++k) {
    double current = 0.0;
    for (int j = 0; j < s.nb; ++j) {
      current += avg_out[(static_cast<std::size_t>(j) * kMomentCount + 1) * NP + k];
    }
    if (k == 0) current -= j0;
    double v = e_old[k] + tab.dt * current;
    if (forced) {
      for (int g = 0; g < NP; ++g) v += tab.weight[g] * ws.ampere_modal[g * NP + k];
    }
    e_out[k] = v;
  }
}

template <typename Fn>
void with_basis_size(int np, Fn&& fn) {
  switch (np) {
    case 1: fn(std::integral_constant<int, 1>{}); return;
    case 2: fn(std::integral_constant<int, 2>{}); return;
    case 3: fn(std::integral_constant<int, 3>{}); return;
    case 4: fn(std::integral_constant<int, 4>{}); return;
    default: throw ConfigError("fluid step: unsupported number of modes " + std::to_string(np));
  }
}

template <int NP>
Moments trace(const double* avg_block, int j, const double* basis_trace) {
  Moments out{};
  const double* b = avg_block + static_cast<std::size_t>(j) * kMomentCount * NP;
  for (int l = 0; l < kMomentCount; ++l) {
    double v = 0.0;
    for (int k = 0; k < NP; ++k) v += b[l * NP + k] * basis_trace[k];
    out[l] = v;
  }
  return out;
}

}  // namespace

std::vector<Moments> apply_forcing_moments(const Forcing& forcing, double t, double x,
                                           const BandGrid& grid) {
  std::vector<Moments> out(grid.n_bands, Moments{});
  if (!forcing.has_kinetic()) return out;
  const VelocityNodes nodes = make_velocity_nodes(grid);
  std::vector<double> psi(nodes.v.size());
  forcing.kinetic(t, x, nodes.v, psi);
  std::vector<double> flat(static_cast<std::size_t>(grid.n_bands) * kMomentCount);
  band_moments_from_samples(nodes, psi, grid.n_bands, flat.data());
  for (int j = 0; j < grid.n_bands; ++j) {
    for (int l = 0; l < kMomentCount; ++l) out[j][l] = flat[j * kMomentCount + l];
  }
  return out;
}

Moments numerical_flux(const Moments& left, const Moments& right, const ClosureOperator& op) {
  const Moments al = op.apply(left);
  const Moments ar = op.apply(right);
  Moments f{};
  for (int l = 0; l < kMomentCount; ++l) {
    f[l] = 0.5 * (al[l] + ar[l]) - 0.5 * op.spectral_radius * (right[l] - left[l]);
  }
  return f;
}

void ElementPrediction::resize(int bands, int basis, int terms) {
  n_bands = bands;
  n_basis = basis;
  n_terms = terms;
  moments.assign(static_cast<std::size_t>(terms) * bands * kMomentCount * basis, 0.0);
  efield.assign(static_cast<std::size_t>(terms) * basis, 0.0);
}

double ElementPrediction::moment_at(int j, int l, int k, double tau) const {
  double v = 0.0;
  double p = 1.0;
  for (int r = 0; r < n_terms; ++r) {
    v += p * moment(r, j, l, k);
    p *= tau / (r + 1);
  }
  return v;
}

double ElementPrediction::e_at(int k, double tau) const {
  double v = 0.0;
  double p = 1.0;
  for (int r = 0; r < n_terms; ++r) {
    v += p * e(r, k);
    p *= tau / (r + 1);
  }
  return v;
}

SpaceTimePrediction cauchy_kovalevskaya_predict(const BandMomentField& field,
                                                const FieldState& e, const Forcing* forcing,
                                                double t, double dt,
                                                const Discretization& disc,
                                                const ExecutionPolicy& policy) {
  const Sizes s{disc.n_bands(), disc.n_basis(), disc.n_basis(), field.element_size()};
  const StepTables tab = make_tables(s.np, dt);
  const VelocityNodes vnodes = make_velocity_nodes(disc.grid);
  const bool forced = forcing && (forcing->has_kinetic() || forcing->has_ampere());
  SpaceTimePrediction out;
  out.t0 = t;
  out.dt = dt;
  out.elements.resize(disc.n_elements());
  with_basis_size(s.np, [&](auto size) {
    constexpr int NP = decltype(size)::value;
    const Quad<NP> q(disc.quad);
    for_each_index(policy, disc.n_elements(), [&](int i) {
      ElementWorkspace ws;
      if (forced) sample_forcing(*forcing, i, t, tab, disc, vnodes, ws, s);
      predict_element<NP>(field.element(i), e.element(i), e.j0, forced, disc, q, ws, s);
      out.elements[i] = std::move(ws.pred);
    });
  });
  return out;
}

void fluid_step_in_place(BandMomentField& field, FieldState& e, const Forcing* forcing,
                         double t, double dt, const Discretization& disc,
                         const ExecutionPolicy& policy) {
  const int ne = disc.n_elements();
  const Sizes s{disc.n_bands(), disc.n_basis(), disc.n_basis(), field.element_size()};
  const StepTables tab = make_tables(s.np, dt);
  const bool forced = forcing && (forcing->has_kinetic() || forcing->has_ampere());
  const VelocityNodes vnodes = forced ? make_velocity_nodes(disc.grid) : VelocityNodes{};
  const BasisQuadrature& q = disc.quad;

  // Every entry is overwritten below, so the buffers are reused across steps
  // without clearing. Workers see them through plain pointers.
  static thread_local std::vector<double> avg_store;
  static thread_local std::vector<double> delta_store;
  avg_store.resize(field.data().size());
  delta_store.resize(field.data().size());
  double* const avg = avg_store.data();
  double* const delta = delta_store.data();
  FieldState e_new = e;

  const bool periodic = disc.mesh.boundary == BoundaryKind::kPeriodic;
  const int n_iface = periodic ? ne : ne + 1;
  std::vector<Moments> flux(static_cast<std::size_t>(n_iface) * s.nb);
  const double lambda = dt / disc.mesh.dx;

  with_basis_size(s.np, [&](auto size) {
    constexpr int NP = decltype(size)::value;
    const Quad<NP> qt(q);

    // Phase 1: element-local predictor and sources.
    auto local = [&](int i, ElementWorkspace& ws) {
      if (forced) sample_forcing(*forcing, i, t, tab, disc, vnodes, ws, s);
      predict_element<NP>(field.element(i), e.element(i), e.j0, forced, disc, qt, ws, s);
      corrector_local<NP>(tab, e.j0, forced, qt, ws, s, &avg[i * s.block], &delta[i * s.block],
                          e.element(i), e_new.element(i));
    };
    if (policy.backend == Backend::kSerial) {
      ElementWorkspace ws;
      for (int i = 0; i < ne; ++i) local(i, ws);
    } else {
#pragma omp parallel num_threads(policy.workers)
      {
        ElementWorkspace ws;
#pragma omp for schedule(static)
        for (int i = 0; i < ne; ++i) local(i, ws);
      }
    }

    // Phase 2: interface fluxes. Interface f sits left of element f; an open
    // mesh has n_elements + 1 of them, a periodic one n_elements.
    for_each_index(policy, n_iface, [&](int f) {
      const int left_el = f == 0 ? (periodic ? ne - 1 : -1) : f - 1;
      const int right_el = f == ne ? -1 : f;
      for (int j = 0; j < s.nb; ++j) {
        const ClosureOperator& op = disc.closures[j].op;
        const double vj = disc.grid.centers[j];
        Moments ql{};
        Moments qr{};
        if (left_el >= 0) ql = trace<NP>(&avg[left_el * s.block], j, qt.right);
        if (right_el >= 0) qr = trace<NP>(&avg[right_el * s.block], j, qt.left);
        // Zero-inflow ghosts: bands moving into the domain see an empty
        // exterior, outgoing bands copy the interior trace.
        if (left_el < 0 && vj <= 0.0) ql = qr;
        if (right_el < 0 && vj >= 0.0) qr = ql;
        flux[static_cast<std::size_t>(f) * s.nb + j] = numerical_flux(ql, qr, op);
      }
    });

    // Phase 3: DG update.
    for_each_index(policy, ne, [&](int i) {
      const int f_left = i;
      const int f_right = periodic ? (i + 1) % ne : i + 1;
      std::span<double> block = field.element(i);
      const double* a = &avg[i * s.block];
      const double* d = &delta[i * s.block];
      for (int j = 0; j < s.nb; ++j) {
        const Moments& row = disc.closures[j].op.matrix[4];
        const Moments& fl = flux[static_cast<std::size_t>(f_left) * s.nb + j];
        const Moments& fr = flux[static_cast<std::size_t>(f_right) * s.nb + j];
        const std::size_t base = static_cast<std::size_t>(j) * kMomentCount * NP;
        const double* aj = a + base;
        // A applied to every averaged mode: a shift plus the closure row.
        double amodes[kMomentCount][NP];
        for (int k = 0; k < NP; ++k) {
          double last = 0.0;
          for (int l = 0; l < kMomentCount; ++l) last += row[l] * aj[l * NP + k];
          for (int l = 0; l + 1 < kMomentCount; ++l) amodes[l][k] = aj[(l + 1) * NP + k];
          amodes[kMomentCount - 1][k] = last;
        }
        for (int l = 0; l < kMomentCount; ++l) {
          for (int k = 0; k < NP; ++k) {
            double vol = 0.0;
            for (int kk = 0; kk < NP; ++kk) vol += qt.stiff[k][kk] * amodes[l][kk];
            const double surf = qt.right[k] * fr[l] - qt.left[k] * fl[l];
            const std::size_t idx = base + l * NP + k;
            block[idx] += lambda * (vol - surf) + d[idx];
          }
        }
      }
    });
  });

  for (int i = 0; i < ne; ++i) {
    for (double v : field.element(i)) {
      if (!std::isfinite(v)) {
        throw NumericalError("fluid step produced a non-finite moment in element " +
                             std::to_string(i));
      }
    }
  }
  for (double v : e_new.e) {
    if (!std::isfinite(v)) throw NumericalError("fluid step produced a non-finite field");
  }
  e = std::move(e_new);
}

std::pair<BandMomentField, FieldState> fluid_step(const BandMomentField& field,
                                                  const FieldState& e,
                                                  const Forcing* forcing, double t,
                                                  double dt, const Discretization& disc,
                                                  const ExecutionPolicy& policy) {
  std::pair<BandMomentField, FieldState> out{field, e};
  fluid_step_in_place(out.first, out.second, forcing, t, dt, disc, policy);
  return out;
}

}  // namespace vband
