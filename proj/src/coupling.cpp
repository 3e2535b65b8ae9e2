#include "vband/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vband/error.hpp"

namespace vband {
namespace {

void check_finite(std::span<const double> values, int element) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw NumericalError("coupling step produced a non-finite moment in element " +
                           std::to_string(element));
    }
  }
}

// Per-step tables, flattened so the element kernel reads contiguous memory.
template <int NP>
struct CouplingTables {
  int nb = 0;
  double dv = 0.0;
  std::vector<double> edge_plus;   // [j][l]
  std::vector<double> edge_minus;  // [j][l]
  std::vector<double> s_plus;      // [j][l]
  std::vector<double> s_minus;     // [j][l]
  double val[NP][NP];              // psi_k(xi_m)
  double proj[NP][NP];             // (1/2) w_m psi_k(xi_m)

  explicit CouplingTables(const Discretization& disc) : nb(disc.n_bands()), dv(disc.grid.dv) {
    const std::size_t n = static_cast<std::size_t>(nb) * kMomentCount;
    edge_plus.resize(n);
    edge_minus.resize(n);
    s_plus.resize(n);
    s_minus.resize(n);
    for (int j = 0; j < nb; ++j) {
      const BandClosure& c = disc.closures[j];
      for (int l = 0; l < kMomentCount; ++l) {
        edge_plus[j * kMomentCount + l] = c.edges.plus[l];
        edge_minus[j * kMomentCount + l] = c.edges.minus[l];
        s_plus[j * kMomentCount + l] = c.s_plus[l];
        s_minus[j * kMomentCount + l] = c.s_minus[l];
      }
    }
    const BasisQuadrature& q = disc.quad;
    for (int k = 0; k < NP; ++k) {
      for (int m = 0; m < NP; ++m) {
        val[k][m] = q.values[k][m];
        proj[k][m] = 0.5 * q.weights[m] * q.values[k][m];
      }
    }
  }
};

struct ElementWorkspace {
  std::vector<double> modal_plus;   // [j][k]: edge functional applied to each mode
  std::vector<double> modal_minus;  // [j][k]
  std::vector<double> edge;         // [j] at the current node
  std::vector<double> flux;         // [iface][k], iface in 0..n_bands
};

template <int NP>
void coupling_element(std::span<double> block, const double* e_coeffs, double dt,
                      const CouplingTables<NP>& tab, ElementWorkspace& ws) {
  const int nb = tab.nb;
  ws.modal_plus.resize(static_cast<std::size_t>(nb) * NP);
  ws.modal_minus.resize(static_cast<std::size_t>(nb) * NP);
  ws.edge.resize(nb);
  ws.flux.assign(static_cast<std::size_t>(nb + 1) * NP, 0.0);

  // Edge values are linear in the moments, so they are formed per mode once
  // and then evaluated at each node.
  for (int j = 0; j < nb; ++j) {
    const double* mj = block.data() + static_cast<std::size_t>(j) * kMomentCount * NP;
    const double* ep = &tab.edge_plus[j * kMomentCount];
    const double* em = &tab.edge_minus[j * kMomentCount];
    for (int k = 0; k < NP; ++k) {
      double up = 0.0;
      double down = 0.0;
      for (int l = 0; l < kMomentCount; ++l) {
        up += ep[l] * mj[l * NP + k];
        down += em[l] * mj[l * NP + k];
      }
      ws.modal_plus[j * NP + k] = up;
      ws.modal_minus[j * NP + k] = down;
    }
  }

  for (int m = 0; m < NP; ++m) {
    double e_node = 0.0;
    for (int k = 0; k < NP; ++k) e_node += e_coeffs[k] * tab.val[k][m];
    const double speed = -e_node;
    if (speed == 0.0) continue;
    const bool upward = speed > 0.0;
    const double courant = std::abs(speed) * dt / tab.dv;

    const std::vector<double>& modal = upward ? ws.modal_plus : ws.modal_minus;
    for (int j = 0; j < nb; ++j) {
      double v = 0.0;
      for (int k = 0; k < NP; ++k) v += modal[j * NP + k] * tab.val[k][m];
      ws.edge[j] = v;
    }

    // Interior interfaces only; the walls at v_min / v_max stay closed.
    // Interface i separates bands i-1 and i; its upwind band is i-1 for an
    // upward push and i otherwise.
    const auto w = printed_beta_weights(5.0 * courant);
    for (int iface = 1; iface < nb; ++iface) {
      const int first = upward ? iface - 1 : iface;
      const int step = upward ? -1 : 1;
      double beta = 0.0;
      for (int s = 0; s < 4; ++s) {
        const int src = first + step * s;
        if (src < 0 || src >= nb) break;  // zero ghost bands
        beta += w[s] * ws.edge[src];
      }
      const double f = speed * beta;
      double* g = &ws.flux[static_cast<std::size_t>(iface) * NP];
      for (int k = 0; k < NP; ++k) g[k] += tab.proj[k][m] * f;
    }
  }

  for (int j = 0; j < nb; ++j) {
    const double* sp = &tab.s_plus[j * kMomentCount];
    const double* sm = &tab.s_minus[j * kMomentCount];
    const double* g_up = &ws.flux[static_cast<std::size_t>(j + 1) * NP];
    const double* g_down = &ws.flux[static_cast<std::size_t>(j) * NP];
    double* mj = block.data() + static_cast<std::size_t>(j) * kMomentCount * NP;
    for (int l = 0; l < kMomentCount; ++l) {
      for (int k = 0; k < NP; ++k) {
        mj[l * NP + k] -= dt * (sp[l] * g_up[k] - sm[l] * g_down[k]);
      }
    }
  }
}

template <int NP>
void coupling_all(BandMomentField& field, const FieldState& e, double dt,
                  const Discretization& disc, const ExecutionPolicy& policy) {
  const CouplingTables<NP> tab(disc);
  const int n = field.n_elements();
  if (policy.backend == Backend::kSerial) {
    ElementWorkspace ws;
    for (int i = 0; i < n; ++i) coupling_element<NP>(field.element(i), e.element(i), dt, tab, ws);
  } else {
#pragma omp parallel num_threads(policy.workers)
    {
      ElementWorkspace ws;
#pragma omp for schedule(static)
      for (int i = 0; i < n; ++i) {
        coupling_element<NP>(field.element(i), e.element(i), dt, tab, ws);
      }
    }
  }
}

}  // namespace

EdgeValues alpha_edges(const BandMomentField& field, const Discretization& disc,
                       int element, int node) {
  const double xi = disc.quad.nodes[node];
  EdgeValues out;
  out.plus.resize(disc.n_bands());
  out.minus.resize(disc.n_bands());
  for (int j = 0; j < disc.n_bands(); ++j) {
    const Moments m = field.point_moments(element, j, xi);
    const auto& edges = disc.closures[j].edges;
    double up = 0.0;
    double down = 0.0;
    for (int l = 0; l < kMomentCount; ++l) {
      up += edges.plus[l] * m[l];
      down += edges.minus[l] * m[l];
    }
    out.plus[j] = up;
    out.minus[j] = down;
  }
  return out;
}

std::array<double, 4> printed_beta_weights(double kappa) {
  const double k = kappa;
  const double k2 = k * k;
  const double k3 = k2 * k;
  return {
      1.0 - 5.0 * k / 2.0 + 25.0 * k2 / 6.0 - 125.0 * k3 / 24.0,
      k / 2.0 - 5.0 * k2 / 3.0 + 25.0 * k3 / 8.0,
      k2 / 6.0 - 5.0 * k3 / 8.0,
      k3 / 24.0,
  };
}

double beta_weights(std::span<const double, 4> alphas, double kappa) {
  const auto w = printed_beta_weights(kappa);
  return w[0] * alphas[0] + w[1] * alphas[1] + w[2] * alphas[2] + w[3] * alphas[3];
}

void coupling_step_in_place(BandMomentField& field, const FieldState& e, double dt,
                            const Discretization& disc, const CouplingOptions& options) {
  switch (disc.n_basis()) {
    case 1: coupling_all<1>(field, e, dt, disc, options.policy); break;
    case 2: coupling_all<2>(field, e, dt, disc, options.policy); break;
    case 3: coupling_all<3>(field, e, dt, disc, options.policy); break;
    case 4: coupling_all<4>(field, e, dt, disc, options.policy); break;
    default:
      throw ConfigError("coupling step: unsupported number of modes " +
                        std::to_string(disc.n_basis()));
  }
  for (int i = 0; i < field.n_elements(); ++i) check_finite(field.element(i), i);
}

BandMomentField coupling_step(const BandMomentField& field, const FieldState& e,
                              double dt, const Discretization& disc,
                              const CouplingOptions& options) {
  BandMomentField out = field;
  coupling_step_in_place(out, e, dt, disc, options);
  return out;
}

BandMomentField coupling_step_reference(const BandMomentField& field,
                                        const FieldState& e, double dt,
                                        const Discretization& disc) {
  const int nb = disc.n_bands();
  const int np = disc.n_basis();
  const BasisQuadrature& q = disc.quad;
  BandMomentField out = field;
  for (int i = 0; i < field.n_elements(); ++i) {
    // flux[iface][m]: a * beta at each node; walls stay zero.
    std::vector<std::vector<double>> flux(nb + 1, std::vector<double>(q.n_nodes(), 0.0));
    for (int m = 0; m < q.n_nodes(); ++m) {
      const double speed = -e.value(i, q.nodes[m]);
      const double courant = std::abs(speed) * dt / disc.grid.dv;
      const EdgeValues alpha = alpha_edges(field, disc, i, m);
      for (int iface = 1; iface < nb; ++iface) {
        std::array<double, 4> a{};
        for (int s = 0; s < 4; ++s) {
          const int src = speed >= 0.0 ? iface - 1 - s : iface + s;
          if (src >= 0 && src < nb) a[s] = speed >= 0.0 ? alpha.plus[src] : alpha.minus[src];
        }
        const double beta = beta_weights(a, 5.0 * courant);
        flux[iface][m] = speed * beta;
      }
    }
    for (int j = 0; j < nb; ++j) {
      for (int k = 0; k < np; ++k) {
        double g_up = 0.0;
        double g_down = 0.0;
        for (int m = 0; m < q.n_nodes(); ++m) {
          g_up += 0.5 * q.weights[m] * q.values[k][m] * flux[j + 1][m];
          g_down += 0.5 * q.weights[m] * q.values[k][m] * flux[j][m];
        }
        for (int l = 0; l < kMomentCount; ++l) {
          out(i, j, l, k) -= dt * (disc.closures[j].s_plus[l] * g_up -
                                   disc.closures[j].s_minus[l] * g_down);
        }
      }
    }
  }
  if (!out.all_finite()) throw NumericalError("coupling step produced a non-finite moment");
  return out;
}

double max_kappa(const FieldState& e, double dt, const Discretization& disc) {
  double emax = 0.0;
  for (int i = 0; i < disc.n_elements(); ++i) {
    for (double xi : disc.quad.nodes) emax = std::max(emax, std::abs(e.value(i, xi)));
  }
  return 5.0 * emax * dt / disc.grid.dv;
}

}  // namespace vband
