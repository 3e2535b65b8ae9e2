#include "vband/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "vband/error.hpp"

namespace vband {

Moments global_moment_totals(const BandMomentField& field, const Discretization& disc) {
  Moments m{};
  for (int i = 0; i < field.n_elements(); ++i) {
    for (int j = 0; j < field.n_bands(); ++j) {
      for (int l = 0; l < kMomentCount; ++l) m[l] += field(i, j, l, 0);
    }
  }
  for (double& x : m) x *= disc.mesh.dx;
  return m;
}

double e_field_l2(const FieldState& e, const Discretization& disc) {
  // Orthonormal basis under (1/2) int: int_element E^2 dx = dx sum_k E_k^2.
  double s = 0.0;
  for (double c : e.e) s += c * c;
  return std::sqrt(disc.mesh.dx * s);
}

SeriesPoint series_point(double time, const BandMomentField& field, const FieldState& e,
                         const Discretization& disc) {
  SeriesPoint p;
  p.time = time;
  p.e_l2 = e_field_l2(e, disc);
  p.field_energy = 0.5 * p.e_l2 * p.e_l2;
  p.moments = global_moment_totals(field, disc);
  p.total_energy = 0.5 * p.moments[2] + p.field_energy;
  return p;
}

RateFit fit_decay_rate(std::span<const double> t, std::span<const double> y, Window window,
                       double min_separation) {
  if (t.size() != y.size()) throw FitError("rate fit: time and value series differ in length");
  struct Peak {
    double time;
    double log_value;
  };
  std::vector<Peak> candidates;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    if (t[i] < window.begin || t[i] > window.end) continue;
    if (!(y[i] > 0.0) || !(y[i] >= y[i - 1]) || !(y[i] > y[i + 1])) continue;
    if (!(y[i - 1] > 0.0) || !(y[i + 1] > 0.0)) continue;
    // Parabola through the three log values.
    const double t0 = t[i - 1], t1 = t[i], t2 = t[i + 1];
    const double l0 = std::log(y[i - 1]), l1 = std::log(y[i]), l2 = std::log(y[i + 1]);
    const double d01 = (l1 - l0) / (t1 - t0);
    const double d12 = (l2 - l1) / (t2 - t1);
    const double a = (d12 - d01) / (t2 - t0);
    Peak p{t1, l1};
    if (a < 0.0) {
      const double b = d01 - a * (t0 + t1);
      const double tp = -b / (2.0 * a);
      if (tp >= t0 && tp <= t2) {
        p.time = tp;
        p.log_value = l1 + (tp - t1) * (d01 + a * (tp - t0));
      }
    }
    candidates.push_back(p);
  }
  // Largest peaks claim their neighbourhood first.
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].log_value > candidates[b].log_value;
  });
  std::vector<Peak> kept;
  for (std::size_t idx : order) {
    const Peak& p = candidates[idx];
    const bool close = std::any_of(kept.begin(), kept.end(), [&](const Peak& q) {
      return std::abs(q.time - p.time) < min_separation;
    });
    if (!close) kept.push_back(p);
  }
  std::sort(kept.begin(), kept.end(), [](const Peak& a, const Peak& b) { return a.time < b.time; });
  if (kept.size() < 3) {
    throw FitError("rate fit: only " + std::to_string(kept.size()) + " peaks in window [" +
                   std::to_string(window.begin) + ", " + std::to_string(window.end) + "]");
  }
  const double n = static_cast<double>(kept.size());
  double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
  for (const Peak& p : kept) {
    st += p.time;
    sl += p.log_value;
    stt += p.time * p.time;
    stl += p.time * p.log_value;
  }
  RateFit fit;
  fit.rate = (n * stl - st * sl) / (n * stt - st * st);
  fit.intercept = (sl - fit.rate * st) / n;
  for (const Peak& p : kept) {
    fit.peak_times.push_back(p.time);
    fit.peak_values.push_back(std::exp(p.log_value));
  }
  return fit;
}

PdfSnapshot reconstruct_pdf(const BandMomentField& field, const Discretization& disc,
                            double time, int x_per_element, int v_per_band) {
  PdfSnapshot s;
  s.time = time;
  const int nx = field.n_elements() * x_per_element;
  const int nv = field.n_bands() * v_per_band;
  s.x.reserve(static_cast<std::size_t>(nx) * nv);
  s.v.reserve(s.x.capacity());
  s.f.reserve(s.x.capacity());
  for (int i = 0; i < field.n_elements(); ++i) {
    for (int a = 0; a < x_per_element; ++a) {
      const double xi = -1.0 + (2.0 * a + 1.0) / x_per_element;
      const double x = disc.mesh.to_physical(i, xi);
      for (int j = 0; j < field.n_bands(); ++j) {
        const Moments m = field.point_moments(i, j, xi);
        const Reconstruction& r = disc.closures[j].recon;
        const Moments c = r.legendre_coefficients(m);
        for (int b = 0; b < v_per_band; ++b) {
          const double u = -1.0 + (2.0 * b + 1.0) / v_per_band;
          double f = 0.0;
          for (int n = 0; n < kMomentCount; ++n) f += c[n] * legendre(n, u);
          s.x.push_back(x);
          s.v.push_back(r.center + r.half_width * u);
          s.f.push_back(f);
        }
      }
    }
  }
  return s;
}

DensityProfile density_profile(const BandMomentField& field, const Discretization& disc,
                               double time, int x_per_element) {
  DensityProfile d;
  d.time = time;
  for (int i = 0; i < field.n_elements(); ++i) {
    for (int a = 0; a < x_per_element; ++a) {
      const double xi = -1.0 + (2.0 * a + 1.0) / x_per_element;
      double rho = 0.0;
      for (int j = 0; j < field.n_bands(); ++j) {
        rho += evaluate_modal(field.element(i).data() + static_cast<std::size_t>(j) * kMomentCount * field.n_basis(), field.n_basis(), xi);
      }
      d.x.push_back(disc.mesh.to_physical(i, xi));
      d.rho.push_back(rho);
    }
  }
  return d;
}

double band_edge_defect(const BandMomentField& field, const Discretization& disc) {
  double worst = 0.0;
  for (int i = 0; i < field.n_elements(); ++i) {
    for (double xi : disc.quad.nodes) {
      double below = 0.0;
      for (int j = 0; j < field.n_bands(); ++j) {
        const Moments m = field.point_moments(i, j, xi);
        const InterfaceFunctional& f = disc.closures[j].edges;
        double lower = 0.0;
        double upper = 0.0;
        for (int l = 0; l < kMomentCount; ++l) {
          lower += f.minus[l] * m[l];
          upper += f.plus[l] * m[l];
        }
        if (j > 0) worst = std::max(worst, std::abs(below - lower));
        below = upper;
      }
    }
  }
  return worst;
}

namespace {

double moment_error(const BandMomentField& field, const Discretization& disc,
                    const ExactSolution* exact, double t, bool per_band) {
  if (exact == nullptr || !exact->f) {
    throw UnsupportedDiagnostic("moment error: scenario has no exact solution");
  }
  const GaussRule rule = gauss_legendre_rule(std::max(6, field.n_basis() + 2));
  const double dx = disc.mesh.dx;
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < field.n_elements(); ++i) {
    for (int q = 0; q < rule.size(); ++q) {
      const double xi = rule.nodes[q];
      const double x = disc.mesh.to_physical(i, xi);
      const double w = 0.5 * dx * rule.weights[q];
      Moments total{};
      Moments total_exact{};
      for (int j = 0; j < field.n_bands(); ++j) {
        const Moments exact_m = moments_of_function(
            [&](double v) { return exact->f(t, x, v); }, disc.grid.lower_edge(j),
            disc.grid.upper_edge(j));
        const Moments m = field.point_moments(i, j, xi);
        for (int l = 0; l < kMomentCount; ++l) {
          if (per_band) {
            const double d = m[l] - exact_m[l];
            num += w * d * d;
            den += w * exact_m[l] * exact_m[l];
          }
          total[l] += m[l];
          total_exact[l] += exact_m[l];
        }
      }
      if (!per_band) {
        for (int l = 0; l < kMomentCount; ++l) {
          const double d = total[l] - total_exact[l];
          num += w * d * d;
          den += w * total_exact[l] * total_exact[l];
        }
      }
    }
  }
  return std::sqrt(num / den);
}

}  // namespace

double relative_l2_error(const BandMomentField& field, const Discretization& disc,
                         const ExactSolution* exact, double t) {
  return moment_error(field, disc, exact, t, false);
}

double relative_band_l2_error(const BandMomentField& field, const Discretization& disc,
                              const ExactSolution* exact, double t) {
  return moment_error(field, disc, exact, t, true);
}

double relative_e_error(const FieldState& e, const Discretization& disc,
                        const ExactSolution* exact, double t) {
  if (exact == nullptr || !exact->e) {
    throw UnsupportedDiagnostic("relative_e_error: scenario has no exact field");
  }
  const GaussRule rule = gauss_legendre_rule(std::max(6, e.n_basis + 2));
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < e.n_elements(); ++i) {
    for (int q = 0; q < rule.size(); ++q) {
      const double x = disc.mesh.to_physical(i, rule.nodes[q]);
      const double w = rule.weights[q];
      const double ex = exact->e(t, x);
      const double d = e.value(i, rule.nodes[q]) - ex;
      num += w * d * d;
      den += w * ex * ex;
    }
  }
  return std::sqrt(num / den);
}

}  // namespace vband
