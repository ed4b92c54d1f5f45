#include "pslet/dni.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pslet/errors.hpp"

namespace pslet {
namespace {

struct Pencil {
  std::vector<double> diag;    // A_ii
  std::vector<double> weight;  // W_ii = q_i^2
  double off = 0.0;            // A_i,i+1
};

double effective_potential(const PotentialModel<double>& p, double l_eff, double q) {
  return p.value(q) + l_eff * (l_eff + 1.0) / (2.0 * q * q);
}

// -1/2 phi'' + (q^2 V_eff + 1/8) phi = E q^2 phi on a uniform grid in t = ln q.
// `intervals` uniform steps between the Dirichlet ends, intervals - 1 unknowns.
Pencil build_pencil(const PotentialModel<double>& p, double l_eff, double q_min, double q_max, int intervals) {
  Pencil m;
  const double t0 = std::log(q_min), t1 = std::log(q_max);
  const double h = (t1 - t0) / intervals;
  const int points = intervals - 1;
  m.diag.resize(points);
  m.weight.resize(points);
  m.off = -0.5 / (h * h);
  const double centrifugal = 0.5 * (l_eff + 0.5) * (l_eff + 0.5);
  for (int i = 0; i < points; ++i) {
    const double q = std::exp(t0 + (i + 1) * h);
    const double q2 = q * q;
    // q^2 l(l+1)/(2 q^2) + 1/8 == (l + 1/2)^2 / 2, kept exact for l = -1/2.
    m.diag[i] = 1.0 / (h * h) + q2 * p.value(q) + centrifugal;
    m.weight[i] = q2;
  }
  return m;
}

// Number of generalized eigenvalues below x (inertia of A - x W).
int sturm_count(const Pencil& m, double x) {
  int count = 0;
  double pivot = 1.0;
  const double off2 = m.off * m.off;
  for (std::size_t i = 0; i < m.diag.size(); ++i) {
    double d = m.diag[i] - x * m.weight[i];
    if (i > 0) d -= off2 / pivot;
    if (d == 0.0) d = -std::numeric_limits<double>::min();
    if (d < 0.0) ++count;
    pivot = d;
  }
  return count;
}

double eigenvalue_by_index(const Pencil& m, int index) {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m.diag.size(); ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(m.off) / std::sqrt(m.weight[i] * m.weight[i - 1]);
    if (i + 1 < m.diag.size()) radius += std::abs(m.off) / std::sqrt(m.weight[i] * m.weight[i + 1]);
    lo = std::min(lo, m.diag[i] / m.weight[i] - radius);
  }
  if (sturm_count(m, lo) > index) throw OracleFailure("dni: Gershgorin lower bound failed");
  double step = std::max(1.0, std::abs(lo));
  double hi = lo + step;
  while (sturm_count(m, hi) <= index) {
    step *= 2.0;
    hi = lo + step;
    if (!std::isfinite(hi) || step > 1e300)
      throw OracleFailure("dni: state with " + std::to_string(index) + " nodes not found in the spectral window");
  }
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * std::abs(mid)) break;
    (sturm_count(m, mid) > index ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// Decay exponent int sqrt(2 (V_eff - E)) dq between a and b (V_eff > E assumed), Simpson in ln q.
double wkb_action(const PotentialModel<double>& p, double l_eff, double E, double a, double b) {
  const int n = 400;
  const double t0 = std::log(a), t1 = std::log(b), h = (t1 - t0) / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double q = std::exp(t0 + i * h);
    const double gap = std::max(0.0, effective_potential(p, l_eff, q) - E);
    const double f = q * std::sqrt(2.0 * gap);
    s += f * ((i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  return s * h / 3.0;
}

// Point where V_eff crosses E between lo (V_eff > E side is `above`) and hi.
double crossing(const PotentialModel<double>& p, double l_eff, double E, double lo, double hi) {
  const bool lo_above = effective_potential(p, l_eff, lo) > E;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    ((effective_potential(p, l_eff, mid) > E) == lo_above ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

struct Domain {
  double q_min;
  double q_max;
};

Domain choose_domain(const PotentialModel<double>& p, double l_eff, int k, const DniConfig& cfg) {
  // Scale: interior minimum of V_eff, else the oscillator length.
  double q_scale = 1.0 / std::sqrt(std::sqrt(2.0 * p.c1()));
  {
    double best = std::numeric_limits<double>::infinity(), arg = 0.0;
    const int n = 600;
    for (int i = 0; i <= n; ++i) {
      const double q = std::pow(10.0, -8.0 + 12.0 * i / n);
      const double v = effective_potential(p, l_eff, q);
      if (v < best) {
        best = v;
        arg = q;
      }
    }
    if (arg > 1e-8 && arg < 1e4) q_scale = arg;
  }

  const double floor_q = q_scale * 1e-10;
  Domain d{cfg.q_min > 0 ? cfg.q_min : floor_q, cfg.q_max > 0 ? cfg.q_max : 4.0 * q_scale};
  const int coarse = 1500;
  double E = 0.0;
  for (int iter = 0; iter < 30; ++iter) {
    E = eigenvalue_by_index(build_pencil(p, l_eff, d.q_min, d.q_max, coarse), k);
    if (cfg.q_max > 0) break;
    double hi = q_scale;
    while (effective_potential(p, l_eff, hi) <= E) hi *= 2.0;
    const double turning = crossing(p, l_eff, E, q_scale, hi);
    double need = 1.5 * turning;
    while (wkb_action(p, l_eff, E, turning, need) < cfg.decay_exponent) need *= 1.25;
    if (need <= d.q_max * (1.0 + 1e-12)) break;
    d.q_max = need;
  }

  if (cfg.q_min <= 0) {
    // Barrier rule, accepted only when the core is already classically dark there.
    const double barrier = cfg.barrier_factor * std::max(std::abs(E), 1.0);
    if (effective_potential(p, l_eff, floor_q) > barrier && effective_potential(p, l_eff, q_scale) < barrier) {
      const double q_b = crossing(p, l_eff, barrier, floor_q, q_scale);
      if (effective_potential(p, l_eff, q_scale) < E) {
        const double inner = crossing(p, l_eff, E, q_b, q_scale);
        if (wkb_action(p, l_eff, E, q_b, inner) >= cfg.decay_exponent) d.q_min = q_b;
      }
    }
  }
  return d;
}

struct Extrapolation {
  double value;
  double estimate;
  std::vector<double> rungs;
};

Extrapolation richardson(const PotentialModel<double>& p, double l_eff, int k, const Domain& d, const DniConfig& cfg) {
  Extrapolation out{};
  for (int n : cfg.ladder) out.rungs.push_back(eigenvalue_by_index(build_pencil(p, l_eff, d.q_min, d.q_max, n), k));
  std::vector<std::vector<double>> table{out.rungs};
  // Ladder sizes double, so h^2 shrinks by exactly 4 per rung.
  for (std::size_t lev = 1; lev < out.rungs.size(); ++lev) {
    const double f = std::pow(4.0, static_cast<double>(lev));
    const auto& prev = table.back();
    std::vector<double> next;
    for (std::size_t i = 0; i + 1 < prev.size(); ++i) next.push_back((f * prev[i + 1] - prev[i]) / (f - 1.0));
    table.push_back(std::move(next));
  }
  out.value = table.back().front();
  out.estimate = table.size() >= 2 ? std::abs(table.back().front() - table[table.size() - 2].back())
                                   : std::numeric_limits<double>::infinity();

  const double floor = 1e3 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(out.value));
  for (std::size_t i = 0; i + 2 < out.rungs.size(); ++i) {
    const double d0 = std::abs(out.rungs[i + 1] - out.rungs[i]);
    const double d1 = std::abs(out.rungs[i + 2] - out.rungs[i + 1]);
    if (d1 > floor && d0 < 3.0 * d1)
      throw OracleFailure("dni: grid refinement not converging (successive differences " + std::to_string(d0) +
                          ", " + std::to_string(d1) + ")");
  }
  return out;
}

}  // namespace

double dni_single_grid(const PotentialModel<double>& p, double l_eff, int index, double q_min, double q_max,
                       int intervals) {
  if (!(q_min > 0.0) || !(q_max > q_min) || intervals < 4) throw DomainError("dni: invalid grid");
  return eigenvalue_by_index(build_pencil(p, l_eff, q_min, q_max, intervals), index);
}

DniResult dni_eigenvalue(const PotentialModel<double>& p, double l_eff, int k, const DniConfig& cfg) {
  if (k < 0) throw DomainError("dni: node count must be non-negative");
  if (cfg.ladder.size() < 2) throw DomainError("dni: ladder needs at least two grids");
  for (std::size_t i = 1; i < cfg.ladder.size(); ++i)
    if (cfg.ladder[i] != 2 * cfg.ladder[i - 1]) throw DomainError("dni: ladder grids must double");

  const Domain d = choose_domain(p, l_eff, k, cfg);
  const Extrapolation main = richardson(p, l_eff, k, d, cfg);
  const Extrapolation halved = richardson(p, l_eff, k, Domain{0.5 * d.q_min, d.q_max}, cfg);

  DniResult r;
  r.energy = main.value;
  r.richardson_estimate = main.estimate;
  r.q_min_sensitivity = std::abs(halved.value - main.value);
  r.error_estimate = std::max(r.richardson_estimate, r.q_min_sensitivity);
  r.q_min = d.q_min;
  r.q_max = d.q_max;
  r.rung_energies = main.rungs;
  if (r.q_min_sensitivity > std::max(cfg.tolerance, 10.0 * r.richardson_estimate))
    throw OracleFailure("dni: energy sensitive to the inner cutoff (" + std::to_string(r.q_min_sensitivity) + ")");
  return r;
}

}  // namespace pslet
