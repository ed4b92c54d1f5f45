#pragma once

#include <vector>

#include "pslet/potential.hpp"

namespace pslet {

/// Settings of the finite-difference eigenvalue oracle.
///
/// The radial equation is discretized on t = ln q with psi = q^(1/2) phi, which keeps
/// the three-point stencil second order while resolving the singular core; zero for
/// q_min or q_max selects the domain automatically.
struct DniConfig {
  double q_min = 0.0;
  double q_max = 0.0;
  /// Interval counts in ln q; each rung doubles the previous one.
  std::vector<int> ladder{2000, 4000, 8000, 16000};
  double tolerance = 1e-8;
  /// Near-origin cutoff candidate: barrier exceeds this multiple of the energy.
  double barrier_factor = 1e4;
  /// Required WKB decay exponent between a Dirichlet end and the nearest turning point.
  double decay_exponent = 40.0;
};

struct DniResult {
  double energy = 0.0;
  /// max(Richardson estimate, q_min halving sensitivity)
  double error_estimate = 0.0;
  double richardson_estimate = 0.0;
  double q_min_sensitivity = 0.0;
  double q_min = 0.0;
  double q_max = 0.0;
  std::vector<double> rung_energies;
};

/// Eigenvalue with k interior nodes of -1/2 d^2/dq^2 + l_eff (l_eff + 1) / (2 q^2) + V(q).
DniResult dni_eigenvalue(const PotentialModel<double>& p, double l_eff, int k, const DniConfig& cfg = {});

/// (index)-th eigenvalue of the discretized operator on one grid of `intervals` steps in ln q.
double dni_single_grid(const PotentialModel<double>& p, double l_eff, int index, double q_min, double q_max,
                       int intervals);

}  // namespace pslet
