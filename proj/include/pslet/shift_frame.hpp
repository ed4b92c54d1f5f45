#pragma once

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <vector>

#include "pslet/errors.hpp"
#include "pslet/polynomial.hpp"
#include "pslet/potential.hpp"

namespace pslet {

/// Quantum numbers of a radial state: k nodes, orbital l, dimension D.
struct StateSpec {
  int k = 0;
  int l = 0;
  int D = 3;

  friend bool operator==(const StateSpec&, const StateSpec&) = default;
};

/// l_D = l + (D - 3) / 2. Exact for every integer l, D.
template <typename Scalar = double>
Scalar effective_l(const StateSpec& s) {
  return Scalar(s.l) + Scalar(s.D - 3) / Scalar(2);
}

/// States sharing l_D with `s` (same k, D' of the same parity, l' >= 0, D' >= 2),
/// ordered by increasing l'. The state itself is not included.
inline std::vector<StateSpec> degeneracy_partners(const StateSpec& s) {
  std::vector<StateSpec> out;
  // l' + D'/2 is invariant along the chain; D' = D + 2 (l - l').
  const int twice_invariant = 2 * s.l + s.D;
  const int min_dim = (s.D % 2 == 0) ? 2 : 3;
  for (int lp = 0; twice_invariant - 2 * lp >= min_dim; ++lp) {
    const StateSpec p{s.k, lp, twice_invariant - 2 * lp};
    if (p.l != s.l) out.push_back(p);
  }
  return out;
}

/// Number of B_n coefficients needed for energy corrections through E^(order).
/// E^(n) enters at l^-(n+1), i.e. at half-order 2n + 2 of the recursion, which
/// consumes v^(2n+2) and therefore B_(2n+4).
constexpr int b_order_for_energy_order(int energy_order) { return 2 * energy_order + 4; }

inline constexpr int kDefaultEnergyOrder = 8;
inline constexpr int kDefaultBOrder = b_order_for_energy_order(kDefaultEnergyOrder);

/// Expansion point of the shifted-l series.
template <typename Scalar = double>
struct ShiftFrame {
  int k = 0;
  Scalar l_D{};
  Scalar q_o{};
  Scalar w{};
  Scalar beta{};
  Scalar lbar{};
  Scalar Q{};
  Scalar potential_at_qo{};
  /// B(n) for n = 0 .. n_max; B(1) vanishes at a solved frame.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> B;
  /// l_D - beta - sqrt(q_o^3 V'(q_o)) at the returned root.
  Scalar residual{};
  int brackets_found = 0;
  bool multiple_minima = false;

  int n_max() const { return static_cast<int>(B.size()) - 1; }

  /// E^(-2)(q_o) = 1/(2 q_o^2) + V(q_o)/Q.
  Scalar leading_term() const { return Scalar(1) / (Scalar(2) * q_o * q_o) + potential_at_qo / Q; }
};

namespace detail {

template <typename Scalar>
struct FrameFunction {
  const PotentialModel<Scalar>& p;
  int k;
  Scalar l_D;

  bool valid(Scalar q) const { return p.derivative(q, 1) > Scalar(0); }

  Scalar w_squared(Scalar q) const { return Scalar(3) + q * p.derivative(q, 2) / p.derivative(q, 1); }

  Scalar residual(Scalar q) const {
    using std::sqrt;
    const Scalar v1 = p.derivative(q, 1);
    const Scalar w2 = w_squared(q);
    const Scalar w = w2 > Scalar(0) ? sqrt(w2) : Scalar(0);
    return l_D + Scalar(0.5) + (Scalar(k) + Scalar(0.5)) * w - sqrt(q * q * q * v1);
  }

  Scalar slope(Scalar q) const {
    using std::sqrt;
    const Scalar v1 = p.derivative(q, 1);
    const Scalar v2 = p.derivative(q, 2);
    const Scalar v3 = p.derivative(q, 3);
    const Scalar w2 = w_squared(q);
    Scalar dw(0);
    if (w2 > Scalar(0)) dw = ((v2 + q * v3) / v1 - q * v2 * v2 / (v1 * v1)) / (Scalar(2) * sqrt(w2));
    const Scalar root = sqrt(q * q * q * v1);
    return (Scalar(k) + Scalar(0.5)) * dw - (Scalar(3) * q * q * v1 + q * q * q * v2) / (Scalar(2) * root);
  }

  Scalar leading_energy(Scalar q) const {
    // l^2 E^(-2) with l^2 = Q = q^3 V'(q), valid at a root.
    const Scalar Q = q * q * q * p.derivative(q, 1);
    return Q / (Scalar(2) * q * q) + p.value(q);
  }
};

// Safeguarded Newton inside a sign-changing bracket.
template <typename Scalar>
Scalar refine_root(const FrameFunction<Scalar>& f, Scalar lo, Scalar hi) {
  using std::abs;
  using std::sqrt;
  Scalar f_lo = f.residual(lo);
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  Scalar x = Scalar(0.5) * (lo + hi);
  for (int iter = 0; iter < 400; ++iter) {
    const Scalar fx = f.residual(x);
    const Scalar scale = std::max(Scalar(1), sqrt(x * x * x * f.p.derivative(x, 1)));
    if (abs(fx) < Scalar(1e-13) * scale || hi - lo < Scalar(4) * eps * x) return x;
    if ((fx < Scalar(0)) == (f_lo < Scalar(0))) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
    }
    const Scalar d = f.slope(x);
    Scalar next = (d != Scalar(0)) ? x - fx / d : lo - Scalar(1);
    if (!(next > lo && next < hi)) next = Scalar(0.5) * (lo + hi);
    x = next;
  }
  return x;
}

template <typename Scalar>
Scalar bisect_validity(const FrameFunction<Scalar>& f, Scalar invalid, Scalar valid) {
  for (int i = 0; i < 200; ++i) {
    const Scalar mid = Scalar(0.5) * (invalid + valid);
    if (mid == invalid || mid == valid) break;
    (f.valid(mid) ? valid : invalid) = mid;
  }
  return valid;
}

}  // namespace detail

/// Fills B_n = (-1)^n (n+1)/2 + V^(n)(q_o) q_o^(n+2) / (n! Q) for n = 0 .. n_max.
template <typename Scalar>
ShiftFrame<Scalar> build_B(const PotentialModel<Scalar>& p, ShiftFrame<Scalar> frame, int n_max) {
  using std::pow;
  if (n_max < 2) throw DomainError("build_B: n_max must be at least 2");
  frame.B.resize(n_max + 1);
  Scalar factorial(1);
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) factorial *= Scalar(n);
    const Scalar sign = (n % 2 == 0) ? Scalar(1) : Scalar(-1);
    frame.B(n) = sign * Scalar(n + 1) / Scalar(2) +
                 p.derivative(frame.q_o, n) * pow(frame.q_o, Scalar(n + 2)) / (factorial * frame.Q);
  }
  return frame;
}

/// Locates q_o from l_D + 1/2 + (k + 1/2) w(q_o) = sqrt(q_o^3 V'(q_o)),
/// w(q) = sqrt(3 + q V''/V'), and sets beta, lbar, Q = lbar^2 and B_n.
///
/// Brackets are searched on a 200-point logarithmic grid over [1e-3, 1e3], with the
/// edges of the V' > 0 region inserted exactly; when several roots exist the one with
/// the lowest leading energy lbar^2 E^(-2) is returned and `multiple_minima` is set.
template <typename Scalar>
ShiftFrame<Scalar> solve_qo(const PotentialModel<Scalar>& p, int k, Scalar l_D, int n_max = kDefaultBOrder) {
  using std::pow;
  using std::sqrt;
  if (k < 0) throw DomainError("solve_qo: node count must be non-negative");
  const detail::FrameFunction<Scalar> f{p, k, l_D};

  // Contiguous runs of grid points with V' > 0, closed by their exact edges.
  constexpr int kGrid = 200;
  std::vector<std::vector<Scalar>> runs;
  Scalar prev(0);
  bool prev_valid = false;
  for (int i = 0; i < kGrid; ++i) {
    const Scalar q = pow(Scalar(10), Scalar(-3) + Scalar(6) * Scalar(i) / Scalar(kGrid - 1));
    const bool ok = f.valid(q);
    if (ok) {
      if (!prev_valid) {
        runs.emplace_back();
        if (i > 0) runs.back().push_back(detail::bisect_validity(f, prev, q));
      }
      runs.back().push_back(q);
    } else if (prev_valid) {
      runs.back().push_back(detail::bisect_validity(f, q, prev));
    }
    prev = q;
    prev_valid = ok;
  }

  std::vector<Scalar> roots;
  for (const auto& run : runs) {
    for (std::size_t i = 0; i + 1 < run.size(); ++i) {
      const Scalar a = run[i], b = run[i + 1];
      const Scalar ra = f.residual(a), rb = f.residual(b);
      if (ra == Scalar(0)) {
        roots.push_back(a);
      } else if ((ra < Scalar(0)) != (rb < Scalar(0))) {
        roots.push_back(detail::refine_root(f, a, b));
      }
    }
  }
  if (roots.empty())
    throw NoClassicalMinimum("solve_qo: no sign change of the q_o equation on [1e-3, 1e3]");

  Scalar q_o = roots.front();
  Scalar best = f.leading_energy(q_o);
  for (Scalar r : roots) {
    const Scalar e = f.leading_energy(r);
    if (e < best) {
      best = e;
      q_o = r;
    }
  }

  const Scalar w2 = f.w_squared(q_o);
  if (!(w2 > Scalar(0))) throw UnstableWell("solve_qo: w^2 <= 0 at the classical minimum");

  ShiftFrame<Scalar> frame;
  frame.k = k;
  frame.l_D = l_D;
  frame.q_o = q_o;
  frame.w = sqrt(w2);
  frame.beta = -(Scalar(0.5) + (Scalar(k) + Scalar(0.5)) * frame.w);
  frame.lbar = l_D - frame.beta;
  if (!(frame.lbar > Scalar(0))) throw DomainError("solve_qo: shifted angular momentum must be positive");
  frame.Q = frame.lbar * frame.lbar;
  frame.potential_at_qo = p.value(q_o);
  frame.residual = frame.lbar - sqrt(q_o * q_o * q_o * p.derivative(q_o, 1));
  frame.brackets_found = static_cast<int>(roots.size());
  frame.multiple_minima = roots.size() > 1;
  return build_B(p, frame, n_max);
}

template <typename Scalar>
ShiftFrame<Scalar> solve_qo(const PotentialModel<Scalar>& p, const StateSpec& state, int n_max = kDefaultBOrder) {
  return solve_qo(p, state.k, effective_l<Scalar>(state), n_max);
}

/// v^(n)(x) for n = 0 .. n_max, coefficient vectors of degree n + 2, plus the constant
/// pedestal lbar^2 [1/(2 q_o^2) + V(q_o)/Q] that feeds the leading energy.
template <typename Scalar = double>
struct PerturbationPolynomials {
  std::vector<Poly<Scalar>> v;
  Scalar pedestal{};
};

template <typename Scalar>
PerturbationPolynomials<Scalar> build_v(const ShiftFrame<Scalar>& frame, int n_max) {
  if (frame.n_max() < n_max + 2)
    throw DomainError("build_v: frame holds B_n only through n = " + std::to_string(frame.n_max()));
  const Scalar two_beta_1 = Scalar(2) * frame.beta + Scalar(1);
  const Scalar beta_beta_1 = frame.beta * (frame.beta + Scalar(1));

  PerturbationPolynomials<Scalar> out;
  out.v.reserve(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    Poly<Scalar> c = Poly<Scalar>::Zero(n + 3);
    const Scalar sign = (n % 2 == 0) ? Scalar(1) : Scalar(-1);
    if (n == 0) {
      c(2) = frame.B(2);
      c(0) = two_beta_1 / Scalar(2);
    } else if (n == 1) {
      c(1) = -two_beta_1;
      c(3) = frame.B(3);
    } else {
      c(n + 2) = frame.B(n + 2);
      c(n) += sign * two_beta_1 * Scalar(n + 1) / Scalar(2);
      c(n - 2) += sign * beta_beta_1 / Scalar(2) * Scalar(n - 1);
    }
    out.v.push_back(std::move(c));
  }
  out.pedestal = frame.Q * frame.leading_term();
  return out;
}

}  // namespace pslet
