#pragma once

#include <cmath>
#include <string>

#include "pslet/errors.hpp"

namespace pslet {

/// p (p - 1) ... (p - n + 1); equals 1 for n == 0.
template <typename Scalar>
Scalar falling_factorial(Scalar p, int n) {
  Scalar r(1);
  for (int i = 0; i < n; ++i) r *= (p - Scalar(i));
  return r;
}

/// Spiked harmonic oscillator V(q) = c1 q^2 + c2 q^-b + s q^-2 on q in (0, inf).
///
/// The inverse-square coefficient s is zero for the bare potential and carries the
/// counter-term of the angular-momentum refinement otherwise. It is kept apart from
/// c2 so that b == 2 and b != 2 share the same evaluation path.
template <typename Scalar = double>
class PotentialModel {
 public:
  PotentialModel(Scalar c1, Scalar c2, Scalar b, Scalar inverse_square = Scalar(0))
      : c1_(c1), c2_(c2), b_(b), inverse_square_(inverse_square) {
    if (!(c1 > Scalar(0))) throw DomainError("potential: c1 must be positive");
    if (!(c2 >= Scalar(0))) throw DomainError("potential: c2 must be non-negative");
    if (!(b > Scalar(0))) throw DomainError("potential: b must be positive");
  }

  Scalar c1() const noexcept { return c1_; }
  Scalar c2() const noexcept { return c2_; }
  Scalar b() const noexcept { return b_; }
  Scalar inverse_square() const noexcept { return inverse_square_; }

  Scalar value(Scalar q) const { return derivative(q, 0); }

  /// d^n V / dq^n at q, term by term in closed form.
  Scalar derivative(Scalar q, int order) const {
    using std::pow;
    if (!(q > Scalar(0))) throw DomainError("potential: evaluation requires q > 0");
    if (order < 0) throw DomainError("potential: derivative order must be non-negative");
    const Scalar n(order);
    // Singular terms are summed first so that a b == 2 spike and an equal and opposite
    // inverse-square term cancel exactly.
    Scalar r(0);
    if (c2_ != Scalar(0)) r += c2_ * falling_factorial(-b_, order) * pow(q, -b_ - n);
    if (inverse_square_ != Scalar(0))
      r += inverse_square_ * falling_factorial(Scalar(-2), order) * pow(q, Scalar(-2) - n);
    if (order <= 2) r += c1_ * falling_factorial(Scalar(2), order) * pow(q, Scalar(2) - n);
    return r;
  }

  PotentialModel with_inverse_square(Scalar s) const { return PotentialModel(c1_, c2_, b_, s); }

 private:
  Scalar c1_;
  Scalar c2_;
  Scalar b_;
  Scalar inverse_square_;
};

/// Problem rewritten with l_H(l_H + 1) = l(l + 1) + A and a compensating -A / (2 q^2).
template <typename Scalar = double>
struct RefinedProblem {
  PotentialModel<Scalar> potential;
  Scalar l_in;
  Scalar l_H;
  Scalar A;
};

template <typename Scalar>
RefinedProblem<Scalar> apply_a_refinement(const PotentialModel<Scalar>& p, Scalar l_in, Scalar A) {
  using std::sqrt;
  const Scalar disc = (l_in + Scalar(0.5)) * (l_in + Scalar(0.5)) + A;
  if (disc < Scalar(0)) throw DomainError("refinement: (l + 1/2)^2 + A must be non-negative");
  if (A == Scalar(0)) return {p, l_in, l_in, A};
  const Scalar l_H = -Scalar(0.5) + sqrt(disc);
  return {p.with_inverse_square(p.inverse_square() - A / Scalar(2)), l_in, l_H, A};
}

}  // namespace pslet
