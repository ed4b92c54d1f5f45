#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "pslet/errors.hpp"
#include "pslet/polynomial.hpp"

namespace pslet {

/// Reciprocal condition estimate below which a Pade system is treated as singular.
inline constexpr double kPadeMinRcond = 1e-14;

/// P_N^M(x) = (P_0 + ... + P_M x^M) / (1 + q_1 x + ... + q_N x^N).
template <typename Scalar = double>
struct PadeApproximant {
  Poly<Scalar> num;
  Poly<Scalar> den;
  int N = 0;
  int M = 0;
  int requested_N = 0;
  int requested_M = 0;
  Scalar rcond = Scalar(1);

  bool fell_back() const { return N != requested_N || M != requested_M; }

  Scalar operator()(Scalar x) const { return poly_eval(num, x) / poly_eval(den, x); }

  std::vector<std::complex<Scalar>> poles() const {
    std::vector<std::complex<Scalar>> out;
    const Eigen::Index deg = poly_degree(den);
    if (deg < 1) return out;
    Eigen::PolynomialSolver<Scalar, Eigen::Dynamic> solver(den.head(deg + 1));
    for (Eigen::Index i = 0; i < solver.roots().size(); ++i) out.push_back(solver.roots()(i));
    return out;
  }

  /// True when a zero of the denominator lies in the closed disk |x| <= radius.
  bool pole_within(Scalar radius) const {
    using std::abs;
    for (const auto& z : poles())
      if (abs(z) <= radius) return true;
    return false;
  }
};

namespace detail {

template <typename Scalar, typename Derived>
bool try_pade(const Eigen::MatrixBase<Derived>& c, int N, int M, PadeApproximant<Scalar>& out) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  auto coef = [&](int i) { return i >= 0 ? c(i) : Scalar(0); };

  out.N = N;
  out.M = M;
  out.den = Poly<Scalar>::Zero(N + 1);
  out.den(0) = Scalar(1);
  out.rcond = Scalar(1);
  if (N > 0) {
    Matrix A(N, N);
    Vector rhs(N);
    for (int r = 0; r < N; ++r) {
      for (int col = 0; col < N; ++col) A(r, col) = coef(M + r - col);
      rhs(r) = -coef(M + 1 + r);
    }
    const Eigen::FullPivLU<Matrix> lu(A);
    out.rcond = lu.rcond();
    if (!lu.isInvertible() || !(out.rcond >= Scalar(kPadeMinRcond))) return false;
    out.den.tail(N) = lu.solve(rhs);
  }
  out.num = Poly<Scalar>::Zero(M + 1);
  for (int i = 0; i <= M; ++i)
    for (int j = 0; j <= std::min(i, N); ++j) out.num(i) += out.den(j) * coef(i - j);
  return true;
}

}  // namespace detail

/// Diagonal or off-diagonal Pade approximant from series coefficients c_0 .. c_(N+M).
/// A singular or ill-conditioned system drops to [N-1, M-1], recorded in the result.
template <typename Derived>
PadeApproximant<typename Derived::Scalar> pade(const Eigen::MatrixBase<Derived>& c, int N, int M) {
  using Scalar = typename Derived::Scalar;
  if (N < 0 || M < 0) throw DomainError("pade: orders must be non-negative");
  if (c.size() < N + M + 1) throw DomainError("pade: need N + M + 1 coefficients");
  PadeApproximant<Scalar> out;
  for (int n = N, m = M; n >= 0 && m >= 0; --n, --m) {
    if (detail::try_pade<Scalar>(c, n, m, out)) break;
    if (n == 0 || m == 0) throw DomainError("pade: no well-conditioned approximant");
  }
  out.requested_N = N;
  out.requested_M = M;
  return out;
}

template <typename Scalar>
PadeApproximant<Scalar> pade(const std::vector<Scalar>& c, int N, int M) {
  const Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> v(c.data(), static_cast<Eigen::Index>(c.size()));
  return pade(v, N, M);
}

/// Energy from the leading term plus an accelerated correction series in x = 1/lbar.
template <typename Scalar = double>
struct AcceleratedEnergy {
  Scalar value{};
  /// Orders actually used; [0,0] means the plain partial sum.
  int N = 0;
  int M = 0;
  bool fallback = false;
  std::string reason;
};

/// leading + P_N^M(1/lbar) with the ladder [N,M] -> [N-1,M-1] -> ... -> plain sum,
/// descending while both orders stay at least 2. A rung is rejected when its system is
/// ill-conditioned or a denominator zero lies in |x| <= 1/lbar.
template <typename Scalar>
AcceleratedEnergy<Scalar> accelerate(const std::vector<Scalar>& corrections, Scalar leading, Scalar lbar, int N = 4,
                                     int M = 4) {
  using std::abs;
  if (N < 0 || M < 0) throw DomainError("accelerate: orders must be non-negative");
  if (static_cast<int>(corrections.size()) < N + M + 1)
    throw DomainError("accelerate: need N + M + 1 corrections");
  const Scalar x = Scalar(1) / lbar;
  AcceleratedEnergy<Scalar> out;

  Scalar plain = leading, xp(1), largest(0);
  for (const Scalar& e : corrections) {
    plain += e * xp;
    xp *= x;
    largest = std::max(largest, abs(e));
  }
  if (largest <= Scalar(64) * std::numeric_limits<Scalar>::epsilon() * std::max(abs(leading), Scalar(1))) {
    out.value = plain;
    out.N = N;
    out.M = M;
    out.reason = "negligible corrections";
    return out;
  }

  auto label = [](int n, int m) { return "[" + std::to_string(n) + "," + std::to_string(m) + "]"; };
  for (int n = N, m = M; n >= 0 && m >= 0; --n, --m) {
    if ((n != N) && std::min(n, m) < 2) break;
    const Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> c(corrections.data(), n + m + 1);
    PadeApproximant<Scalar> P;
    if (!detail::try_pade<Scalar>(c, n, m, P)) {
      out.reason += label(n, m) + " ill-conditioned; ";
      continue;
    }
    if (P.pole_within(x)) {
      out.reason += label(n, m) + " pole inside |x|<=1/lbar; ";
      continue;
    }
    out.value = leading + P(x);
    out.N = n;
    out.M = m;
    out.fallback = n != N;
    return out;
  }
  out.value = plain;
  out.fallback = true;
  out.reason += "plain sum";
  return out;
}

template <typename Scalar = double>
struct StaircaseEntry {
  int order = 0;
  Scalar value{};
  Scalar rcond{};
  bool pole_in_disk = false;
  bool ill_conditioned = false;
};

template <typename Scalar = double>
struct PadeStaircase {
  std::vector<StaircaseEntry<Scalar>> entries;
  Scalar spread{};
  bool stable = false;

  /// Value of the [n,n] rung, NaN when absent.
  Scalar at(int n) const {
    for (const auto& e : entries)
      if (e.order == n) return e.value;
    return std::numeric_limits<Scalar>::quiet_NaN();
  }
};

/// E[2,2] .. E[max_order,max_order] (each including the leading term) and their spread.
template <typename Scalar>
PadeStaircase<Scalar> pade_staircase(const std::vector<Scalar>& corrections, Scalar leading, Scalar lbar,
                                     int max_order = 4, Scalar tolerance = Scalar(1e-6)) {
  using std::abs;
  if (static_cast<int>(corrections.size()) < 2 * max_order + 1)
    throw DomainError("pade_staircase: need 2 * max_order + 1 coefficients");
  const Scalar x = Scalar(1) / lbar;
  PadeStaircase<Scalar> out;
  for (int n = 2; n <= max_order; ++n) {
    const Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> c(corrections.data(), 2 * n + 1);
    StaircaseEntry<Scalar> e;
    e.order = n;
    PadeApproximant<Scalar> P;
    if (detail::try_pade<Scalar>(c, n, n, P)) {
      e.value = leading + P(x);
      e.pole_in_disk = P.pole_within(x);
    } else {
      // A singular system means the series is itself rational of lower degree.
      e.ill_conditioned = true;
      e.value = leading + pade(c, n, n)(x);
    }
    e.rcond = P.rcond;
    out.entries.push_back(e);
  }
  Scalar spread(0);
  for (const auto& a : out.entries)
    for (const auto& b : out.entries) spread = std::max(spread, abs(a.value - b.value));
  out.spread = spread;
  out.stable = spread < tolerance;
  return out;
}

}  // namespace pslet
