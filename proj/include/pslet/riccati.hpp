#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "pslet/errors.hpp"
#include "pslet/polynomial.hpp"
#include "pslet/potential.hpp"
#include "pslet/shift_frame.hpp"

namespace pslet {

// The wave function is written as F(x) exp(U(x)) with h = lbar^(-1/2) and
//
//   U'(x) = sum_j y_j(x) h^j,   F(x) = sum_j f_j(x) h^j,   f_0 = x^k + ...,
//
// so that y_j = U^(j) + G^(j-1) collects the odd (D) and even (C) coefficient
// families of the same half-order, and f_j holds the a_p^(j), p < k.

struct RecursionOptions {
  /// Highest energy correction E^(n) computed; the recursion runs to half-order 2n + 2.
  int energy_order = kDefaultEnergyOrder;

  int half_orders() const { return 2 * energy_order + 2; }
};

template <typename Scalar = double>
struct WavefunctionExpansion {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  int k = 0;
  Scalar w{};
  /// y_j, j = 0 .. half_orders
  std::vector<Poly<Scalar>> log_derivative;
  /// f_j, j = 0 .. half_orders; f_0 carries the leading x^k
  std::vector<Poly<Scalar>> prefactor;

  int half_orders() const { return static_cast<int>(log_derivative.size()) - 1; }

  /// D_{m,n,k}: coefficient of x^(2m-1) in U_k^(n).
  Scalar D(int m, int n) const {
    if (m <= 0 || n < 0 || n > half_orders()) return Scalar(0);
    return coefficient(log_derivative[n], 2 * m - 1);
  }

  /// C_{m,n,k}: coefficient of x^(2m) in G_k^(n).
  Scalar C(int m, int n) const {
    if (m < 0 || n < 0 || n + 1 > half_orders()) return Scalar(0);
    return coefficient(log_derivative[n + 1], 2 * m);
  }

  /// a_{p,k}^(n): coefficient of x^p in the F correction at half-order n, p < k.
  Scalar a(int p, int n) const {
    if (p < 0 || p >= k || n < 0 || n > half_orders()) return Scalar(0);
    return coefficient(prefactor[n], p);
  }

  /// Dcoef[m][n], m = 0 .. N+1, n = 0 .. N.
  Matrix d_table() const {
    const int N = half_orders();
    Matrix t = Matrix::Zero(N + 2, N + 1);
    for (int n = 0; n <= N; ++n)
      for (int m = 1; m <= n + 1; ++m) t(m, n) = D(m, n);
    return t;
  }

  /// Ccoef[m][n], m = 0 .. N, n = 0 .. N-1.
  Matrix c_table() const {
    const int N = half_orders();
    Matrix t = Matrix::Zero(N + 1, std::max(N, 1));
    for (int n = 0; n < N; ++n)
      for (int m = 0; m <= n + 1; ++m) t(m, n) = C(m, n);
    return t;
  }

  /// acoef[p][n], p = 0 .. k-1, n = 0 .. N.
  Matrix a_table() const {
    const int N = half_orders();
    Matrix t = Matrix::Zero(k, N + 1);
    for (int n = 0; n <= N; ++n)
      for (int p = 0; p < k; ++p) t(p, n) = a(p, n);
    return t;
  }

 private:
  static Scalar coefficient(const Poly<Scalar>& p, int i) { return i < p.size() ? p(i) : Scalar(0); }
};

template <typename Scalar = double>
struct EnergySeries {
  Scalar Eminus2{};
  Scalar Eminus1{};
  /// E^(n), n = 0 .. energy_order
  std::vector<Scalar> corrections;
  /// lambda_k^(n): lambda^(0) = q_o^2 E^(0) - beta(beta+1)/2, lambda^(n) = q_o^2 E^(n) otherwise
  std::vector<Scalar> lambda;
  Scalar eps0{};
  Scalar lbar{};
  /// Largest |energy coefficient| at odd half-orders; zero up to rounding.
  Scalar odd_order_residue{};
  /// Relative back-substitution residual of each half-order.
  std::vector<Scalar> order_residuals;

  Scalar leading() const { return lbar * lbar * Eminus2; }

  /// lbar^2 E^(-2) + sum_n E^(n) / lbar^n
  Scalar plain_sum() const {
    Scalar s = leading();
    Scalar inv(1);
    for (const Scalar& e : corrections) {
      s += e * inv;
      inv /= lbar;
    }
    return s;
  }

  /// |t_(n+1) / t_n| for the terms t_n = E^(n) / lbar^n; NaN where t_n == 0.
  std::vector<Scalar> term_ratios() const {
    using std::abs;
    std::vector<Scalar> r;
    for (std::size_t n = 0; n + 1 < corrections.size(); ++n) {
      const Scalar t0 = corrections[n];
      const Scalar t1 = corrections[n + 1] / lbar;
      r.push_back(t0 == Scalar(0) ? std::numeric_limits<Scalar>::quiet_NaN() : abs(t1 / t0));
    }
    return r;
  }
};

template <typename Scalar = double>
struct RecursionResult {
  WavefunctionExpansion<Scalar> expansion;
  EnergySeries<Scalar> energies;
};

/// (E^(-2), E^(-1)); the second vanishes by the choice of beta.
template <typename Scalar>
std::pair<Scalar, Scalar> zeroth_order(const ShiftFrame<Scalar>& frame, const PotentialModel<Scalar>& p) {
  const Scalar qo2 = frame.q_o * frame.q_o;
  const Scalar e_m2 = Scalar(1) / (Scalar(2) * qo2) + p.value(frame.q_o) / frame.Q;
  const Scalar e_m1 =
      ((Scalar(2) * frame.beta + Scalar(1)) / Scalar(2) + (Scalar(frame.k) + Scalar(0.5)) * frame.w) / qo2;
  return {e_m2, e_m1};
}

namespace detail {

template <typename Scalar>
class RiccatiSolver {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  RiccatiSolver(const ShiftFrame<Scalar>& frame, const PerturbationPolynomials<Scalar>& v)
      : frame_(frame), v_(v.v), k_(frame.k) {}

  RecursionResult<Scalar> run(int half_orders) {
    if (static_cast<int>(v_.size()) < half_orders + 1)
      throw DomainError("solve_recursion: perturbation polynomials stop at v^(" +
                        std::to_string(v_.size() - 1) + ")");
    y_.clear();
    f_.clear();
    eps_.clear();
    residuals_.clear();
    solve_order_zero();
    for (int j = 1; j <= half_orders; ++j) solve_order(j);
    return collect(half_orders);
  }

 private:
  // Coefficient of h^b in -1/2 (U'' + U'^2) + V - eps.
  Poly<Scalar> g(int b) const {
    Poly<Scalar> out = v_[b];
    poly_accumulate(out, poly_derivative(y_[b]), Scalar(-0.5));
    for (int c = 0; c <= b; ++c) poly_accumulate(out, poly_mul(y_[c], y_[b - c]), Scalar(-0.5));
    out(0) -= eps_[b];
    return out;
  }

  // Coefficient of h^j in F [ -1/2 (U'' + U'^2) + V - eps ] - F' U' - 1/2 F''.
  Poly<Scalar> expression(int j) const {
    Poly<Scalar> out = poly_zero<Scalar>();
    for (int a = 0; a <= j; ++a) {
      poly_accumulate(out, poly_mul(f_[a], g(j - a)));
      poly_accumulate(out, poly_mul(poly_derivative(f_[a]), y_[j - a]), Scalar(-1));
    }
    poly_accumulate(out, poly_derivative(poly_derivative(f_[j])), Scalar(-0.5));
    return out;
  }

  static Scalar max_abs(const Poly<Scalar>& p) { return p.size() ? p.cwiseAbs().maxCoeff() : Scalar(0); }

  void solve_order_zero() {
    y_.push_back(poly_monomial<Scalar>(1, -frame_.w));
    f_.push_back(poly_monomial<Scalar>(k_));
    eps_.push_back(Scalar(0));

    // The x^k balance fixes eps_0; the rows below fix the Hermite-like tail of f_0.
    const Poly<Scalar> r0 = expression(0);
    eps_[0] = r0(k_);
    if (k_ > 0) {
      const Poly<Scalar> g0 = g(0);
      Matrix M = Matrix::Zero(k_, k_);
      for (int p = 0; p < k_; ++p) {
        const Poly<Scalar> col = prefactor_column(p, g0);
        for (int r = 0; r < k_ && r < col.size(); ++r) M(r, p) = col(r);
      }
      const Poly<Scalar> rhs_full = expression(0);
      Vector rhs = -rhs_full.head(k_);
      check_diagonal(M, 0);
      const Vector sol = M.template triangularView<Eigen::Upper>().solve(rhs);
      f_[0].head(k_) = sol;
    }
    residuals_.push_back(relative_residual(0, Scalar(0)));
  }

  Poly<Scalar> prefactor_column(int p, const Poly<Scalar>& g0) const {
    const Poly<Scalar> xp = poly_monomial<Scalar>(p);
    Poly<Scalar> col = poly_mul(xp, g0);
    poly_accumulate(col, poly_mul(poly_derivative(xp), y_[0]), Scalar(-1));
    poly_accumulate(col, poly_derivative(poly_derivative(xp)), Scalar(-0.5));
    return col;
  }

  // Unknowns at half-order j, in order of the x power they lead:
  //   a_p (row p), eps_j (row k), y_j coefficient of x^i (row k + 1 + i).
  void solve_order(int j) {
    const int n = k_ + j + 3;
    y_.push_back(poly_zero<Scalar>(j + 2));
    f_.push_back(poly_zero<Scalar>(std::max(k_, 1)));
    eps_.push_back(Scalar(0));

    const Poly<Scalar> base = expression(j);
    const Poly<Scalar> g0 = g(0);
    const Poly<Scalar> df0 = poly_derivative(f_[0]);

    Matrix M = Matrix::Zero(n, n);
    auto place = [&](int col, const Poly<Scalar>& c) {
      for (Eigen::Index r = 0; r < c.size(); ++r) {
        if (r < n) M(r, col) = c(r);
        else if (c(r) != Scalar(0)) throw DegenerateRecursion(j, "polynomial degree exceeds the allocated bound");
      }
    };
    for (int p = 0; p < k_; ++p) place(p, prefactor_column(p, g0));
    place(k_, Poly<Scalar>(-f_[0]));
    for (int i = 0; i <= j + 1; ++i) {
      const Poly<Scalar> xi = poly_monomial<Scalar>(i);
      Poly<Scalar> inner = poly_mul(y_[0], xi);
      inner *= Scalar(-1);
      poly_accumulate(inner, poly_derivative(xi), Scalar(-0.5));
      Poly<Scalar> col = poly_mul(f_[0], inner);
      poly_accumulate(col, poly_mul(df0, xi), Scalar(-1));
      place(k_ + 1 + i, col);
    }

    Vector rhs = Vector::Zero(n);
    for (Eigen::Index r = 0; r < base.size(); ++r) {
      if (r < n) rhs(r) = -base(r);
      else if (base(r) != Scalar(0)) throw DegenerateRecursion(j, "inhomogeneity exceeds the allocated degree");
    }

    check_diagonal(M, j);
    const Vector sol = M.template triangularView<Eigen::Upper>().solve(rhs);

    if (k_ > 0) f_[j].head(k_) = sol.head(k_);
    eps_[j] = sol(k_);
    y_[j] = sol.tail(j + 2);

    residuals_.push_back(relative_residual(j, rhs.cwiseAbs().maxCoeff()));
  }

  void check_diagonal(const Matrix& M, int order) const {
    using std::abs;
    const Scalar tiny = std::numeric_limits<Scalar>::epsilon() * std::max(Scalar(1), M.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < M.rows(); ++i)
      if (!(abs(M(i, i)) > tiny))
        throw DegenerateRecursion(order, "zero pivot in the triangular system");
  }

  // Residual of the half-order-j balance relative to the largest coefficient retained there.
  Scalar relative_residual(int j, Scalar extra_scale) const {
    using std::abs;
    const Scalar res = max_abs(expression(j));
    const Scalar scale = std::max({extra_scale, max_abs(v_[j]), max_abs(y_[j]), max_abs(f_[j]), abs(eps_[j]),
                                   std::numeric_limits<Scalar>::min()});
    return res / scale;
  }

  RecursionResult<Scalar> collect(int half_orders) const {
    using std::abs;
    RecursionResult<Scalar> out;
    auto& ex = out.expansion;
    ex.k = k_;
    ex.w = frame_.w;
    ex.log_derivative = y_;
    ex.prefactor = f_;

    auto& es = out.energies;
    const Scalar qo2 = frame_.q_o * frame_.q_o;
    const Scalar bb1 = frame_.beta * (frame_.beta + Scalar(1));
    es.lbar = frame_.lbar;
    es.Eminus2 = frame_.leading_term();
    es.Eminus1 = eps_[0] / qo2;
    const int energy_order = (half_orders - 2) / 2;
    for (int n = 0; n <= energy_order; ++n) {
      const Scalar e = eps_[2 * n + 2] / qo2;
      es.corrections.push_back(e);
      es.lambda.push_back(n == 0 ? qo2 * e - bb1 / Scalar(2) : qo2 * e);
    }
    es.eps0 = frame_.lbar * (Scalar(0.5) + qo2 * frame_.potential_at_qo / frame_.Q) +
              (Scalar(2) * frame_.beta + Scalar(1)) / Scalar(2) + bb1 / (Scalar(2) * frame_.lbar);
    Scalar odd(0);
    for (int j = 1; j <= half_orders; j += 2) odd = std::max(odd, abs(eps_[j]));
    es.odd_order_residue = odd;
    es.order_residuals = residuals_;
    return out;
  }

  const ShiftFrame<Scalar>& frame_;
  const std::vector<Poly<Scalar>>& v_;
  int k_;
  std::vector<Poly<Scalar>> y_;
  std::vector<Poly<Scalar>> f_;
  std::vector<Scalar> eps_;
  std::vector<Scalar> residuals_;
};

}  // namespace detail

/// Solves the Riccati hierarchy order by order in h = lbar^(-1/2).
///
/// At each half-order the unknown coefficients of y_j and f_j and the energy
/// coefficient form a square upper-triangular system when ordered by the x power
/// they lead; it is solved from the highest power down.
template <typename Scalar>
RecursionResult<Scalar> solve_recursion(const ShiftFrame<Scalar>& frame, const PerturbationPolynomials<Scalar>& v,
                                        const RecursionOptions& opts = {}) {
  if (opts.energy_order < 0) throw DomainError("solve_recursion: energy order must be non-negative");
  detail::RiccatiSolver<Scalar> solver(frame, v);
  return solver.run(opts.half_orders());
}

/// Frame, perturbation polynomials and recursion for one (k, l_D).
template <typename Scalar>
struct PsletSolution {
  ShiftFrame<Scalar> frame;
  WavefunctionExpansion<Scalar> expansion;
  EnergySeries<Scalar> energies;
};

template <typename Scalar>
PsletSolution<Scalar> solve_pslet(const PotentialModel<Scalar>& p, int k, Scalar l_D, const RecursionOptions& opts = {}) {
  const int half = opts.half_orders();
  ShiftFrame<Scalar> frame = solve_qo(p, k, l_D, half + 2);
  const PerturbationPolynomials<Scalar> v = build_v(frame, half);
  RecursionResult<Scalar> r = solve_recursion(frame, v, opts);
  return {std::move(frame), std::move(r.expansion), std::move(r.energies)};
}

template <typename Scalar = double>
struct WavefunctionSamples {
  std::vector<Scalar> q;
  std::vector<Scalar> psi;
  int node_count = 0;
  /// Trapezoidal integral of |psi|^2 before normalization (after removing exp(max U)).
  Scalar raw_norm{};
  bool outside_trust_region = false;
  std::string warning;
};

/// Largest |y| = |q - q_o| / q_o at which the assembled series is trusted.
inline constexpr double kTrustRadius = 0.8;

/// Samples psi(q) = F(x) exp(U(x)), x = lbar^(1/2) (q - q_o) / q_o, normalized on the grid.
template <typename Scalar>
WavefunctionSamples<Scalar> assemble_wavefunction(const WavefunctionExpansion<Scalar>& ex,
                                                  const ShiftFrame<Scalar>& frame,
                                                  const std::vector<Scalar>& q_grid,
                                                  Scalar trust_radius = Scalar(kTrustRadius)) {
  using std::abs;
  using std::exp;
  using std::sqrt;
  if (q_grid.size() < 2) throw DomainError("assemble_wavefunction: need at least two grid points");
  const Scalar sqrt_lbar = sqrt(frame.lbar);
  const Scalar h = Scalar(1) / sqrt_lbar;
  std::vector<Poly<Scalar>> U;
  for (const auto& y : ex.log_derivative) U.push_back(poly_antiderivative(y));

  WavefunctionSamples<Scalar> out;
  out.q = q_grid;
  std::vector<Scalar> logamp(q_grid.size()), amp(q_grid.size());
  Scalar umax = -std::numeric_limits<Scalar>::infinity();
  for (std::size_t i = 0; i < q_grid.size(); ++i) {
    const Scalar q = q_grid[i];
    if (!(q > Scalar(0))) throw DomainError("assemble_wavefunction: grid points must be positive");
    if (abs(q - frame.q_o) / frame.q_o > trust_radius) out.outside_trust_region = true;
    const Scalar x = sqrt_lbar * (q - frame.q_o) / frame.q_o;
    Scalar u(0), F(0), hp(1);
    for (std::size_t j = 0; j < U.size(); ++j) {
      u += hp * poly_eval(U[j], x);
      F += hp * poly_eval(ex.prefactor[j], x);
      hp *= h;
    }
    logamp[i] = u;
    amp[i] = F;
    umax = std::max(umax, u);
  }
  out.psi.resize(q_grid.size());
  for (std::size_t i = 0; i < q_grid.size(); ++i) out.psi[i] = amp[i] * exp(logamp[i] - umax);

  Scalar norm(0);
  for (std::size_t i = 0; i + 1 < q_grid.size(); ++i)
    norm += Scalar(0.5) * (q_grid[i + 1] - q_grid[i]) * (out.psi[i] * out.psi[i] + out.psi[i + 1] * out.psi[i + 1]);
  out.raw_norm = norm;
  const Scalar scale = Scalar(1) / sqrt(norm);
  for (Scalar& v : out.psi) v *= scale;

  int sign = 0;
  for (const Scalar& v : out.psi) {
    const int s = (v > Scalar(0)) - (v < Scalar(0));
    if (s != 0 && sign != 0 && s != sign) ++out.node_count;
    if (s != 0) sign = s;
  }
  if (out.outside_trust_region)
    out.warning = "grid extends beyond |q - q_o| / q_o <= " + std::to_string(static_cast<double>(trust_radius)) +
                  "; series truncation error is not controlled there";
  return out;
}

template <typename Scalar = double>
struct ResummationCheck {
  bool ok = true;
  /// Largest |U_partial - U_closed| / bound over the sample points.
  Scalar worst_ratio{};
  std::vector<Scalar> y;
  std::vector<Scalar> difference;
  std::vector<Scalar> bound;
};

/// For a nodeless pure-oscillator frame, compares the part of U carrying powers y^p,
/// p <= through_power, with (lbar - 1/2) ln(1+y) - lbar y - lbar y^2 / 2.
/// The admissible gap is the tail of the logarithm,
/// (lbar + 1/2) |y|^(n+1) / ((n + 1) (1 - |y|)), plus a rounding allowance.
template <typename Scalar>
ResummationCheck<Scalar> geometric_resummation_check(const ShiftFrame<Scalar>& frame,
                                                     const WavefunctionExpansion<Scalar>& ex,
                                                     const std::vector<Scalar>& y_samples,
                                                     int through_power = 8) {
  using std::abs;
  using std::log;
  using std::pow;
  using std::sqrt;
  if (ex.k != 0) throw DomainError("geometric_resummation_check: requires a nodeless state");
  if (ex.half_orders() < through_power)
    throw DomainError("geometric_resummation_check: expansion too short for the requested power");
  const Scalar lbar = frame.lbar;
  const Scalar h = Scalar(1) / sqrt(lbar);

  // U as a polynomial in y: h^j c x^p = c y^p h^(j - p).
  Poly<Scalar> in_y = Poly<Scalar>::Zero(through_power + 1);
  for (int j = 0; j <= ex.half_orders(); ++j) {
    const Poly<Scalar> Uj = poly_antiderivative(ex.log_derivative[j]);
    for (Eigen::Index p = 0; p < Uj.size() && p <= through_power; ++p)
      in_y(p) += Uj(p) * pow(h, Scalar(j) - Scalar(p));
  }

  ResummationCheck<Scalar> out;
  for (const Scalar y : y_samples) {
    if (!(abs(y) < Scalar(1))) throw DomainError("geometric_resummation_check: |y| must be below 1");
    const Scalar closed = (lbar - Scalar(0.5)) * log(Scalar(1) + y) - lbar * y - lbar * y * y / Scalar(2);
    const Scalar partial = poly_eval(in_y, y);
    const Scalar tail = (lbar + Scalar(0.5)) * pow(abs(y), Scalar(through_power + 1)) /
                        (Scalar(through_power + 1) * (Scalar(1) - abs(y)));
    const Scalar bound = tail + Scalar(64) * std::numeric_limits<Scalar>::epsilon() * (lbar + Scalar(1));
    const Scalar diff = abs(partial - closed);
    out.y.push_back(y);
    out.difference.push_back(diff);
    out.bound.push_back(bound);
    out.worst_ratio = std::max(out.worst_ratio, diff / bound);
    if (diff > bound) out.ok = false;
  }
  return out;
}

}  // namespace pslet
