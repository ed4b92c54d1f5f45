#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>

namespace pslet {

/// Dense polynomial in x, coefficient i multiplies x^i.
template <typename Scalar>
using Poly = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
Poly<Scalar> poly_zero(Eigen::Index size = 1) {
  return Poly<Scalar>::Zero(std::max<Eigen::Index>(size, 1));
}

template <typename Scalar>
Poly<Scalar> poly_monomial(Eigen::Index power, Scalar coefficient = Scalar(1)) {
  Poly<Scalar> p = Poly<Scalar>::Zero(power + 1);
  p(power) = coefficient;
  return p;
}

/// acc += scale * p, growing acc when p has higher degree.
template <typename Scalar, typename Derived>
void poly_accumulate(Poly<Scalar>& acc, const Eigen::MatrixBase<Derived>& p, Scalar scale = Scalar(1)) {
  if (p.size() > acc.size()) {
    const Eigen::Index old = acc.size();
    acc.conservativeResize(p.size());
    acc.tail(p.size() - old).setZero();
  }
  acc.head(p.size()) += scale * p;
}

template <typename DerivedA, typename DerivedB>
Poly<typename DerivedA::Scalar> poly_mul(const Eigen::MatrixBase<DerivedA>& a,
                                         const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Poly<Scalar> out = Poly<Scalar>::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) == Scalar(0)) continue;
    out.segment(i, b.size()) += a(i) * b;
  }
  return out;
}

template <typename Derived>
Poly<typename Derived::Scalar> poly_derivative(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  if (p.size() <= 1) return poly_zero<Scalar>();
  Poly<Scalar> out(p.size() - 1);
  for (Eigen::Index i = 1; i < p.size(); ++i) out(i - 1) = Scalar(i) * p(i);
  return out;
}

/// Antiderivative with zero constant term.
template <typename Derived>
Poly<typename Derived::Scalar> poly_antiderivative(const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  Poly<Scalar> out = Poly<Scalar>::Zero(p.size() + 1);
  for (Eigen::Index i = 0; i < p.size(); ++i) out(i + 1) = p(i) / Scalar(i + 1);
  return out;
}

template <typename Derived>
typename Derived::Scalar poly_eval(const Eigen::MatrixBase<Derived>& p, typename Derived::Scalar x) {
  using Scalar = typename Derived::Scalar;
  Scalar acc(0);
  for (Eigen::Index i = p.size() - 1; i >= 0; --i) acc = acc * x + p(i);
  return acc;
}

/// Index of the highest coefficient with |c| > tol, or -1 for the zero polynomial.
template <typename Derived>
Eigen::Index poly_degree(const Eigen::MatrixBase<Derived>& p, typename Derived::Scalar tol = 0) {
  using std::abs;
  for (Eigen::Index i = p.size() - 1; i >= 0; --i)
    if (abs(p(i)) > tol) return i;
  return -1;
}

}  // namespace pslet
