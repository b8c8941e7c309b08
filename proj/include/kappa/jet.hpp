#pragma once

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <utility>

#include "kappa/errors.hpp"

namespace kappa {

/// Truncated Taylor expansion of an analytic function about a fixed base
/// point: coeffs[k] = f^(k)(a) / k!. The order K is fixed at construction
/// and arithmetic never promotes it; mixing orders or base points throws.
///
/// All operations are pure and jets are immutable, so values can be shared
/// freely across threads.
template <typename Scalar>
class Jet {
 public:
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Jet(Scalar base_point, Coeffs coeffs)
      : base_(base_point), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() < 1) throw InvalidInput("jet needs at least one coefficient");
    check_finite();
  }

  /// Jet of the constant function c.
  static Jet constant(Scalar c, Scalar base_point, int order) {
    require_order(order);
    Coeffs coeffs = Coeffs::Zero(order + 1);
    coeffs[0] = c;
    return Jet(base_point, std::move(coeffs));
  }

  /// Jet of the identity function z.
  static Jet variable(Scalar base_point, int order) {
    require_order(order);
    Coeffs coeffs = Coeffs::Zero(order + 1);
    coeffs[0] = base_point;
    if (order >= 1) coeffs[1] = Scalar(1);
    return Jet(base_point, std::move(coeffs));
  }

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  Scalar base_point() const { return base_; }
  const Coeffs& coeffs() const { return coeffs_; }
  Scalar operator[](int k) const { return coeffs_[k]; }

  /// Function value at the base point.
  Scalar value() const { return coeffs_[0]; }

  /// k-th derivative value at the base point: k! * coeffs[k].
  Scalar derivative(int k) const {
    if (k < 0 || k > order())
      throw OrderExceeded("derivative order " + std::to_string(k) +
                          " exceeds jet order " + std::to_string(order()));
    Real factorial(1);
    for (int j = 2; j <= k; ++j) factorial *= Real(j);
    return coeffs_[k] * Scalar(factorial);
  }

  /// Same jet truncated to a lower order.
  Jet truncated(int new_order) const {
    if (new_order < 0 || new_order > order())
      throw OrderExceeded("cannot truncate order " + std::to_string(order()) +
                          " jet to order " + std::to_string(new_order));
    return Jet(base_, coeffs_.head(new_order + 1).eval());
  }

  /// Formal derivative: coeffs[k] <- (k+1) coeffs[k+1], order drops by
  /// `times`. This is the jet of f^(times) about the same base point.
  Jet differentiated(int times = 1) const {
    if (times < 0 || times > order())
      throw OrderExceeded("cannot differentiate order " + std::to_string(order()) +
                          " jet " + std::to_string(times) + " times");
    Coeffs c = coeffs_;
    int k = order();
    for (int t = 0; t < times; ++t, --k) {
      Coeffs next(k);
      for (int j = 0; j < k; ++j) next[j] = Scalar(Real(j + 1)) * c[j + 1];
      c = std::move(next);
    }
    return Jet(base_, std::move(c));
  }

  /// Scale-aware threshold below which a leading coefficient counts as zero.
  Real leading_tolerance() const {
    return Real(1e-12) * (Real(1) + coeffs_.cwiseAbs().maxCoeff());
  }

 private:
  static void require_order(int order) {
    if (order < 0) throw InvalidInput("jet order must be >= 0");
  }

  void check_finite() const {
    for (Eigen::Index k = 0; k < coeffs_.size(); ++k) {
      if (!std::isfinite(std::abs(coeffs_[k])))
        throw NonFiniteValue("jet coefficient " + std::to_string(k) + " is not finite");
    }
    if (!std::isfinite(std::abs(base_)))
      throw NonFiniteValue("jet base point is not finite");
  }

  Scalar base_;
  Coeffs coeffs_;
};

namespace detail {

template <typename Scalar>
void require_compatible(const Jet<Scalar>& u, const Jet<Scalar>& v) {
  if (u.base_point() != v.base_point())
    throw BasePointMismatch("jets have different base points");
  if (u.order() != v.order())
    throw OrderMismatch("jets have different orders (" + std::to_string(u.order()) +
                        " vs " + std::to_string(v.order()) + ")");
}

}  // namespace detail

template <typename Scalar>
Jet<Scalar> operator+(const Jet<Scalar>& u, const Jet<Scalar>& v) {
  detail::require_compatible(u, v);
  return Jet<Scalar>(u.base_point(), (u.coeffs() + v.coeffs()).eval());
}

template <typename Scalar>
Jet<Scalar> operator-(const Jet<Scalar>& u, const Jet<Scalar>& v) {
  detail::require_compatible(u, v);
  return Jet<Scalar>(u.base_point(), (u.coeffs() - v.coeffs()).eval());
}

template <typename Scalar>
Jet<Scalar> operator-(const Jet<Scalar>& u) {
  return Jet<Scalar>(u.base_point(), (-u.coeffs()).eval());
}

/// Cauchy product truncated at the common order.
template <typename Scalar>
Jet<Scalar> operator*(const Jet<Scalar>& u, const Jet<Scalar>& v) {
  detail::require_compatible(u, v);
  const int order = u.order();
  typename Jet<Scalar>::Coeffs c = Jet<Scalar>::Coeffs::Zero(order + 1);
  for (int k = 0; k <= order; ++k) {
    Scalar acc(0);
    for (int j = 0; j <= k; ++j) acc += u[j] * v[k - j];
    c[k] = acc;
  }
  return Jet<Scalar>(u.base_point(), std::move(c));
}

template <typename Scalar>
Jet<Scalar> operator*(const Jet<Scalar>& u, Scalar s) {
  return Jet<Scalar>(u.base_point(), (u.coeffs() * s).eval());
}

template <typename Scalar>
Jet<Scalar> operator*(Scalar s, const Jet<Scalar>& u) {
  return u * s;
}

template <typename Scalar>
Jet<Scalar> operator+(const Jet<Scalar>& u, Scalar s) {
  typename Jet<Scalar>::Coeffs c = u.coeffs();
  c[0] += s;
  return Jet<Scalar>(u.base_point(), std::move(c));
}

template <typename Scalar>
Jet<Scalar> operator/(const Jet<Scalar>& u, const Jet<Scalar>& v) {
  detail::require_compatible(u, v);
  if (std::abs(v.value()) < v.leading_tolerance())
    throw DivisionByZeroJet("jet division by a jet with (near-)zero value");
  const int order = u.order();
  typename Jet<Scalar>::Coeffs q(order + 1);
  for (int k = 0; k <= order; ++k) {
    Scalar acc = u[k];
    for (int j = 0; j < k; ++j) acc -= q[j] * v[k - j];
    q[k] = acc / v[0];
  }
  return Jet<Scalar>(u.base_point(), std::move(q));
}

template <typename Scalar>
Jet<Scalar> exp(const Jet<Scalar>& u) {
  using Real = typename Jet<Scalar>::Real;
  const int order = u.order();
  typename Jet<Scalar>::Coeffs e(order + 1);
  e[0] = std::exp(u.value());
  // from e' = u' e:  k e_k = sum_{j=1..k} j u_j e_{k-j}
  for (int k = 1; k <= order; ++k) {
    Scalar acc(0);
    for (int j = 1; j <= k; ++j) acc += Scalar(Real(j)) * u[j] * e[k - j];
    e[k] = acc / Scalar(Real(k));
  }
  return Jet<Scalar>(u.base_point(), std::move(e));
}

template <typename Scalar>
std::pair<Jet<Scalar>, Jet<Scalar>> sin_cos(const Jet<Scalar>& u) {
  using Real = typename Jet<Scalar>::Real;
  const int order = u.order();
  typename Jet<Scalar>::Coeffs s(order + 1), c(order + 1);
  s[0] = std::sin(u.value());
  c[0] = std::cos(u.value());
  // coupled pair: s' = u' c, c' = -u' s
  for (int k = 1; k <= order; ++k) {
    Scalar sa(0), ca(0);
    for (int j = 1; j <= k; ++j) {
      sa += Scalar(Real(j)) * u[j] * c[k - j];
      ca += Scalar(Real(j)) * u[j] * s[k - j];
    }
    s[k] = sa / Scalar(Real(k));
    c[k] = -ca / Scalar(Real(k));
  }
  return {Jet<Scalar>(u.base_point(), std::move(s)),
          Jet<Scalar>(u.base_point(), std::move(c))};
}

template <typename Scalar>
Jet<Scalar> sin(const Jet<Scalar>& u) {
  return sin_cos(u).first;
}

template <typename Scalar>
Jet<Scalar> cos(const Jet<Scalar>& u) {
  return sin_cos(u).second;
}

/// u^p for arbitrary complex exponent, principal branch at order zero.
/// Requires u(a) != 0.
template <typename Scalar>
Jet<Scalar> pow(const Jet<Scalar>& u, Scalar p) {
  using Real = typename Jet<Scalar>::Real;
  if (std::abs(u.value()) < u.leading_tolerance())
    throw DivisionByZeroJet("jet power of a jet with (near-)zero value");
  const int order = u.order();
  typename Jet<Scalar>::Coeffs w(order + 1);
  w[0] = std::pow(u.value(), p);
  // from u w' = p u' w:  k u_0 w_k = sum_{j=1..k} (j(p+1) - k) u_j w_{k-j}
  for (int k = 1; k <= order; ++k) {
    Scalar acc(0);
    for (int j = 1; j <= k; ++j)
      acc += (Scalar(Real(j)) * (p + Scalar(1)) - Scalar(Real(k))) * u[j] * w[k - j];
    w[k] = acc / (Scalar(Real(k)) * u[0]);
  }
  return Jet<Scalar>(u.base_point(), std::move(w));
}

// Guard against a double exponent silently converting to int.
template <typename Scalar>
Jet<Scalar> pow(const Jet<Scalar>& u, double p) = delete;

/// u^m for integer m, valid at u(a) = 0 when m >= 0.
template <typename Scalar>
Jet<Scalar> pow(const Jet<Scalar>& u, int m) {
  if (m < 0) {
    Jet<Scalar> one = Jet<Scalar>::constant(Scalar(1), u.base_point(), u.order());
    return one / pow(u, -m);
  }
  Jet<Scalar> result = Jet<Scalar>::constant(Scalar(1), u.base_point(), u.order());
  Jet<Scalar> square = u;
  int e = m;
  while (e > 0) {
    if (e & 1) result = result * square;
    e >>= 1;
    if (e > 0) square = square * square;
  }
  return result;
}

template <typename Scalar>
Jet<Scalar> sqrt(const Jet<Scalar>& u) {
  return pow(u, Scalar(typename Jet<Scalar>::Real(0.5)));
}

/// Taylor expansion of outer(inner(w)) about inner's base point. The outer
/// jet must be centered at the inner jet's value.
template <typename Scalar>
Jet<Scalar> compose(const Jet<Scalar>& outer, const Jet<Scalar>& inner) {
  using Real = typename Jet<Scalar>::Real;
  if (outer.order() != inner.order())
    throw OrderMismatch("compose requires equal orders");
  const Real scale = Real(1) + std::abs(inner.value());
  if (std::abs(outer.base_point() - inner.value()) > Real(1e-12) * scale)
    throw BasePointMismatch("outer jet is not centered at the inner jet's value");
  const int order = inner.order();
  // Horner over the shifted inner jet (constant coefficient removed).
  typename Jet<Scalar>::Coeffs shifted_coeffs = inner.coeffs();
  shifted_coeffs[0] = Scalar(0);
  Jet<Scalar> shifted(inner.base_point(), std::move(shifted_coeffs));
  Jet<Scalar> acc = Jet<Scalar>::constant(outer[order], inner.base_point(), order);
  for (int k = order - 1; k >= 0; --k) acc = acc * shifted + outer[k];
  return acc;
}

using Complex = std::complex<double>;
using CJet = Jet<Complex>;

}  // namespace kappa
