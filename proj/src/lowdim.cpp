#include "kappa/lowdim.hpp"

#include <algorithm>
#include <cmath>

namespace kappa {

namespace {

double derivative_scale(const CJet& u, int through) {
  double scale = 0.0;
  for (int k = 0; k <= through; ++k) scale = std::max(scale, std::abs(u.derivative(k)));
  return scale;
}

void require_order(const CJet& u, int order, const char* who) {
  if (u.order() < order)
    throw InvalidInput(std::string(who) + " needs a jet of order >= " + std::to_string(order));
}

}  // namespace

Complex schwarzian(const CJet& u) {
  require_order(u, 3, "schwarzian");
  const Complex u1 = u.derivative(1);
  const Complex u2 = u.derivative(2);
  const Complex u3 = u.derivative(3);
  const double scale = 1.0 + std::max(std::abs(u2), std::abs(u3));
  if (std::abs(u1) < 1e-12 * scale)
    throw CriticalPoint("schwarzian at a critical point (u' ~ 0)");
  const Complex ratio = u2 / u1;
  return u3 / u1 - 1.5 * ratio * ratio;
}

Complex kappa0_n1(const CJet& x) {
  return -0.5 * schwarzian(x);
}

SigmaTable sigma_table(const CJet& x, const CJet& y) {
  require_order(x, 5, "sigma_table");
  require_order(y, 5, "sigma_table");
  detail::require_compatible(x, y);
  auto sigma = [&](int i, int j) {
    return x.derivative(i) * y.derivative(j) - x.derivative(j) * y.derivative(i);
  };
  SigmaTable t;
  t.s12 = sigma(1, 2);
  t.s13 = sigma(1, 3);
  t.s23 = sigma(2, 3);
  t.s14 = sigma(1, 4);
  t.s24 = sigma(2, 4);
  t.s15 = sigma(1, 5);
  return t;
}

namespace {

void require_sigma12(const SigmaTable& t, const CJet& x, const CJet& y) {
  const double scale = 1.0 + derivative_scale(x, 5) * derivative_scale(y, 5);
  if (std::abs(t.s12) < 1e-12 * scale)
    throw DegenerateCurve("sigma_12 vanishes at the point");
}

}  // namespace

std::pair<Complex, Complex> kappa_n2(const CJet& x, const CJet& y) {
  const SigmaTable t = sigma_table(x, y);
  require_sigma12(t, x, y);
  const Complex r13 = t.s13 / t.s12;
  const Complex kappa1 = (4.0 / 3.0) * r13 * r13 - (t.s14 + 2.0 * t.s23) / t.s12;
  const Complex kappa0 = -(16.0 / 27.0) * r13 * r13 * r13 +
                         (1.0 / 3.0) * t.s13 * (3.0 * t.s14 + 2.0 * t.s23) / (t.s12 * t.s12) -
                         (1.0 / 3.0) * (t.s15 + 2.0 * t.s24) / t.s12;
  return {kappa0, kappa1};
}

std::pair<Complex, Complex> kappa_n2_lambda_form(const CJet& x, const CJet& y) {
  const SigmaTable t = sigma_table(x, y);
  require_sigma12(t, x, y);
  // sigma_12 as a jet of order 3 (x', y'' etc. are exact through order 3
  // given inputs of order >= 5), then lambda = sigma_12^{-1/3}.
  const CJet x1 = x.differentiated(1).truncated(3);
  const CJet x2 = x.differentiated(2).truncated(3);
  const CJet y1 = y.differentiated(1).truncated(3);
  const CJet y2 = y.differentiated(2).truncated(3);
  const CJet sigma12 = x1 * y2 - x2 * y1;
  CJet lambda = CJet::constant(Complex(0), x.base_point(), 0);
  try {
    lambda = pow(sigma12, Complex(-1.0 / 3.0, 0.0));
  } catch (const DivisionByZeroJet&) {
    throw DegenerateCurve("sigma_12 vanishes at the point");
  }
  const Complex l0 = lambda.value();
  const Complex g1 = -t.s23 / t.s12;
  const Complex kappa1 = 3.0 * lambda.derivative(2) / l0 + g1;
  const Complex kappa0 =
      -(lambda.derivative(1) / l0) * kappa1 + lambda.derivative(3) / l0;
  return {kappa0, kappa1};
}

CompositionCheck schwarzian_composition(const CJet& outer, const CJet& inner) {
  require_order(outer, 3, "schwarzian_composition");
  require_order(inner, 3, "schwarzian_composition");
  CompositionCheck check;
  check.composed = schwarzian(compose(outer, inner));
  const Complex g1 = inner.derivative(1);
  check.chain_rule = schwarzian(outer) * g1 * g1 + schwarzian(inner);
  return check;
}

bool polynomial_schwarzian_sign(std::span<const double> coefficients,
                                std::span<const double> samples) {
  const int degree = static_cast<int>(coefficients.size()) - 1;
  if (degree < 2)
    throw InvalidInput("polynomial_schwarzian_sign needs degree >= 2 (P' must have roots)");
  bool all_negative = true;
  for (double x : samples) {
    // Horner over jets, real arithmetic embedded in the complex scalar.
    CJet acc = CJet::constant(Complex(coefficients[degree], 0.0), Complex(x, 0.0), 3);
    const CJet zvar = CJet::variable(Complex(x, 0.0), 3);
    for (int k = degree - 1; k >= 0; --k)
      acc = acc * zvar + Complex(coefficients[k], 0.0);
    const Complex s = schwarzian(acc);
    if (s.real() >= 0.0) all_negative = false;
  }
  return all_negative;
}

}  // namespace kappa
