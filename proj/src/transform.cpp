#include "kappa/transform.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace kappa {

void validate_affine(const AffineMap& map, int n) {
  if (map.A.rows() != n + 1 || map.A.cols() != n + 1)
    throw InvalidInput("affine map matrix must be (n+1) x (n+1)");
  if (map.b.size() != n + 1)
    throw InvalidInput("affine map vector must have n+1 entries");
  const double scale = map.A.cwiseAbs().maxCoeff();
  if (std::abs(map.A.determinant()) < 1e-12 * (1.0 + scale))
    throw InvalidInput("affine map is singular");
}

std::vector<CJet> transformed_lifting(std::span<const CJet> lifting,
                                      const AffineMap& map, int n) {
  validate_affine(map, n);
  if (static_cast<int>(lifting.size()) != n + 1)
    throw InvalidInput("lifting must have n+1 jets");
  const Complex a = lifting[0].base_point();
  const int order = lifting[0].order();

  std::vector<CJet> transformed;
  transformed.reserve(n + 1);
  double value_scale = 0.0;
  for (int i = 0; i <= n; ++i) {
    CJet acc = CJet::constant(map.b(i), a, order);
    for (int j = 0; j <= n; ++j) acc = acc + map.A(i, j) * lifting[j];
    value_scale = std::max(value_scale, std::abs(acc.value()));
    transformed.push_back(std::move(acc));
  }
  if (std::abs(transformed[0].value()) < 1e-12 * (1.0 + value_scale))
    throw ChartEscape("transformed first component vanishes at the point");
  return transformed;
}

std::vector<CJet> affine_lifting(std::span<const CJet> lifting, const AffineMap& map,
                                 int n) {
  std::vector<CJet> transformed = transformed_lifting(lifting, map, n);
  std::vector<CJet> renormalized;
  renormalized.reserve(n + 1);
  renormalized.push_back(
      CJet::constant(Complex(1.0, 0.0), lifting[0].base_point(), lifting[0].order()));
  for (int i = 1; i <= n; ++i) renormalized.push_back(transformed[i] / transformed[0]);
  return renormalized;
}

CurvatureResult apply_affine(const CurveSpec& spec, const AffineMap& map, Complex a) {
  const int n = spec.n;
  validate_affine(map, n);
  const std::vector<CJet> lifting = lift(spec, a, required_order(n));
  return kappa_from_lifting(transformed_lifting(lifting, map, n), n);
}

CJet change_jet(const CoordinateChange& cc, int order) {
  if (!cc.z_of_w) throw InvalidInput("coordinate change has no expression");
  CJet zw = eval_jet(*cc.z_of_w, cc.base_w, order);
  if (order >= 1) {
    const double scale = 1.0 + zw.coeffs().cwiseAbs().maxCoeff();
    if (std::abs(zw.derivative(1)) < 1e-12 * scale)
      throw CriticalReparameterization("z'(w) vanishes at the base point");
  }
  return zw;
}

CurvatureResult reparametrized_kappa(const CurveSpec& spec, const CoordinateChange& cc) {
  const int n = spec.n;
  const int order = required_order(n);
  const CJet zw = change_jet(cc, order);
  const Complex z0 = zw.value();

  std::vector<CJet> lifting;
  lifting.reserve(n + 1);
  lifting.push_back(CJet::constant(Complex(1.0, 0.0), cc.base_w, order));
  for (int j = 0; j < n; ++j) {
    CJet outer = eval_jet(*spec.components[j], z0, order);
    lifting.push_back(compose(outer, zw));
  }
  return kappa_from_lifting(lifting, n);
}

Complex transform_law_n1(Complex kappa0, const CJet& zw) {
  if (zw.order() < 3) throw InvalidInput("transform_law_n1 needs a jet of order >= 3");
  Complex sz;
  try {
    sz = schwarzian(zw);
  } catch (const CriticalPoint&) {
    throw CriticalReparameterization("z'(w) vanishes at the base point");
  }
  const Complex zp = zw.derivative(1);
  return zp * zp * kappa0 - 0.5 * sz;
}

Complex transform_law_n1(Complex kappa0, const CoordinateChange& cc) {
  return transform_law_n1(kappa0, change_jet(cc, 3));
}

std::pair<Complex, Complex> transform_law_n2(Complex kappa0, Complex kappa1,
                                             const CJet& zw) {
  if (zw.order() < 4) throw InvalidInput("transform_law_n2 needs a jet of order >= 4");
  const Complex zp = zw.derivative(1);
  const Complex zpp = zw.derivative(2);
  const double scale = 1.0 + zw.coeffs().cwiseAbs().maxCoeff();
  if (std::abs(zp) < 1e-12 * scale)
    throw CriticalReparameterization("z'(w) vanishes at the base point");

  // Schwarzian of the change as a jet, so its w-derivative is available.
  const int s_order = zw.order() - 3;
  const CJet d1 = zw.differentiated(1).truncated(s_order);
  const CJet d2 = zw.differentiated(2).truncated(s_order);
  const CJet d3 = zw.differentiated(3).truncated(s_order);
  const CJet ratio = d2 / d1;
  const CJet sz_jet = d3 / d1 - Complex(1.5, 0.0) * (ratio * ratio);
  const Complex sz = sz_jet.value();
  const Complex sz_prime = sz_jet.derivative(1);

  const Complex k0 = zp * zp * zp * kappa0 + zp * zpp * kappa1 - sz_prime;
  const Complex k1 = zp * zp * kappa1 - 2.0 * sz;
  return {k0, k1};
}

std::pair<Complex, Complex> transform_law_n2(Complex kappa0, Complex kappa1,
                                             const CoordinateChange& cc) {
  return transform_law_n2(kappa0, kappa1, change_jet(cc, 4));
}

SigmaTransformReport sigma_transform_check(const CJet& x, const CJet& y,
                                           const CoordinateChange& cc) {
  if (x.order() < 5 || y.order() < 5)
    throw InvalidInput("sigma_transform_check needs jets of order >= 5");
  const CJet zw = change_jet(cc, 5);

  SigmaTransformReport report;
  report.direct = sigma_table(compose(x, zw), compose(y, zw));

  const SigmaTable s = sigma_table(x, y);
  const Complex z1 = zw.derivative(1);
  const Complex z2 = zw.derivative(2);
  const Complex z3 = zw.derivative(3);
  const Complex z4 = zw.derivative(4);
  auto p = [](Complex v, int m) {
    Complex acc(1.0, 0.0);
    for (int i = 0; i < m; ++i) acc *= v;
    return acc;
  };
  SigmaTable& law = report.law;
  law.s12 = p(z1, 3) * s.s12;
  law.s13 = p(z1, 4) * s.s13 + 3.0 * p(z1, 2) * z2 * s.s12;
  law.s23 = p(z1, 5) * s.s23 + p(z1, 3) * z2 * s.s13 - p(z1, 2) * z3 * s.s12 +
            3.0 * z1 * p(z2, 2) * s.s12;
  law.s14 = p(z1, 5) * s.s14 + 6.0 * p(z1, 3) * z2 * s.s13 +
            4.0 * p(z1, 2) * z3 * s.s12 + 3.0 * z1 * p(z2, 2) * s.s12;
  law.s24 = p(z1, 6) * s.s24 + 6.0 * p(z1, 4) * z2 * s.s23 + p(z1, 4) * z2 * s.s14 +
            6.0 * p(z1, 2) * p(z2, 2) * s.s13 - p(z1, 2) * z4 * s.s12 +
            4.0 * z1 * z2 * z3 * s.s12 + 3.0 * p(z2, 3) * s.s12;
  law.s15 = p(z1, 6) * s.s15 + 10.0 * p(z1, 4) * z2 * s.s14 +
            10.0 * p(z1, 3) * z3 * s.s13 + 15.0 * p(z1, 2) * p(z2, 2) * s.s13 +
            5.0 * p(z1, 2) * z4 * s.s12 + 10.0 * z1 * z2 * z3 * s.s12;

  auto dev = [](Complex direct, Complex law_value) {
    return std::abs(direct - law_value) / (1.0 + std::abs(direct));
  };
  report.max_deviation = std::max({dev(report.direct.s12, law.s12),
                                   dev(report.direct.s13, law.s13),
                                   dev(report.direct.s23, law.s23),
                                   dev(report.direct.s14, law.s14),
                                   dev(report.direct.s24, law.s24),
                                   dev(report.direct.s15, law.s15)});
  return report;
}

}  // namespace kappa
