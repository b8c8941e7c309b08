#pragma once

#include <utility>

#include "kappa/frame.hpp"
#include "kappa/lowdim.hpp"

namespace kappa {

/// Affine nonsingular map of C^{n+1} acting on liftings: f -> A f + b.
struct AffineMap {
  MatrixXc A;
  VectorXc b;
};

/// Validates shape and |det A| away from zero for dimension n.
void validate_affine(const AffineMap& map, int n);

/// Curvatures of the transformed curve A f + b. Throws ChartEscape when the
/// new first component vanishes at the point (the image leaves the chart).
/// The curvatures are computed from the transformed lifting itself; by
/// lifting equivalence they equal those of the renormalized chart curve,
/// without the conditioning loss of dividing by a small first component.
CurvatureResult apply_affine(const CurveSpec& spec, const AffineMap& map, Complex a);

/// A f + b applied to a lifting, with the chart check. Not renormalized.
std::vector<CJet> transformed_lifting(std::span<const CJet> lifting,
                                      const AffineMap& map, int n);

/// The renormalized chart lifting (1, x~_1, ..., x~_n) of the transformed
/// curve (divides by the first component).
std::vector<CJet> affine_lifting(std::span<const CJet> lifting, const AffineMap& map,
                                 int n);

/// Analytic reparameterization z = z(w) of the curve domain, evaluated
/// around base_w. The expression uses the letter z for its variable w.
struct CoordinateChange {
  ExprPtr z_of_w;
  Complex base_w{};
};

/// Jet of z(w) at base_w; throws CriticalReparameterization when z'(base_w) ~ 0.
CJet change_jet(const CoordinateChange& cc, int order);

/// Curvatures of the reparameterized curve x(z(w)) at base_w, computed
/// directly by jet composition plus the general pipeline.
CurvatureResult reparametrized_kappa(const CurveSpec& spec, const CoordinateChange& cc);

/// n=1 law: kappa~_0 = z'^2 kappa_0 - (1/2) S z.
Complex transform_law_n1(Complex kappa0, const CJet& zw);
Complex transform_law_n1(Complex kappa0, const CoordinateChange& cc);

/// n=2 law: kappa~_0 = z'^3 kappa_0 + z' z'' kappa_1 - (S z)',
///          kappa~_1 = z'^2 kappa_1 - 2 S z.
/// The derivative in the kappa~_0 rule is with respect to w; `zw` must have
/// order >= 4.
std::pair<Complex, Complex> transform_law_n2(Complex kappa0, Complex kappa1,
                                             const CJet& zw);
std::pair<Complex, Complex> transform_law_n2(Complex kappa0, Complex kappa1,
                                             const CoordinateChange& cc);

/// Verifies the six sigma~ transformation identities: computes each entry
/// directly from composed jets and from the identity, and reports the
/// largest deviation. `x`, `y` must be centered at z(base_w), order >= 5.
struct SigmaTransformReport {
  SigmaTable direct;
  SigmaTable law;
  double max_deviation = 0.0;  // max |direct - law| / (1 + |direct|)
};

SigmaTransformReport sigma_transform_check(const CJet& x, const CJet& y,
                                           const CoordinateChange& cc);

}  // namespace kappa
