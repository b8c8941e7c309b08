#pragma once

#include <span>
#include <utility>

#include "kappa/jet.hpp"

namespace kappa {

/// Schwarzian derivative S u = u'''/u' - (3/2)(u''/u')^2 at the base point.
/// Needs order >= 3; throws CriticalPoint when u' ~ 0.
Complex schwarzian(const CJet& u);

/// kappa_0 for a curve in CP^1 given by x(z): exactly -1/2 * schwarzian(x).
Complex kappa0_n1(const CJet& x);

/// The sigma_ij = x^(i) y^(j) - x^(j) y^(i) minors entering the n=2 closed
/// forms. Antisymmetric by construction.
struct SigmaTable {
  Complex s12, s13, s23, s14, s24, s15;
};

/// All six entries from jets of order >= 5.
SigmaTable sigma_table(const CJet& x, const CJet& y);

/// Closed-form (kappa_0, kappa_1) for a curve (x(z), y(z)) in CP^2.
/// Throws DegenerateCurve when sigma_12 ~ 0.
std::pair<Complex, Complex> kappa_n2(const CJet& x, const CJet& y);

/// Same values through the intermediate identities
/// kappa_1 = 3 lambda''/lambda + g_1 and
/// kappa_0 = -(lambda'/lambda) kappa_1 + lambda'''/lambda,
/// with lambda = sigma_12^{-1/3} built as a jet.
std::pair<Complex, Complex> kappa_n2_lambda_form(const CJet& x, const CJet& y);

/// Both sides of S(f o g) = Sf(g) g'^2 + Sg for numeric verification.
struct CompositionCheck {
  Complex composed;   // S(f o g) at g's base point
  Complex chain_rule; // Sf(g(a)) g'(a)^2 + Sg(a)
};

/// `outer` must be centered at inner's value; orders >= 3.
CompositionCheck schwarzian_composition(const CJet& outer, const CJet& inner);

/// True iff S P < 0 at every sample. P is a real polynomial given by
/// ascending coefficients; callers must ensure P' has distinct real roots
/// and the samples avoid them. Degree < 2 is rejected.
bool polynomial_schwarzian_sign(std::span<const double> coefficients,
                                std::span<const double> samples);

}  // namespace kappa
