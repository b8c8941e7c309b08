#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "kappa/expr.hpp"
#include "kappa/jet.hpp"

namespace kappa {

using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

/// Jet order a curve lifting needs for the full pipeline at dimension n:
/// the Wronskian consumes derivatives through n, and lambda needs n+1
/// further derivative orders of the Wronskian jet.
int required_order(int n);

/// det[f f' ... f^(n)] as a jet of order n+1, computed by LU with partial
/// pivoting over jets (pivot on order-0 magnitude, ties to the lowest row).
/// Throws DegenerateCurve when the value at the point is below the
/// scale-relative threshold.
CJet wronskian_jet(std::span<const CJet> lifting, int n);

/// lambda = W^{-1/(n+1)}, principal branch.
CJet lambda_jet(const CJet& wronskian, int n);

/// Solves [f(a) f'(a) ... f^(n)(a)] g = f^(n+1)(a).
VectorXc solve_g(std::span<const CJet> lifting, int n);

/// The (n+1) x (n+2) matrix H with H(r,c) = binom(c,r) lambda^(c-r) for
/// c <= n and last column binom(n+1,r) lambda^(n+1-r) + lambda g_r.
MatrixXc build_H(const CJet& lambda, const VectorXc& g, int n);

/// Everything the curvature formulas consume at one point.
struct FrameData {
  int n = 0;
  Complex point{};
  CJet wronskian = CJet::constant(Complex(0), Complex(0), 0);
  CJet lambda = CJet::constant(Complex(0), Complex(0), 0);
  VectorXc g;              // g_0 ... g_n
  MatrixXc H;              // (n+1) x (n+2)
  MatrixXc frame_vectors;  // columns nu, e_1, ..., e_n
  VectorXc en_prime;       // e_n' = nu^(n+1)(a)
};

struct CurvatureResult {
  VectorXc kappas;          // kappa_0 ... kappa_{n-1}
  double frenet_residual = 0.0;
  double wronskian_magnitude = 0.0;
  double frame_scale = 0.0;  // 1 + max frame-column norm, for residual flagging
};

/// Builds the canonical frame from a lifting of order >= 2n+1. `gauge`
/// selects the (n+1)-th root of unity multiplying lambda; the curvatures
/// are independent of it.
FrameData build_frame(std::span<const CJet> lifting, int n, int gauge = 0);

/// kappa_j = (-1)^(n-j) det(H_j) det W with H_j = H minus column j.
VectorXc kappa_minors(const FrameData& fd);

/// Independent route: solve [nu e_1 ... e_n] c = e_n' by LU. Returns all
/// n+1 coefficients; the last one vanishes for a correctly built frame.
VectorXc frenet_solve(const FrameData& fd);

/// Euclidean norm of e_n' - sum_i kappa_i * (frame column i).
double frenet_residual(const FrameData& fd, const VectorXc& kappas);

CurvatureResult curvature_result(const FrameData& fd);

CurvatureResult kappa_from_lifting(std::span<const CJet> lifting, int n);

/// The full pipeline for a parsed curve at one point.
CurvatureResult kappa_general(const CurveSpec& spec, Complex a);

FrameData frame_at(const CurveSpec& spec, Complex a, int gauge = 0);

}  // namespace kappa
