#include "kappa/frame.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace kappa {

namespace {

double binomial(int n, int k) {
  double result = 1.0;
  for (int j = 1; j <= k; ++j) result = result * double(n - k + j) / double(j);
  return result;
}

void require_lifting(std::span<const CJet> lifting, int n) {
  if (n < 1) throw InvalidInput("projective dimension n must be >= 1");
  if (static_cast<int>(lifting.size()) != n + 1)
    throw InvalidInput("lifting must have n+1 = " + std::to_string(n + 1) + " jets");
  for (const CJet& jet : lifting) {
    if (jet.order() < required_order(n))
      throw InvalidInput("lifting jets must have order >= " +
                         std::to_string(required_order(n)));
  }
}

}  // namespace

int required_order(int n) {
  if (n < 1) throw InvalidInput("projective dimension n must be >= 1");
  return 2 * n + 1;
}

CJet wronskian_jet(std::span<const CJet> lifting, int n) {
  require_lifting(lifting, n);
  const int jet_order = n + 1;
  // mat[i][j] = j-th formal derivative of lifting[i], truncated to order n+1;
  // exact through that order since the lifting carries order 2n+1.
  std::vector<std::vector<CJet>> mat;
  mat.reserve(n + 1);
  double scale = 0.0;
  for (int i = 0; i <= n; ++i) {
    std::vector<CJet> row;
    row.reserve(n + 1);
    for (int j = 0; j <= n; ++j) {
      row.push_back(lifting[i].differentiated(j).truncated(jet_order));
      scale = std::max(scale, std::abs(row.back().value()));
    }
    mat.push_back(std::move(row));
  }
  const double degenerate_tol = 1e-10 * (1.0 + scale);

  // LU with partial pivoting over jets; pivot on order-0 magnitude.
  Complex det_sign(1.0, 0.0);
  CJet det = CJet::constant(Complex(1.0, 0.0), lifting[0].base_point(), jet_order);
  for (int col = 0; col <= n; ++col) {
    int pivot = col;
    double best = std::abs(mat[col][col].value());
    for (int row = col + 1; row <= n; ++row) {
      double mag = std::abs(mat[row][col].value());
      if (mag > best) {
        best = mag;
        pivot = row;
      }
    }
    if (best < degenerate_tol)
      throw DegenerateCurve("f, f', ..., f^(n) linearly dependent at the point");
    if (pivot != col) {
      std::swap(mat[pivot], mat[col]);
      det_sign = -det_sign;
    }
    try {
      for (int row = col + 1; row <= n; ++row) {
        CJet factor = mat[row][col] / mat[col][col];
        for (int j = col; j <= n; ++j) mat[row][j] = mat[row][j] - factor * mat[col][j];
      }
    } catch (const DivisionByZeroJet&) {
      throw DegenerateCurve("Wronskian pivot vanishes at the point");
    }
    det = det * mat[col][col];
  }
  det = det * det_sign;
  if (std::abs(det.value()) < degenerate_tol)
    throw DegenerateCurve("Wronskian below degeneracy threshold at the point");
  return det;
}

CJet lambda_jet(const CJet& wronskian, int n) {
  return pow(wronskian, Complex(-1.0 / double(n + 1), 0.0));
}

VectorXc solve_g(std::span<const CJet> lifting, int n) {
  require_lifting(lifting, n);
  MatrixXc m(n + 1, n + 1);
  VectorXc rhs(n + 1);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) m(i, j) = lifting[i].derivative(j);
    rhs(i) = lifting[i].derivative(n + 1);
  }
  Eigen::PartialPivLU<MatrixXc> lu(m);
  const double scale = m.cwiseAbs().maxCoeff();
  if (std::abs(lu.determinant()) < 1e-10 * (1.0 + scale))
    throw DegenerateCurve("derivative matrix singular at the point");
  return lu.solve(rhs);
}

MatrixXc build_H(const CJet& lambda, const VectorXc& g, int n) {
  if (lambda.order() < n + 1)
    throw InvalidInput("lambda jet must carry derivatives through order n+1");
  if (g.size() != n + 1) throw InvalidInput("g must have n+1 entries");
  MatrixXc H = MatrixXc::Zero(n + 1, n + 2);
  for (int r = 0; r <= n; ++r) {
    for (int c = r; c <= n; ++c)
      H(r, c) = binomial(c, r) * lambda.derivative(c - r);
    H(r, n + 1) = binomial(n + 1, r) * lambda.derivative(n + 1 - r) +
                  lambda.value() * g(r);
  }
  return H;
}

FrameData build_frame(std::span<const CJet> lifting, int n, int gauge) {
  require_lifting(lifting, n);
  FrameData fd;
  fd.n = n;
  fd.point = lifting[0].base_point();
  fd.wronskian = wronskian_jet(lifting, n);
  fd.lambda = lambda_jet(fd.wronskian, n);
  if (gauge % (n + 1) != 0) {
    const double angle = 2.0 * std::numbers::pi * double(gauge) / double(n + 1);
    fd.lambda = fd.lambda * Complex(std::cos(angle), std::sin(angle));
  }
  fd.g = solve_g(lifting, n);
  fd.H = build_H(fd.lambda, fd.g, n);

  // nu_i = lambda * f_i as jets of order n+1; columns of the frame are the
  // derivative values nu^(k)(a), and e_n' is nu^(n+1)(a).
  fd.frame_vectors = MatrixXc(n + 1, n + 1);
  fd.en_prime = VectorXc(n + 1);
  for (int i = 0; i <= n; ++i) {
    CJet nu_i = fd.lambda * lifting[i].truncated(n + 1);
    for (int k = 0; k <= n; ++k) fd.frame_vectors(i, k) = nu_i.derivative(k);
    fd.en_prime(i) = nu_i.derivative(n + 1);
  }
  return fd;
}

VectorXc kappa_minors(const FrameData& fd) {
  const int n = fd.n;
  VectorXc kappas(n);
  const Complex det_w = fd.wronskian.value();
  for (int j = 0; j < n; ++j) {
    MatrixXc hj(n + 1, n + 1);
    int out = 0;
    for (int c = 0; c <= n + 1; ++c) {
      if (c == j) continue;
      hj.col(out++) = fd.H.col(c);
    }
    const double sign = ((n - j) % 2 == 0) ? 1.0 : -1.0;
    kappas(j) = sign * hj.determinant() * det_w;
  }
  return kappas;
}

VectorXc frenet_solve(const FrameData& fd) {
  return fd.frame_vectors.partialPivLu().solve(fd.en_prime);
}

double frenet_residual(const FrameData& fd, const VectorXc& kappas) {
  if (kappas.size() != fd.n) throw InvalidInput("kappas must have n entries");
  VectorXc r = fd.en_prime;
  for (int j = 0; j < fd.n; ++j) r -= kappas(j) * fd.frame_vectors.col(j);
  return r.norm();
}

CurvatureResult curvature_result(const FrameData& fd) {
  CurvatureResult result;
  result.kappas = kappa_minors(fd);
  result.frenet_residual = frenet_residual(fd, result.kappas);
  result.wronskian_magnitude = std::abs(fd.wronskian.value());
  double max_col = 0.0;
  for (int k = 0; k <= fd.n; ++k)
    max_col = std::max(max_col, fd.frame_vectors.col(k).norm());
  result.frame_scale = 1.0 + max_col;
  return result;
}

CurvatureResult kappa_from_lifting(std::span<const CJet> lifting, int n) {
  return curvature_result(build_frame(lifting, n));
}

CurvatureResult kappa_general(const CurveSpec& spec, Complex a) {
  std::vector<CJet> lifting = lift(spec, a, required_order(spec.n));
  return kappa_from_lifting(lifting, spec.n);
}

FrameData frame_at(const CurveSpec& spec, Complex a, int gauge) {
  std::vector<CJet> lifting = lift(spec, a, required_order(spec.n));
  return build_frame(lifting, spec.n, gauge);
}

}  // namespace kappa
