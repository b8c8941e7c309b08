#include <doctest.h>

#include <vector>

#include "kappa/frame.hpp"
#include "test_support.hpp"

using namespace kappa;
using kappa_test::close;
using kappa_test::Rng;

namespace {

const CurveSpec& circle() {
  static CurveSpec spec = make_curve(2, {"cos(z)", "sin(z)"});
  return spec;
}

const CurveSpec& paper_n3() {
  static CurveSpec spec = make_curve(3, {"z^2/2", "cos(z)", "sin(z)"});
  return spec;
}

const CurveSpec& poly_n2() {
  static CurveSpec spec = make_curve(2, {"z", "z^2/2"});
  return spec;
}

std::vector<CJet> scaled_lifting(const CurveSpec& spec, const ExprPtr& mu, Complex a) {
  const int order = required_order(spec.n);
  std::vector<CJet> lifting = lift(spec, a, order);
  const CJet mu_jet = eval_jet(*mu, a, order);
  for (CJet& jet : lifting) jet = mu_jet * jet;
  return lifting;
}

}  // namespace

TEST_CASE("required_order") {
  CHECK(required_order(1) == 3);
  CHECK(required_order(2) == 5);
  CHECK(required_order(3) == 7);
  CHECK_THROWS_AS(required_order(0), InvalidInput);
}

TEST_CASE("wronskian_jet") {
  SUBCASE("circle has Wronskian 1") {
    auto lifting = lift(circle(), Complex(0.3, 0), 5);
    CJet w = wronskian_jet(lifting, 2);
    CHECK(close(w.value(), Complex(1, 0), 1e-12));
    for (int k = 1; k <= 3; ++k) CHECK(close(w[k], Complex(0, 0), 1e-12));
  }

  SUBCASE("paper n=3 curve has Wronskian z") {
    auto lifting = lift(paper_n3(), Complex(1, 0), 7);
    CJet w = wronskian_jet(lifting, 3);
    CHECK(close(w.value(), Complex(1, 0), 1e-12));
    CHECK(close(w.derivative(1), Complex(1, 0), 1e-11));
    CHECK(close(w.derivative(2), Complex(0, 0), 1e-10));
  }

  SUBCASE("(1, z, z^2/2) has constant Wronskian 1") {
    Rng rng(41);
    for (int t = 0; t < 5; ++t) {
      auto lifting = lift(poly_n2(), rng.complex_box(1.0), 5);
      CJet w = wronskian_jet(lifting, 2);
      CHECK(close(w.value(), Complex(1, 0), 1e-13));
      for (int k = 1; k <= 3; ++k) CHECK(close(w[k], Complex(0, 0), 1e-13));
    }
  }

  SUBCASE("degenerate curve throws") {
    CurveSpec bad = make_curve(2, {"z", "z"});
    auto lifting = lift(bad, Complex(1, 0), 5);
    CHECK_THROWS_AS(wronskian_jet(lifting, 2), DegenerateCurve);
  }

  SUBCASE("n=3 curve is degenerate at the origin") {
    auto lifting = lift(paper_n3(), Complex(0, 0), 7);
    CHECK_THROWS_AS(wronskian_jet(lifting, 3), DegenerateCurve);
  }
}

TEST_CASE("lambda_jet") {
  SUBCASE("n=3 example: lambda = z^(-1/4) at 1") {
    auto lifting = lift(paper_n3(), Complex(1, 0), 7);
    CJet lambda = lambda_jet(wronskian_jet(lifting, 3), 3);
    CHECK(close(lambda.value(), Complex(1, 0), 1e-11));
    CHECK(close(lambda.derivative(1), Complex(-0.25, 0), 1e-11));
    CHECK(close(lambda.derivative(2), Complex(5.0 / 16.0, 0), 1e-10));
  }

  SUBCASE("circle: lambda = 1 with vanishing derivatives") {
    auto lifting = lift(circle(), Complex(0.7, -0.2), 5);
    CJet lambda = lambda_jet(wronskian_jet(lifting, 2), 2);
    CHECK(close(lambda.value(), Complex(1, 0), 1e-12));
    for (int k = 1; k <= 3; ++k) CHECK(close(lambda[k], Complex(0, 0), 1e-11));
  }

  SUBCASE("constant Wronskian 16, n=1") {
    CJet w = CJet::constant(Complex(16, 0), Complex(0, 0), 2);
    CJet lambda = lambda_jet(w, 1);
    CHECK(close(lambda.value(), Complex(0.25, 0), 1e-14));
  }
}

TEST_CASE("solve_g") {
  SUBCASE("n=3 example at z=2: g = (0, 1/2, -1, 1/2)") {
    auto lifting = lift(paper_n3(), Complex(2, 0), 7);
    VectorXc g = solve_g(lifting, 3);
    CHECK(close(g(0), Complex(0, 0), 1e-12));
    CHECK(close(g(1), Complex(0.5, 0), 1e-12));
    CHECK(close(g(2), Complex(-1, 0), 1e-12));
    CHECK(close(g(3), Complex(0.5, 0), 1e-12));
  }

  SUBCASE("circle: g = (0, -1, 0)") {
    auto lifting = lift(circle(), Complex(0.4, 0.1), 5);
    VectorXc g = solve_g(lifting, 2);
    CHECK(close(g(0), Complex(0, 0), 1e-12));
    CHECK(close(g(1), Complex(-1, 0), 1e-12));
    CHECK(close(g(2), Complex(0, 0), 1e-12));
  }

  SUBCASE("(1, z, z^2/2): g = 0") {
    auto lifting = lift(poly_n2(), Complex(0.9, 0), 5);
    VectorXc g = solve_g(lifting, 2);
    for (int i = 0; i < 3; ++i) CHECK(close(g(i), Complex(0, 0), 1e-13));
  }
}

TEST_CASE("build_H") {
  SUBCASE("n=1 identity-like case") {
    CJet lambda = CJet::constant(Complex(1, 0), Complex(0, 0), 2);
    VectorXc g = VectorXc::Zero(2);
    MatrixXc H = build_H(lambda, g, 1);
    REQUIRE(H.rows() == 2);
    REQUIRE(H.cols() == 3);
    CHECK(H(0, 0) == Complex(1, 0));
    CHECK(H(0, 1) == Complex(0, 0));
    CHECK(H(0, 2) == Complex(0, 0));
    CHECK(H(1, 0) == Complex(0, 0));
    CHECK(H(1, 1) == Complex(1, 0));
    CHECK(H(1, 2) == Complex(0, 0));
  }

  SUBCASE("n=2 circle: last column is (0, -1, 0)") {
    auto lifting = lift(circle(), Complex(0.2, 0), 5);
    CJet lambda = lambda_jet(wronskian_jet(lifting, 2), 2);
    VectorXc g = solve_g(lifting, 2);
    MatrixXc H = build_H(lambda, g, 2);
    CHECK(close(H(0, 3), Complex(0, 0), 1e-11));
    CHECK(close(H(1, 3), Complex(-1, 0), 1e-11));
    CHECK(close(H(2, 3), Complex(0, 0), 1e-11));
  }

  SUBCASE("n=1 matches the lambda = (x')^(-1/2) display") {
    // x = e^z at a generic point
    CurveSpec spec = make_curve(1, {"exp(z)"});
    const Complex a(0.3, 0.4);
    auto lifting = lift(spec, a, 3);
    CJet lambda = lambda_jet(wronskian_jet(lifting, 1), 1);
    VectorXc g = solve_g(lifting, 1);
    MatrixXc H = build_H(lambda, g, 1);

    const CJet x = lifting[1];
    const Complex x1 = x.derivative(1), x2 = x.derivative(2), x3 = x.derivative(3);
    const Complex l0 = std::pow(x1, Complex(-0.5, 0));
    const Complex l1 = -0.5 * std::pow(x1, Complex(-1.5, 0)) * x2;
    const Complex l2 = 0.75 * std::pow(x1, Complex(-2.5, 0)) * x2 * x2 -
                       0.5 * std::pow(x1, Complex(-1.5, 0)) * x3;
    CHECK(close(g(0), Complex(0, 0), 1e-12));
    CHECK(close(g(1), x2 / x1, 1e-12));
    CHECK(close(H(0, 0), l0, 1e-12));
    CHECK(close(H(0, 1), l1, 1e-12));
    CHECK(close(H(1, 1), l0, 1e-12));
    CHECK(close(H(0, 2), l2 + l0 * g(0), 1e-12));
    CHECK(close(H(1, 2), 2.0 * l1 + l0 * g(1), 1e-12));
  }
}

TEST_CASE("frame invariants") {
  Rng rng(43);
  const CurveSpec* curves[] = {&circle(), &paper_n3(), &poly_n2()};
  for (const CurveSpec* spec : curves) {
    for (int t = 0; t < 5; ++t) {
      const Complex a = rng.complex_box(0.5) + Complex(1.2, 0);
      const FrameData fd = frame_at(*spec, a);
      // unit determinant of the canonical frame
      CHECK(std::abs(fd.frame_vectors.determinant() - Complex(1, 0)) <= 1e-8);
      // g_0 vanishes for leading-1 liftings
      CHECK(std::abs(fd.g(0)) <= 1e-10);
      // lambda^{n+1} W = 1
      Complex lambda_power(1, 0);
      for (int k = 0; k <= fd.n; ++k) lambda_power *= fd.lambda.value();
      CHECK(close(lambda_power * fd.wronskian.value(), Complex(1, 0), 1e-10));
    }
  }
}

TEST_CASE("kappa_general on the paper examples") {
  SUBCASE("circle: kappa = (0, -1) anywhere") {
    Rng rng(47);
    for (int t = 0; t < 10; ++t) {
      CurvatureResult r = kappa_general(circle(), rng.complex_box(1.0));
      REQUIRE(r.kappas.size() == 2);
      CHECK(close(r.kappas(0), Complex(0, 0), 1e-10));
      CHECK(close(r.kappas(1), Complex(-1, 0), 1e-10));
      CHECK(r.frenet_residual <= 1e-10 * (1.0 + r.frame_scale));
    }
  }

  SUBCASE("n=3 paper curve against the general-method values") {
    // kappa_0 = 7(16 z^2 + 45)/(256 z^4); the thesis' printed example value
    // disagrees (see docs/discrepancies.md). kappa_1, kappa_2 as printed.
    struct Expected {
      Complex z, k0, k1, k2;
    };
    const Expected table[] = {
        {Complex(1, 0), Complex(1.66796875, 0), Complex(-1.375, 0), Complex(0.875, 0)},
        {Complex(2, 0), Complex(0.186279296875, 0), Complex(0.015625, 0),
         Complex(-0.53125, 0)},
        {Complex(1, 1), Complex(-0.3076171875, -0.21875), Complex(0.71875, 0.21875),
         Complex(-1.0, -0.9375)},
    };
    for (const Expected& e : table) {
      CurvatureResult r = kappa_general(paper_n3(), e.z);
      REQUIRE(r.kappas.size() == 3);
      CHECK(close(r.kappas(0), e.k0, 1e-10));
      CHECK(close(r.kappas(1), e.k1, 1e-10));
      CHECK(close(r.kappas(2), e.k2, 1e-10));
      CHECK(r.frenet_residual <= 1e-9 * r.frame_scale);
    }
  }

  SUBCASE("polynomial curve of degree <= n has vanishing curvatures") {
    CurvatureResult r = kappa_general(poly_n2(), Complex(0.6, -0.3));
    CHECK(close(r.kappas(0), Complex(0, 0), 1e-12));
    CHECK(close(r.kappas(1), Complex(0, 0), 1e-12));
  }

  SUBCASE("(e^z, e^{2z}): kappa = (0, 1)") {
    CurveSpec spec = make_curve(2, {"exp(z)", "exp(2*z)"});
    Rng rng(53);
    for (int t = 0; t < 5; ++t) {
      CurvatureResult r = kappa_general(spec, rng.complex_box(0.8));
      CHECK(close(r.kappas(0), Complex(0, 0), 1e-10));
      CHECK(close(r.kappas(1), Complex(1, 0), 1e-10));
    }
  }
}

TEST_CASE("frenet residual responds to perturbed curvatures") {
  const FrameData fd = frame_at(circle(), Complex(0.25, 0.1));
  const CurvatureResult r = curvature_result(fd);
  CHECK(r.frenet_residual <= 1e-10);

  VectorXc perturbed = r.kappas;
  perturbed(0) += Complex(0.1, 0);
  const double nu_norm = fd.frame_vectors.col(0).norm();
  CHECK(frenet_residual(fd, perturbed) >= 0.09 * nu_norm);

  VectorXc zero_kappas = VectorXc::Zero(2);
  const FrameData poly_fd = frame_at(poly_n2(), Complex(0.3, 0));
  CHECK(frenet_residual(poly_fd, zero_kappas) <= 1e-12);
}

TEST_CASE("gauge invariance under the root-of-unity choice") {
  Rng rng(59);
  const CurveSpec* curves[] = {&circle(), &paper_n3()};
  for (const CurveSpec* spec : curves) {
    for (int gauge = 1; gauge <= spec->n; ++gauge) {
      const Complex a = rng.complex_box(0.3) + Complex(1.1, 0.2);
      const FrameData base = frame_at(*spec, a, 0);
      const FrameData rotated = frame_at(*spec, a, gauge);
      const VectorXc k0 = kappa_minors(base);
      const VectorXc k1 = kappa_minors(rotated);
      for (int j = 0; j < spec->n; ++j)
        CHECK(kappa_test::deviation(k1(j), k0(j)) <= 1e-10);
      // the frame itself rotates but its determinant stays 1
      CHECK(std::abs(rotated.frame_vectors.determinant() - Complex(1, 0)) <= 1e-8);
    }
  }
}

TEST_CASE("lifting equivalence: mu-scaled liftings give the same curvatures") {
  Rng rng(61);
  const char* scalings[] = {"exp(z/2)", "1 + z^2/4", "2 + sin(z)/3"};
  const CurveSpec* curves[] = {&circle(), &paper_n3()};
  for (const CurveSpec* spec : curves) {
    for (const char* mu_src : scalings) {
      ExprPtr mu = parse(mu_src);
      for (int t = 0; t < 3; ++t) {
        const Complex a = rng.complex_box(0.4) + Complex(1.0, 0);
        const CurvatureResult plain = kappa_general(*spec, a);
        const CurvatureResult scaled =
            kappa_from_lifting(scaled_lifting(*spec, mu, a), spec->n);
        for (int j = 0; j < spec->n; ++j)
          CHECK(kappa_test::deviation(scaled.kappas(j), plain.kappas(j)) <= 1e-8);
      }
    }
  }
}

TEST_CASE("derivative of the Wronskian matches det[f f' ... f^(n-1) f^(n+1)]") {
  Rng rng(67);
  const CurveSpec* curves[] = {&circle(), &paper_n3()};
  for (const CurveSpec* spec : curves) {
    const int n = spec->n;
    for (int t = 0; t < 5; ++t) {
      const Complex a = rng.complex_box(0.4) + Complex(1.3, -0.1);
      auto lifting = lift(*spec, a, required_order(n));
      const CJet w = wronskian_jet(lifting, n);

      MatrixXc m(n + 1, n + 1);
      for (int i = 0; i <= n; ++i) {
        for (int j = 0; j < n; ++j) m(i, j) = lifting[i].derivative(j);
        m(i, n) = lifting[i].derivative(n + 1);
      }
      CHECK(kappa_test::deviation(w.derivative(1), m.determinant()) <= 1e-9);
    }
  }
}

TEST_CASE("prescribed constant curvatures round trip") {
  Rng rng(71);

  SUBCASE("n=1: kappa_0 = mu^2 from x = exp(2 mu z)") {
    for (int t = 0; t < 8; ++t) {
      const Complex mu = rng.complex_ring(0.4, 1.0);
      const Complex target = mu * mu;
      CurveSpec spec;
      spec.n = 1;
      spec.components = {make_call(
          Function::Exp, make_binary(ExprKind::Mul, make_number(2.0 * mu), make_variable()))};
      const CurvatureResult r = kappa_general(spec, rng.complex_box(0.3));
      CHECK(kappa_test::deviation(r.kappas(0), target) <= 1e-7);
    }
  }

  SUBCASE("n=2: centered spectra (r0, r1, -r0-r1)") {
    for (int t = 0; t < 8; ++t) {
      const Complex r0 = rng.complex_ring(0.5, 1.0);
      const Complex r1 = rng.complex_ring(0.5, 1.0) + Complex(1.5, 0);
      const Complex r2 = -r0 - r1;
      const Complex kappa1 = -(r0 * r1 + r0 * r2 + r1 * r2);
      const Complex kappa0 = r0 * r1 * r2;
      CurveSpec spec;
      spec.n = 2;
      spec.components = {
          make_call(Function::Exp,
                    make_binary(ExprKind::Mul, make_number(r1 - r0), make_variable())),
          make_call(Function::Exp,
                    make_binary(ExprKind::Mul, make_number(r2 - r0), make_variable()))};
      const CurvatureResult r = kappa_general(spec, rng.complex_box(0.3));
      CHECK(kappa_test::deviation(r.kappas(0), kappa0) <= 1e-7);
      CHECK(kappa_test::deviation(r.kappas(1), kappa1) <= 1e-7);
    }
  }
}

TEST_CASE("Cramer route agrees with the H_j minor formula") {
  Rng rng(73);
  const CurveSpec* curves[] = {&circle(), &paper_n3(), &poly_n2()};
  for (const CurveSpec* spec : curves) {
    for (int t = 0; t < 5; ++t) {
      const Complex a = rng.complex_box(0.4) + Complex(1.2, 0.1);
      const FrameData fd = frame_at(*spec, a);
      const VectorXc minors = kappa_minors(fd);
      const VectorXc solved = frenet_solve(fd);
      for (int j = 0; j < spec->n; ++j)
        CHECK(kappa_test::deviation(solved(j), minors(j)) <= 1e-9);
      CHECK(std::abs(solved(spec->n)) <= 1e-9 * (1.0 + solved.norm()));
    }
  }
}
