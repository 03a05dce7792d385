#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "weylstar/linalg.hpp"

using namespace weylstar;

namespace {

CMatrix sample_matrix() {
  return CMatrix{{cplx(0.3, 0.1), cplx(-0.2, 0.4), cplx(0.1, 0.0)},
                 {cplx(0.5, -0.3), cplx(0.2, 0.2), cplx(-0.4, 0.1)},
                 {cplx(0.0, 0.6), cplx(0.3, -0.1), cplx(-0.1, -0.2)}};
}

// Truncated power series, independent of the scaling used by mat_exp.
CosSin series_cos_sin(const CMatrix& X, int terms = 60) {
  const std::size_t n = X.dim();
  CMatrix c = CMatrix::zero(n), s = CMatrix::zero(n), term = CMatrix::identity(n);
  for (int k = 0; k < terms; ++k) {
    if (k > 0) term = term * X * (1.0 / k);
    switch (k % 4) {
      case 0: c += term; break;
      case 1: s += term; break;
      case 2: c -= term; break;
      case 3: s -= term; break;
    }
  }
  return {c, s};
}

}  // namespace

TEST(Linalg, DeterminantAndInverse) {
  const CMatrix M = sample_matrix();
  const DetInv di = det_inv(M);
  EXPECT_LT(rel_diff(M * di.inverse, CMatrix::identity(3)), 1e-14);
  // Cofactor expansion of the 3x3 determinant.
  const cplx d = M(0, 0) * (M(1, 1) * M(2, 2) - M(1, 2) * M(2, 1)) - M(0, 1) * (M(1, 0) * M(2, 2) - M(1, 2) * M(2, 0)) +
                 M(0, 2) * (M(1, 0) * M(2, 1) - M(1, 1) * M(2, 0));
  EXPECT_LT(std::abs(di.det - d), 1e-15);
}

TEST(Linalg, SingularMatrixRaises) {
  const CMatrix M{{1.0, 2.0}, {2.0, 4.0}};
  EXPECT_THROW(det_inv(M), Error);
  try {
    det_inv(M);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Singular);
  }
}

TEST(Linalg, ExponentialOfDiagonal) {
  const CMatrix D = CMatrix::diag({cplx(1.0, 0.5), cplx(-2.0, 0.0), cplx(0.0, 3.0)});
  const CMatrix E = mat_exp(D);
  EXPECT_LT(std::abs(E(0, 0) - std::exp(cplx(1.0, 0.5))), 1e-13);
  EXPECT_LT(std::abs(E(1, 1) - std::exp(-2.0)), 1e-15);
  EXPECT_LT(std::abs(E(2, 2) - std::exp(cplx(0.0, 3.0))), 1e-13);
  EXPECT_LT(std::abs(E(0, 1)), 1e-16);
}

TEST(Linalg, TrigMatchesPowerSeries) {
  for (double scale : {0.1, 1.0, 2.5}) {
    const CMatrix X = sample_matrix() * scale;
    const CosSin a = mat_cos_sin(X);
    const CosSin b = series_cos_sin(X);
    EXPECT_LT(rel_diff(a.cos, b.cos), 1e-12) << scale;
    EXPECT_LT(rel_diff(a.sin, b.sin), 1e-12) << scale;
    // cos^2 + sin^2 = I for commuting functions of X.
    EXPECT_LT(rel_diff(a.cos * a.cos + a.sin * a.sin, CMatrix::identity(3)), 1e-12) << scale;
  }
}

TEST(Linalg, TanIsSinTimesInverseCos) {
  const CMatrix X = sample_matrix();
  const Trig t = mat_trig(X);
  EXPECT_LT(rel_diff(t.tan * t.cos, t.sin), 1e-13);
}

TEST(Linalg, TrigSingularAtHalfPi) {
  const CMatrix X = CMatrix::identity(2) * (std::numbers::pi / 2);
  try {
    mat_trig(X);
    FAIL() << "expected SingularCos";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularCos);
  }
}

TEST(Linalg, SymplecticFormSquaresToMinusIdentity) {
  for (std::size_t m = 1; m <= 3; ++m) {
    const CMatrix J = symplectic_J(m);
    EXPECT_EQ(J * J, CMatrix::identity(2 * m) * -1.0);
    EXPECT_EQ(J.transpose(), J * -1.0);
  }
}

TEST(Linalg, SqrtLoopAroundZeroFlipsSign) {
  // sqrt(e^{i s 2 pi}) continued over s in [0, 1] ends at -1.
  auto f = [](double s) { return std::exp(cplx(0.0, 2.0 * std::numbers::pi * s)); };
  const SqrtTrack tr = continue_sqrt(f, 1.0, ErrorKind::PathThroughSingularity);
  EXPECT_LT(std::abs(tr.root + 1.0), 1e-12);
  // Half a loop lands on i.
  auto half = [](double s) { return std::exp(cplx(0.0, std::numbers::pi * s)); };
  EXPECT_LT(std::abs(continue_sqrt(half, 1.0, ErrorKind::PathThroughSingularity).root - I_unit), 1e-12);
}

TEST(Linalg, SqrtThroughZeroRaises) {
  auto f = [](double s) { return cplx(1.0 - 2.0 * s, 0.0); };
  try {
    continue_sqrt(f, 1.0, ErrorKind::PathThroughSingularity);
    FAIL() << "expected PathThroughSingularity";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PathThroughSingularity);
  }
}

TEST(Linalg, SqrtBranchFollowsReference) {
  EXPECT_LT(std::abs(sqrt_branch(4.0, -1.0) + 2.0), 1e-15);
  EXPECT_LT(std::abs(sqrt_branch(4.0, 1.0) - 2.0), 1e-15);
  EXPECT_THROW(sqrt_branch(1.0, I_unit), Error);
}
