// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "dsvd/cases.hpp"
#include "dsvd/governing.hpp"
#include "dsvd/rad.hpp"
#include "test_util.hpp"

namespace dsvd {
namespace {

double sigma1(const SplitMatrix& a) { return jacobi_svd(a).triplets[0].sigma; }

// Central differences of sigma_1 over A_r and A_i.
SplitMatrix fd_sigma_grad(const SplitMatrix& a, double h = 1e-6) {
  SplitMatrix g(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      for (int part = 0; part < 2; ++part) {
        SplitMatrix p = a, m = a;
        (part == 0 ? p.re : p.im)(i, j) += h;
        (part == 0 ? m.re : m.im)(i, j) -= h;
        (part == 0 ? g.re : g.im)(i, j) = (sigma1(p) - sigma1(m)) / (2.0 * h);
      }
    }
  }
  return g;
}

TEST(SigmaGrad, MatchesFiniteDifferences) {
  std::mt19937_64 rng(103);
  for (auto [m, n] : {std::pair{3, 3}, std::pair{5, 2}, std::pair{2, 4}}) {
    const SplitMatrix a = testing::random_split(m, n, rng);
    const SingularTriplet t = governing::solve_triplet(a, 0, PhaseConvention::left());
    const SplitMatrix g = rad::sigma_grad_complex(t);
    const SplitMatrix fd = fd_sigma_grad(a);
    EXPECT_LT((g - fd).frobenius_norm(), 1e-8);
  }
}

TEST(SigmaGrad, GoldenSquareAndRect) {
  const SingularTriplet sq = governing::solve_triplet(cases::square().a, 0, PhaseConvention::left());
  const SplitMatrix g = rad::sigma_grad_complex(sq);
  // Reference: u_1 v_1^H from an independent LAPACK SVD.
  EXPECT_NEAR(g.re(0, 0), 0.0187021718569657, 1e-13);
  EXPECT_NEAR(g.re(0, 1), 0.0688803385371089, 1e-13);
  EXPECT_NEAR(g.re(0, 2), -0.9344700629286392, 1e-13);
  EXPECT_NEAR(g.im(0, 0), 0.0800160210831627, 1e-13);
  EXPECT_NEAR(g.im(0, 1), 0.076616816452124, 1e-13);
  EXPECT_NEAR(g.im(0, 2), 0.1601205841666453, 1e-13);

  const SingularTriplet rc = governing::solve_triplet(cases::rect().a, 0, PhaseConvention::left());
  const SplitMatrix h = rad::sigma_grad_complex(rc);
  EXPECT_NEAR(h.re(0, 0), 0.4677489282440502, 1e-13);
  EXPECT_NEAR(h.re(0, 1), 0.2515711235716018, 1e-13);
  EXPECT_NEAR(h.im(0, 0), 0.3039897225927982, 1e-13);
  EXPECT_NEAR(h.im(0, 1), -0.4636150488112564, 1e-13);
}

TEST(SigmaGrad, RealCaseIsOuterProduct) {
  std::mt19937_64 rng(107);
  const RealMatrix a = testing::random_real(4, 3, rng);
  const SingularTriplet t = jacobi_svd(a).triplets[0];
  const RealMatrix g = rad::sigma_grad_real(t.u.re, t.v.re);
  const SplitMatrix fd = fd_sigma_grad(SplitMatrix::from_real(a));
  EXPECT_LT((g - fd.re).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Wirtinger, SigmaGradientIsHalfConjugateOuterProduct) {
  std::mt19937_64 rng(109);
  const SplitMatrix a = testing::random_split(3, 3, rng);
  const SingularTriplet t = governing::solve_triplet(a, 0, PhaseConvention::left());
  const rad::ComplexGradient w = rad::wirtinger_combine(rad::sigma_grad_complex(t));
  const SplitMatrix uvh = outer_adjoint(t.u, t.v);
  EXPECT_LT((w.re - 0.5 * uvh.re).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((w.im + 0.5 * uvh.im).cwiseAbs().maxCoeff(), 1e-15);

  GradientBundle b = GradientBundle::zeros(3, 3);
  b.dfr_dAr = uvh.re;
  b.dfr_dAi = uvh.im;
  const rad::ComplexGradient wb = rad::wirtinger_combine(b);
  EXPECT_LT((wb.re - w.re).cwiseAbs().maxCoeff() + (wb.im - w.im).cwiseAbs().maxCoeff(), 1e-15);

  const GradientBundle back = rad::wirtinger_split(w);
  EXPECT_LT(max_abs_diff(back, b), 1e-15);
}

TEST(RecoveryPullback, MatchesFiniteDifferences) {
  std::mt19937_64 rng(113);
  const SplitMatrix a = testing::random_split(4, 3, rng);
  const SingularTriplet t = governing::solve_triplet(a, 0, PhaseConvention::left());
  for (Side side : {Side::left, Side::right}) {
    const SplitVector seed = testing::random_split(side == Side::left ? 4 : 3, rng);
    // f(A) = Re(seed^H x(A)), x = A v / sigma or A^H u / sigma with the rest fixed.
    auto f = [&](const SplitMatrix& b) {
      const SplitVector x = side == Side::left ? b * t.v : b.adjoint() * t.u;
      double re = 0.0;
      double im = 0.0;
      inner(seed, x, re, im);
      return re / t.sigma;
    };
    const SplitMatrix g = rad::recovery_pullback(side, seed, t);
    const double h = 1e-6;
    for (Index i = 0; i < 4; ++i) {
      for (Index j = 0; j < 3; ++j) {
        for (int part = 0; part < 2; ++part) {
          SplitMatrix p = a, m = a;
          (part == 0 ? p.re : p.im)(i, j) += h;
          (part == 0 ? m.re : m.im)(i, j) -= h;
          EXPECT_NEAR((part == 0 ? g.re : g.im)(i, j), (f(p) - f(m)) / (2.0 * h), 1e-9);
        }
      }
    }
  }
}

TEST(RecoveryPullback, Errors) {
  std::mt19937_64 rng(127);
  SingularTriplet t = governing::solve_triplet(testing::random_split(3, 2, rng), 0, PhaseConvention::left());
  EXPECT_THROW(rad::recovery_pullback(Side::left, SplitVector(2), t), DimensionError);
  t.sigma = 0.0;
  EXPECT_THROW(rad::recovery_pullback(Side::left, SplitVector(3), t), NearZeroSigmaError);
}

}  // namespace
}  // namespace dsvd
