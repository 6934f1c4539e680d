// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <complex>
#include <limits>

#include "dsvd/core.hpp"
#include "dsvd/json_out.hpp"
#include "test_util.hpp"

namespace dsvd {
namespace {

using testing::random_split;

TEST(SplitVector, RotatedMultipliesByUnitPhase) {
  const SplitVector x(RealVector::Constant(1, 2.0), RealVector::Constant(1, 1.0));
  // (2 + i)(0 + i) = -1 + 2i
  const SplitVector y = x.rotated(0.0, 1.0);
  EXPECT_DOUBLE_EQ(y.re[0], -1.0);
  EXPECT_DOUBLE_EQ(y.im[0], 2.0);
  EXPECT_DOUBLE_EQ(x.abs()[0], std::sqrt(5.0));
}

TEST(SplitMatrix, ProductMatchesComplexArithmetic) {
  std::mt19937_64 rng(3);
  const SplitMatrix a = random_split(3, 4, rng);
  const SplitMatrix b = random_split(4, 2, rng);
  const SplitMatrix c = a * b;
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 2; ++j) {
      std::complex<double> s = 0.0;
      for (Index k = 0; k < 4; ++k) s += std::complex<double>(a.re(i, k), a.im(i, k)) * std::complex<double>(b.re(k, j), b.im(k, j));
      EXPECT_NEAR(c.re(i, j), s.real(), 1e-14);
      EXPECT_NEAR(c.im(i, j), s.imag(), 1e-14);
    }
  }
}

TEST(SplitMatrix, RequireFiniteThrows) {
  SplitMatrix a(2, 2);
  a.im(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(a.require_finite("test"), NonFiniteError);
}

TEST(Inner, ConjugatesFirstArgument) {
  const SplitVector x(RealVector::Constant(1, 0.0), RealVector::Constant(1, 1.0));  // i
  const SplitVector y(RealVector::Constant(1, 1.0), RealVector::Constant(1, 0.0));  // 1
  double re = 0.0;
  double im = 0.0;
  inner(x, y, re, im);  // conj(i) * 1 = -i
  EXPECT_DOUBLE_EQ(re, 0.0);
  EXPECT_DOUBLE_EQ(im, -1.0);
}

TEST(OuterAdjoint, EqualsXTimesYConjugateTranspose) {
  std::mt19937_64 rng(5);
  const SplitVector x = random_split(3, rng);
  const SplitVector y = random_split(2, rng);
  const SplitMatrix o = outer_adjoint(x, y);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 2; ++j) {
      const std::complex<double> e = std::complex<double>(x.re[i], x.im[i]) * std::conj(std::complex<double>(y.re[j], y.im[j]));
      EXPECT_NEAR(o.re(i, j), e.real(), 1e-15);
      EXPECT_NEAR(o.im(i, j), e.imag(), 1e-15);
    }
}

TEST(Vec, IsRowMajor) {
  RealMatrix m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  const RealVector v = vec(m);
  for (Index k = 0; k < 6; ++k) EXPECT_EQ(v[k], static_cast<double>(k + 1));
  EXPECT_EQ(unvec(v, 2, 3), m);
  EXPECT_THROW(unvec(v, 4, 2), DimensionError);
}

TEST(Vec, SplitStacksRealThenImaginary) {
  SplitMatrix a(1, 2);
  a.re << 1, 2;
  a.im << 3, 4;
  const RealVector v = vec(a);
  ASSERT_EQ(v.size(), 4);
  EXPECT_EQ(v[0], 1);
  EXPECT_EQ(v[3], 4);
  const SplitMatrix back = unvec_split(v, 1, 2);
  EXPECT_EQ(back.re, a.re);
  EXPECT_EQ(back.im, a.im);
}

TEST(Gram, IsHermitianAndMatchesProduct) {
  std::mt19937_64 rng(7);
  const SplitMatrix a = random_split(4, 3, rng);
  const SplitMatrix b = gram(a, Side::left);
  const SplitMatrix c = gram(a, Side::right);
  EXPECT_EQ(b.rows(), 4);
  EXPECT_EQ(c.rows(), 3);
  EXPECT_EQ(b.re, b.re.transpose());
  EXPECT_EQ(b.im, RealMatrix(-b.im.transpose()));
  const SplitMatrix direct = a.adjoint() * a;
  EXPECT_LT((direct.re - c.re).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((direct.im - c.im).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(HermitianEigenvalues, DiagonalMatrix) {
  SplitMatrix h(3, 3);
  h.re.diagonal() << 3.0, -1.0, 2.0;
  const RealVector ev = hermitian_eigenvalues(h);
  ASSERT_EQ(ev.size(), 3);
  EXPECT_NEAR(ev[0], 3.0, 1e-14);
  EXPECT_NEAR(ev[1], 2.0, 1e-14);
  EXPECT_NEAR(ev[2], -1.0, 1e-14);
}

TEST(HermitianEigenvalues, TwoByTwoWithImaginaryCoupling) {
  SplitMatrix h(2, 2);
  h.im(0, 1) = 1.0;
  h.im(1, 0) = -1.0;
  const RealVector ev = hermitian_eigenvalues(h);
  EXPECT_NEAR(ev[0], 1.0, 1e-14);
  EXPECT_NEAR(ev[1], -1.0, 1e-14);
}

TEST(MatrixJson, RoundTrip) {
  std::mt19937_64 rng(9);
  const SplitMatrix a = random_split(3, 2, rng);
  const SplitMatrix b = matrix_from_json_text(matrix_to_json_text(a));
  EXPECT_EQ(a.re, b.re);
  EXPECT_EQ(a.im, b.im);
}

TEST(MatrixJson, ImaginaryPartIsOptional) {
  const SplitMatrix a = matrix_from_json_text(R"({"m": 1, "n": 2, "re": [[1, 2]]})");
  EXPECT_EQ(a.re(0, 1), 2.0);
  EXPECT_EQ(a.im(0, 1), 0.0);
}

TEST(MatrixJson, SyntaxErrorReportsOffset) {
  try {
    matrix_from_json_text(R"({"m": 1, "n": 1, "re": [[1,]]})");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(e.offset(), ParseError::kNoOffset);
    EXPECT_GT(e.offset(), 20u);
  }
}

TEST(MatrixJson, ShapeMismatchIsParseError) {
  EXPECT_THROW(matrix_from_json_text(R"({"m": 2, "n": 1, "re": [[1]]})"), ParseError);
  EXPECT_THROW(matrix_from_json_text(R"({"m": 1, "n": 2, "re": [[1]]})"), ParseError);
  EXPECT_THROW(matrix_from_json_text(R"({"m": 1, "n": 1, "re": [["x"]]})"), ParseError);
  EXPECT_THROW(matrix_from_json_text(R"({"n": 1, "re": [[1]]})"), ParseError);
}

TEST(MatrixJson, MissingFileIsIoError) { EXPECT_THROW(load_matrix_json("/nonexistent/a.json"), IoError); }

TEST(JsonOut, FullPrecisionAndNullForNonFinite) {
  nlohmann::json doc = {{"x", 0.1}, {"y", std::numeric_limits<double>::infinity()}};
  const std::string s = dump_json(doc);
  EXPECT_NE(s.find("0.10000000000000001"), std::string::npos);
  EXPECT_NE(s.find("null"), std::string::npos);
  EXPECT_DOUBLE_EQ(nlohmann::json::parse(s)["x"].get<double>(), 0.1);
}

}  // namespace
}  // namespace dsvd
