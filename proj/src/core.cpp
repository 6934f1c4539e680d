// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#include "dsvd/core.hpp"

#include <algorithm>

namespace dsvd {

SplitVector::SplitVector(RealVector r, RealVector i) : re(std::move(r)), im(std::move(i)) {
  if (re.size() != im.size()) {
    throw DimensionError("SplitVector: real and imaginary parts differ in length");
  }
}

SplitVector SplitVector::from_real(const RealVector& r) { return {r, RealVector::Zero(r.size())}; }

RealVector SplitVector::abs() const {
  RealVector out(size());
  for (Index j = 0; j < size(); ++j) out[j] = std::hypot(re[j], im[j]);
  return out;
}

SplitVector SplitVector::rotated(double c, double s) const { return {c * re - s * im, s * re + c * im}; }

SplitMatrix::SplitMatrix(RealMatrix r, RealMatrix i) : re(std::move(r)), im(std::move(i)) {
  if (re.rows() != im.rows() || re.cols() != im.cols()) {
    throw DimensionError("SplitMatrix: real and imaginary parts differ in shape");
  }
}

SplitMatrix SplitMatrix::from_real(const RealMatrix& r) { return {r, RealMatrix::Zero(r.rows(), r.cols())}; }

SplitMatrix SplitMatrix::identity(Index n) { return {RealMatrix::Identity(n, n), RealMatrix::Zero(n, n)}; }

void SplitMatrix::require_finite(const char* what) const {
  if (!all_finite()) throw NonFiniteError(std::string(what) + ": matrix has non-finite entries");
}

SplitMatrix operator*(const SplitMatrix& a, const SplitMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("SplitMatrix product: inner dimensions differ");
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

SplitVector operator*(const SplitMatrix& a, const SplitVector& x) {
  if (a.cols() != x.size()) throw DimensionError("SplitMatrix-vector product: dimensions differ");
  return {a.re * x.re - a.im * x.im, a.re * x.im + a.im * x.re};
}

SplitMatrix operator+(const SplitMatrix& a, const SplitMatrix& b) { return {a.re + b.re, a.im + b.im}; }
SplitMatrix operator-(const SplitMatrix& a, const SplitMatrix& b) { return {a.re - b.re, a.im - b.im}; }
SplitMatrix operator*(double s, const SplitMatrix& a) { return {s * a.re, s * a.im}; }

void inner(const SplitVector& x, const SplitVector& y, double& re, double& im) {
  re = x.re.dot(y.re) + x.im.dot(y.im);
  im = x.re.dot(y.im) - x.im.dot(y.re);
}

SplitMatrix outer_adjoint(const SplitVector& x, const SplitVector& y) {
  return {x.re * y.re.transpose() + x.im * y.im.transpose(), x.im * y.re.transpose() - x.re * y.im.transpose()};
}

RealVector vec(const RealMatrix& m) {
  RealVector out(m.size());
  Index k = 0;
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out[k++] = m(i, j);
  return out;
}

RealVector vec(const SplitMatrix& m) {
  RealVector out(2 * m.re.size());
  out << vec(m.re), vec(m.im);
  return out;
}

RealMatrix unvec(const RealVector& x, Index rows, Index cols) {
  if (rows < 0 || cols < 0 || x.size() != rows * cols) {
    throw DimensionError("unvec: length " + std::to_string(x.size()) + " does not match " + std::to_string(rows) +
                         "x" + std::to_string(cols));
  }
  RealMatrix out(rows, cols);
  Index k = 0;
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) out(i, j) = x[k++];
  return out;
}

SplitMatrix unvec_split(const RealVector& x, Index rows, Index cols) {
  if (x.size() != 2 * rows * cols) throw DimensionError("unvec_split: length does not match 2*rows*cols");
  const Index half = rows * cols;
  return {unvec(x.head(half), rows, cols), unvec(x.tail(half), rows, cols)};
}

SplitMatrix gram(const SplitMatrix& a, Side side) {
  SplitMatrix g = side == Side::left ? a * a.adjoint() : a.adjoint() * a;
  // Symmetrize so re is exactly symmetric and im exactly antisymmetric.
  RealMatrix re = 0.5 * (g.re + g.re.transpose());
  RealMatrix im = 0.5 * (g.im - g.im.transpose());
  return {std::move(re), std::move(im)};
}

RealVector hermitian_eigenvalues(const SplitMatrix& h) {
  if (h.rows() != h.cols()) throw DimensionError("hermitian_eigenvalues: matrix is not square");
  const Index n = h.rows();
  // Real embedding [[Hr, -Hi], [Hi, Hr]] carries every eigenvalue twice.
  RealMatrix emb(2 * n, 2 * n);
  emb << h.re, -h.im, h.im, h.re;
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(emb, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw ConvergenceError("hermitian_eigenvalues: eigensolver failed");
  const RealVector& all = solver.eigenvalues();  // ascending
  RealVector out(n);
  for (Index i = 0; i < n; ++i) out[i] = 0.5 * (all[2 * n - 1 - 2 * i] + all[2 * n - 2 - 2 * i]);
  return out;
}

RealVector SvdResult::sigmas() const {
  RealVector s(static_cast<Index>(triplets.size()));
  for (std::size_t i = 0; i < triplets.size(); ++i) s[static_cast<Index>(i)] = triplets[i].sigma;
  return s;
}

Index SvdResult::rank() const {
  return static_cast<Index>(
      std::count_if(triplets.begin(), triplets.end(), [&](const SingularTriplet& t) { return t.sigma > rank_tol; }));
}

}  // namespace dsvd
