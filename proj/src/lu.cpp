// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numeric>
#include <utility>

#include "dsvd/core.hpp"

namespace dsvd {

LuFactorization::LuFactorization(const RealMatrix& m) : lu_(m), perm_(static_cast<std::size_t>(m.rows())) {
  if (m.rows() != m.cols()) throw DimensionError("lu: matrix is not square");
  if (!m.allFinite()) throw NonFiniteError("lu: matrix has non-finite entries");
  const Index n = m.rows();
  std::iota(perm_.begin(), perm_.end(), Index{0});

  const double norm_inf = n == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
  const double pivot_floor = 1e-14 * norm_inf;

  for (Index k = 0; k < n; ++k) {
    Index piv = k;
    lu_.col(k).tail(n - k).cwiseAbs().maxCoeff(&piv);
    piv += k;
    const double pivot = std::abs(lu_(piv, k));
    if (!(pivot > pivot_floor) || pivot == 0.0) {
      throw SingularSystemError("lu: numerically singular matrix (pivot " + std::to_string(pivot) + " at column " +
                                std::to_string(k) + ")");
    }
    if (piv != k) {
      lu_.row(k).swap(lu_.row(piv));
      std::swap(perm_[static_cast<std::size_t>(k)], perm_[static_cast<std::size_t>(piv)]);
    }
    const double inv = 1.0 / lu_(k, k);
    for (Index i = k + 1; i < n; ++i) {
      const double l = lu_(i, k) * inv;
      lu_(i, k) = l;
      if (l != 0.0) lu_.row(i).tail(n - k - 1) -= l * lu_.row(k).tail(n - k - 1);
    }
  }
}

RealVector LuFactorization::solve(const RealVector& b) const {
  const Index n = lu_.rows();
  if (b.size() != n) throw DimensionError("lu: right-hand side length does not match matrix");
  RealVector x(n);
  for (Index i = 0; i < n; ++i) x[i] = b[perm_[static_cast<std::size_t>(i)]];
  for (Index i = 0; i < n; ++i) x[i] -= lu_.row(i).head(i).dot(x.head(i));
  for (Index i = n - 1; i >= 0; --i) {
    x[i] = (x[i] - lu_.row(i).tail(n - i - 1).dot(x.tail(n - i - 1))) / lu_(i, i);
  }
  return x;
}

RealVector lu_solve(const RealMatrix& m, const RealVector& b) {
  if (m.rows() != b.size()) throw DimensionError("lu_solve: right-hand side length does not match matrix");
  return LuFactorization(m).solve(b);
}

}  // namespace dsvd
