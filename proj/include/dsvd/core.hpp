// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dsvd/error.hpp"

namespace dsvd {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Complex vector held as separate real and imaginary parts.
struct SplitVector {
  RealVector re;
  RealVector im;

  SplitVector() = default;
  SplitVector(RealVector r, RealVector i);
  explicit SplitVector(Index n) : re(RealVector::Zero(n)), im(RealVector::Zero(n)) {}

  static SplitVector from_real(const RealVector& r);

  Index size() const { return re.size(); }
  double squared_norm() const { return re.squaredNorm() + im.squaredNorm(); }
  double norm() const { return std::sqrt(squared_norm()); }
  /// |x_j| for each entry.
  RealVector abs() const;
  /// Multiply every entry by the unit complex number (c, s).
  SplitVector rotated(double c, double s) const;
  SplitVector conj() const { return {re, -im}; }
};

/// Dense complex matrix held as separate real and imaginary parts.
struct SplitMatrix {
  RealMatrix re;
  RealMatrix im;

  SplitMatrix() = default;
  SplitMatrix(RealMatrix r, RealMatrix i);
  SplitMatrix(Index rows, Index cols) : re(RealMatrix::Zero(rows, cols)), im(RealMatrix::Zero(rows, cols)) {}

  static SplitMatrix from_real(const RealMatrix& r);
  static SplitMatrix identity(Index n);

  Index rows() const { return re.rows(); }
  Index cols() const { return re.cols(); }

  /// Conjugate transpose.
  SplitMatrix adjoint() const { return {re.transpose(), -im.transpose()}; }
  SplitMatrix transpose() const { return {re.transpose(), im.transpose()}; }
  double frobenius_norm() const { return std::sqrt(re.squaredNorm() + im.squaredNorm()); }
  bool all_finite() const { return re.allFinite() && im.allFinite(); }
  /// Throws NonFiniteError on NaN or Inf entries.
  void require_finite(const char* what) const;
};

SplitMatrix operator*(const SplitMatrix& a, const SplitMatrix& b);
SplitVector operator*(const SplitMatrix& a, const SplitVector& x);
SplitMatrix operator+(const SplitMatrix& a, const SplitMatrix& b);
SplitMatrix operator-(const SplitMatrix& a, const SplitMatrix& b);
SplitMatrix operator*(double s, const SplitMatrix& a);

/// x^H y.
void inner(const SplitVector& x, const SplitVector& y, double& re, double& im);

/// x y^H.
SplitMatrix outer_adjoint(const SplitVector& x, const SplitVector& y);

// Row-major vectorization; the split form stacks the real part before the imaginary part.
RealVector vec(const RealMatrix& m);
RealVector vec(const SplitMatrix& m);
RealMatrix unvec(const RealVector& x, Index rows, Index cols);
SplitMatrix unvec_split(const RealVector& x, Index rows, Index cols);

enum class Side { left, right };

/// left: A A^H (m x m), right: A^H A (n x n). Exactly Hermitian.
SplitMatrix gram(const SplitMatrix& a, Side side);

/// Eigenvalues of a Hermitian matrix in descending order.
RealVector hermitian_eigenvalues(const SplitMatrix& h);

enum class Anchor { left_vector, right_vector, independent };
enum class PivotSign { positive, negative, keep };

/// Which entry of which singular vector carries the phase constraint.
///
/// `independent` keeps the stored triplet anchored on u, but objectives are
/// evaluated on u and v each rotated by their own pivot.
struct PhaseConvention {
  Anchor anchor = Anchor::left_vector;
  std::optional<Index> fixed_pivot;  ///< nullopt selects argmax |x_j|
  PivotSign sign = PivotSign::positive;

  static PhaseConvention left() { return {}; }
  static PhaseConvention right() { return {Anchor::right_vector, std::nullopt, PivotSign::positive}; }
  static PhaseConvention independent() { return {Anchor::independent, std::nullopt, PivotSign::positive}; }
};

struct SingularTriplet {
  double sigma = 0.0;
  SplitVector u;
  SplitVector v;
  PhaseConvention convention;
  Index pivot = 0;        ///< constrained entry of the anchor vector
  bool anchored = false;  ///< false until governing::enforce_phase ran
  double rank_tol = 0.0;
};

struct SvdResult {
  std::vector<SingularTriplet> triplets;  // descending sigma
  double rank_tol = 0.0;

  RealVector sigmas() const;
  /// Number of singular values above rank_tol.
  Index rank() const;
};

/// One-sided (Hestenes) Jacobi SVD; thin factors, min(m, n) triplets.
SvdResult jacobi_svd(const SplitMatrix& a);

/// Real-matrix convenience overload.
SvdResult jacobi_svd(const RealMatrix& a);

/// Dense LU with partial pivoting. Throws SingularSystemError when a pivot
/// falls below 1e-14 * ||M||_inf.
RealVector lu_solve(const RealMatrix& m, const RealVector& b);

class LuFactorization {
 public:
  explicit LuFactorization(const RealMatrix& m);
  RealVector solve(const RealVector& b) const;
  Index size() const { return lu_.rows(); }

 private:
  RealMatrix lu_;
  std::vector<Index> perm_;
};

// JSON matrix format: {"m": int, "n": int, "re": [[...]], "im": [[...]]}, "im" optional.
SplitMatrix matrix_from_json_text(const std::string& text);
SplitMatrix load_matrix_json(const std::string& path);
std::string matrix_to_json_text(const SplitMatrix& a);

}  // namespace dsvd
