// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "dsvd/core.hpp"

namespace dsvd::pod {

/// m x n real snapshot matrix; column j is the state at time step j.
struct SnapshotMatrix {
  RealMatrix data;

  SnapshotMatrix() = default;
  /// Throws DimensionError unless m >= n >= 2, NonFiniteError on NaN/Inf.
  explicit SnapshotMatrix(RealMatrix x);

  Index states() const { return data.rows(); }
  Index snapshots() const { return data.cols(); }
};

enum class Format { bin, csv };

/// ".csv" selects CSV, anything else the binary format.
Format format_from_path(const std::string& path);

// Binary layout: "SNAP1", version byte 0x01, u32 LE m, u32 LE n, then m*n
// float64 LE values in column-major order.
SnapshotMatrix parse_bin(std::string_view bytes);
// CSV layout: "m,n" header line, then m lines of n comma-separated values.
SnapshotMatrix parse_csv(std::string_view text);
std::string encode_bin(const RealMatrix& x);
std::string encode_csv(const RealMatrix& x);

SnapshotMatrix load_snapshots(const std::string& path, Format format);
void save_matrix(const std::string& path, const RealMatrix& x, Format format);

/// X - (1/n) X 1 1^T.
SnapshotMatrix center(const SnapshotMatrix& x);
void center_in_place(RealMatrix& x);

struct PodResult {
  RealMatrix modes;            ///< m x k, orthonormal columns
  RealVector sigmas;           ///< k, descending
  RealMatrix right_vectors;    ///< n x k
  RealMatrix temporal_coeffs;  ///< k x n, row i = sigma_i v_i^T
  RealVector eigenvalues;      ///< all n covariance eigenvalues, descending
  RealMatrix eigenvectors;     ///< n x n, columns match `eigenvalues`

  Index mode_count() const { return sigmas.size(); }
};

/// POD from the n x n covariance X^T X only. Each mode's largest-magnitude
/// entry is made positive (ties to the smallest index).
PodResult method_of_snapshots(const SnapshotMatrix& centered, Index k, double gap_tol = 1e-8);

/// dsigma_i/dX as a rank-one product left * right^T.
struct RankOneField {
  RealVector left;   ///< m
  RealVector right;  ///< n

  double at(Index p, Index q) const { return left[p] * right[q]; }
  RealMatrix dense() const { return left * right.transpose(); }
};

/// Factors of Phi_i Psi_i^T, right-multiplied by I - 11^T/n when chain_centering is set.
RankOneField sensitivity_factors(const PodResult& r, Index i, bool chain_centering = false);

/// Dense m x n sensitivity field of sigma_i (0-based mode index).
RealMatrix sigma_sensitivity_field(const PodResult& r, Index i, bool chain_centering = false);

/// Writes a rank-one field in the binary snapshot format without materializing it.
void save_field_bin(const std::string& path, const RankOneField& field);

/// Finite differences of sigma_i under single-entry perturbations of the
/// centered matrix (or of the raw matrix through the centering map).
///
/// The perturbed covariance differs from X'^T X' by a rank-two term; its
/// eigenvalue shift is solved in the unperturbed eigenbasis, so the
/// difference sigma(X + dE) - sigma(X) carries no cancellation error.
/// `centered` must outlive the probe.
class SigmaProbe {
 public:
  SigmaProbe(const RealMatrix& centered, const PodResult& r);

  /// sigma_i(perturbed) - sigma_i with entry (p, q) moved by delta.
  double shift(Index i, Index p, Index q, double delta, bool chain_centering) const;
  double central_difference(Index i, Index p, Index q, double eps, bool chain_centering) const;

 private:
  const RealMatrix* x_;
  RealVector lambda_;
  RealMatrix basis_;
};

}  // namespace dsvd::pod
