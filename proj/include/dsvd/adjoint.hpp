// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dsvd/core.hpp"
#include "dsvd/governing.hpp"
#include "dsvd/objective.hpp"

namespace dsvd {

/// Solution of a transposed adjoint system, split into blocks aligned with
/// the residual rows of the originating formulation.
///
/// Eigen form: main_r, main_i (Gram-matrix size), m, p.
/// Embedding form: v_r, v_i (length m), u_r, u_i (length n), m, p.
class AdjointVector {
 public:
  AdjointVector(Method kind, RealVector psi, Index rows_a);

  Method kind() const { return kind_; }
  const RealVector& stacked() const { return psi_; }
  RealVector block(std::string_view name) const;
  std::vector<std::string> block_names() const;

 private:
  struct Slot {
    std::string name;
    Index offset;
    Index length;
  };
  Method kind_;
  RealVector psi_;
  std::vector<Slot> slots_;
};

namespace adjoint {

/// d r / d w for `kind` at triplet t; throws StaleTripletError when t does
/// not satisfy the governing equations of A.
RealMatrix assemble(Method kind, const SplitMatrix& a, const SingularTriplet& t);

/// Solves M^T psi = rhs. Throws DegeneracyError when M^T is singular.
AdjointVector solve_adjoint(Method kind, const RealMatrix& m, const RealVector& rhs, Index rows_a);

/// (dr/dB)^T psi for lgmm, (dr/dC)^T psi for rgmm, as a split matrix.
SplitMatrix gram_pullback(const AdjointVector& psi, const SingularTriplet& t);

/// Chains a Gram-matrix gradient back to A through B = A A^H (lgmm) or C = A^H A (rgmm).
SplitMatrix gram_chain_to_A(Method kind, const SplitMatrix& bar, const SplitMatrix& a);

/// (dr/dA)^T psi for the embedding residual.
SplitMatrix semm_pullback(const AdjointVector& psi, const SingularTriplet& t);

/// Total derivative of obj along the solution manifold of triplet t.
///
/// The objective is evaluated through the gauge map of t.convention, so the
/// three methods differentiate the same function of A.
GradientBundle total_gradient(Method method, const SplitMatrix& a, const SingularTriplet& t,
                              const ObjectiveSpec& obj);

}  // namespace adjoint
}  // namespace dsvd
