// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "dsvd/core.hpp"

namespace dsvd {

/// Governing-equation family: Gram eigenproblem on A A^H (lgmm) or A^H A
/// (rgmm), or the symmetric embedding of A (semm).
enum class Method { lgmm, rgmm, semm };

const char* to_string(Method m);

/// Eigen-form state w = [phi_r; phi_i; lambda_r; lambda_i].
struct GmmState {
  SplitVector phi;
  double lambda_re = 0.0;
  double lambda_im = 0.0;
  Index pivot = 0;
};

/// Embedding-form state w = [u_r; u_i; v_r; v_i; sigma_r; sigma_i].
struct SemmState {
  SplitVector u;
  SplitVector v;
  double sigma_re = 0.0;
  double sigma_im = 0.0;
  Index pivot = 0;  ///< entry of u whose imaginary part is constrained to zero

  Index state_size() const { return 2 * u.size() + 2 * v.size() + 2; }
  RealVector stacked() const;
  void set_stacked(const RealVector& w);
};

namespace governing {

/// Pivot entry chosen by `pc` for vector x; argmax ties go to the smallest index.
Index pivot_index(const SplitVector& x, const PhaseConvention& pc);

/// Rotates u and v by one common phase so the anchor vector's pivot entry is
/// real with the requested sign. Throws DegeneratePivotError for |pivot| < 1e-14.
SingularTriplet enforce_phase(const SingularTriplet& t, const PhaseConvention& pc);

/// The (u, v) an objective sees under `pc`. Invariant under u, v -> e^{i t}(u, v).
struct GaugeView {
  SplitVector u;
  SplitVector v;
};
GaugeView gauge_view(const SplitVector& u, const SplitVector& v, const PhaseConvention& pc);

/// Pulls gradients of the viewed vectors back to the raw (u, v).
/// Gradients use the convention df = Re(g^H dx).
GaugeView gauge_pullback(const SplitVector& u, const SplitVector& v, const PhaseConvention& pc,
                         const SplitVector& grad_u, const SplitVector& grad_v);

GmmState gmm_state(Method kind, const SingularTriplet& t);
SemmState semm_state(const SingularTriplet& t);
/// Positive-real sigma triplet from a converged state, anchored on u at the state's pivot.
SingularTriplet to_triplet(const SemmState& s, const PhaseConvention& pc);

/// [r_main,r; r_main,i; r_m; r_p] with the Gram matrix of the requested side formed internally.
RealVector residual(Method kind, const SplitMatrix& a, const GmmState& s);
/// [Re(Av - sigma u); Im(Av - sigma u); Re(A^H u - sigma v); Im(A^H u - sigma v); |u|^2 - 1; Im(u_k)].
RealVector residual(const SplitMatrix& a, const SemmState& s);
/// Residual of the triplet under the requested formulation.
RealVector residual(Method kind, const SplitMatrix& a, const SingularTriplet& t);

/// d r / d w for the eigen form with Gram matrix d.
RealMatrix gmm_jacobian(const SplitMatrix& d, const GmmState& s);
/// d r / d w for the embedding form.
RealMatrix semm_jacobian(const SplitMatrix& a, const SemmState& s);

struct NewtonTrace {
  std::vector<double> residuals;  ///< infinity norms, one per evaluated iterate
};

/// Newton iterations on the embedding residual. Default tol is 1e-13 * sigma_1(A).
SemmState newton_refine(const SplitMatrix& a, const SemmState& s, int max_iter = 12,
                        std::optional<double> tol = std::nullopt, NewtonTrace* trace = nullptr);

/// Triplet `index` (0-based) after checking its distance to every other
/// singular value exceeds gap_tol * sigma_1.
SingularTriplet select_triplet(const SvdResult& res, Index index, double gap_tol = 1e-8);

/// jacobi_svd, select_triplet, enforce_phase, newton_refine, and re-anchoring in one call.
SingularTriplet solve_triplet(const SplitMatrix& a, Index index, const PhaseConvention& pc, double gap_tol = 1e-8);

}  // namespace governing
}  // namespace dsvd
