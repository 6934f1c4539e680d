// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "dsvd/core.hpp"
#include "dsvd/objective.hpp"

namespace dsvd::rad {

/// Single complex gradient (re + i im) of a scalar with respect to A.
using ComplexGradient = SplitMatrix;

/// dsigma/dA_r in `re` and dsigma/dA_i in `im`; both equal the parts of u v^H.
SplitMatrix sigma_grad_complex(const SingularTriplet& t);

/// Real-matrix case: u v^T.
RealMatrix sigma_grad_real(const RealVector& u, const RealVector& v);

/// 1/2 (df_r/dA_r + i df_i/dA_r - i df_r/dA_i + df_i/dA_i).
ComplexGradient wirtinger_combine(const GradientBundle& b);

/// Same combination for a real-valued f given as (df/dA_r, df/dA_i).
ComplexGradient wirtinger_combine(const SplitMatrix& real_blocks);

/// Inverse of wirtinger_combine for a real-valued f: the f_i blocks come back zero.
GradientBundle wirtinger_split(const ComplexGradient& w);

/// Pullback of u = A v / sigma (left, seeded with the gradient of u) or
/// v = A^H u / sigma (right, seeded with the gradient of v), holding the other
/// vector and sigma fixed. Seeds follow df = Re(seed^H dx).
SplitMatrix recovery_pullback(Side side, const SplitVector& seed, const SingularTriplet& t);

}  // namespace dsvd::rad
