// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#include "dsvd/rad.hpp"

#include <limits>

namespace dsvd::rad {

SplitMatrix sigma_grad_complex(const SingularTriplet& t) { return outer_adjoint(t.u, t.v); }

RealMatrix sigma_grad_real(const RealVector& u, const RealVector& v) { return u * v.transpose(); }

ComplexGradient wirtinger_combine(const GradientBundle& b) {
  return {0.5 * (b.dfr_dAr + b.dfi_dAi), 0.5 * (b.dfi_dAr - b.dfr_dAi)};
}

ComplexGradient wirtinger_combine(const SplitMatrix& real_blocks) { return {0.5 * real_blocks.re, -0.5 * real_blocks.im}; }

GradientBundle wirtinger_split(const ComplexGradient& w) {
  GradientBundle b = GradientBundle::zeros(w.rows(), w.cols());
  b.dfr_dAr = 2.0 * w.re;
  b.dfr_dAi = -2.0 * w.im;
  return b;
}

SplitMatrix recovery_pullback(Side side, const SplitVector& seed, const SingularTriplet& t) {
  const double floor = std::max(t.rank_tol, std::numeric_limits<double>::min());
  if (!(t.sigma > floor)) {
    throw NearZeroSigmaError("recovery_pullback: sigma " + std::to_string(t.sigma) + " is numerically zero");
  }
  const double inv = 1.0 / t.sigma;
  if (side == Side::left) {
    if (seed.size() != t.u.size()) throw DimensionError("recovery_pullback: seed length must equal len(u)");
    return inv * outer_adjoint(seed, t.v);
  }
  if (seed.size() != t.v.size()) throw DimensionError("recovery_pullback: seed length must equal len(v)");
  return inv * outer_adjoint(t.u, seed);
}

}  // namespace dsvd::rad
