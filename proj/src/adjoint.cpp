// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#include "dsvd/adjoint.hpp"

#include <cmath>

#include "dsvd/rad.hpp"

namespace dsvd {

AdjointVector::AdjointVector(Method kind, RealVector psi, Index rows_a) : kind_(kind), psi_(std::move(psi)) {
  const Index size = psi_.size();
  if (kind == Method::semm) {
    const Index m = rows_a;
    const Index n = (size - 2 - 2 * m) / 2;
    if (m < 1 || n < 1 || 2 * m + 2 * n + 2 != size) throw DimensionError("AdjointVector: bad embedding layout");
    slots_ = {{"v_r", 0, m}, {"v_i", m, m}, {"u_r", 2 * m, n}, {"u_i", 2 * m + n, n},
              {"m", 2 * m + 2 * n, 1}, {"p", 2 * m + 2 * n + 1, 1}};
  } else {
    const Index n = (size - 2) / 2;
    if (n < 1 || 2 * n + 2 != size) throw DimensionError("AdjointVector: bad eigen-form layout");
    slots_ = {{"main_r", 0, n}, {"main_i", n, n}, {"m", 2 * n, 1}, {"p", 2 * n + 1, 1}};
  }
}

RealVector AdjointVector::block(std::string_view name) const {
  for (const Slot& s : slots_) {
    if (s.name == name) return psi_.segment(s.offset, s.length);
  }
  throw DimensionError("AdjointVector: no block named " + std::string(name));
}

std::vector<std::string> AdjointVector::block_names() const {
  std::vector<std::string> names;
  for (const Slot& s : slots_) names.push_back(s.name);
  return names;
}

namespace adjoint {
namespace {

PhaseConvention internal_convention(Method method) {
  return method == Method::rgmm ? PhaseConvention::right() : PhaseConvention::left();
}

}  // namespace

RealMatrix assemble(Method kind, const SplitMatrix& a, const SingularTriplet& t) {
  if (t.u.size() != a.rows() || t.v.size() != a.cols()) throw DimensionError("assemble: triplet does not match A");
  const double scale = kind == Method::semm ? std::max(1.0, t.sigma) : std::max(1.0, t.sigma * t.sigma);
  const double res = governing::residual(kind, a, t).lpNorm<Eigen::Infinity>();
  if (!(res <= 1e-11 * scale)) {
    throw StaleTripletError(std::string("assemble(") + to_string(kind) + "): governing residual " +
                            std::to_string(res) + " exceeds tolerance");
  }
  if (kind == Method::semm) return governing::semm_jacobian(a, governing::semm_state(t));
  const SplitMatrix d = gram(a, kind == Method::lgmm ? Side::left : Side::right);
  return governing::gmm_jacobian(d, governing::gmm_state(kind, t));
}

AdjointVector solve_adjoint(Method kind, const RealMatrix& m, const RealVector& rhs, Index rows_a) {
  if (m.rows() != m.cols() || m.rows() != rhs.size()) throw DimensionError("solve_adjoint: size mismatch");
  const RealMatrix mt = m.transpose();
  RealVector psi;
  try {
    const LuFactorization lu(mt);
    psi = lu.solve(rhs);
    // One refinement step keeps the residual at working precision for poorly scaled systems.
    psi += lu.solve(rhs - mt * psi);
  } catch (const SingularSystemError& e) {
    throw DegeneracyError(std::string("solve_adjoint: singular adjoint system (") + e.what() + ")");
  }
  const double tol = 1e-11 * (1.0 + rhs.lpNorm<Eigen::Infinity>());
  const double res = (mt * psi - rhs).lpNorm<Eigen::Infinity>();
  if (!(res < tol)) {
    throw DegeneracyError("solve_adjoint: residual " + std::to_string(res) + " above " + std::to_string(tol));
  }
  return AdjointVector(kind, std::move(psi), rows_a);
}

SplitMatrix gram_pullback(const AdjointVector& psi, const SingularTriplet& t) {
  if (psi.kind() == Method::semm) throw DimensionError("gram_pullback: needs an eigen-form adjoint");
  const SplitVector& phi = psi.kind() == Method::lgmm ? t.u : t.v;
  const SplitVector main(psi.block("main_r"), psi.block("main_i"));
  if (main.size() != phi.size()) throw DimensionError("gram_pullback: adjoint does not match triplet");
  return outer_adjoint(main, phi);
}

SplitMatrix gram_chain_to_A(Method kind, const SplitMatrix& bar, const SplitMatrix& a) {
  const RealMatrix& ar = a.re;
  const RealMatrix& ai = a.im;
  const RealMatrix& br = bar.re;
  const RealMatrix& bi = bar.im;
  if (kind == Method::lgmm) {
    if (bar.rows() != a.rows() || bar.cols() != a.rows()) throw DimensionError("gram_chain_to_A: B-bar must be m x m");
    const RealMatrix sym = br + br.transpose();
    const RealMatrix skew = bi - bi.transpose();
    return {sym * ar - skew * ai, sym * ai + skew * ar};
  }
  if (kind == Method::rgmm) {
    if (bar.rows() != a.cols() || bar.cols() != a.cols()) throw DimensionError("gram_chain_to_A: C-bar must be n x n");
    const RealMatrix sym = br + br.transpose();
    const RealMatrix skew = bi - bi.transpose();
    return {ar * sym - ai * skew, ai * sym + ar * skew};
  }
  throw DimensionError("gram_chain_to_A: semm has no Gram matrix");
}

SplitMatrix semm_pullback(const AdjointVector& psi, const SingularTriplet& t) {
  if (psi.kind() != Method::semm) throw DimensionError("semm_pullback: needs an embedding-form adjoint");
  const SplitVector psi_v(psi.block("v_r"), psi.block("v_i"));
  const SplitVector psi_u(psi.block("u_r"), psi.block("u_i"));
  return outer_adjoint(psi_v, t.v) + outer_adjoint(t.u, psi_u);
}

GradientBundle total_gradient(Method method, const SplitMatrix& a, const SingularTriplet& t,
                              const ObjectiveSpec& obj) {
  a.require_finite("total_gradient");
  const ObjectiveSpec lifted = gauge_lifted(obj, t.convention);
  const SingularTriplet in = governing::enforce_phase(t, internal_convention(method));
  const Index m = a.rows();
  const Index n = a.cols();
  const double sigma = in.sigma;

  const StateJacobian jac = state_gradient(lifted, in.u, in.v, sigma, a);
  const GradientBundle partial = matrix_partial(lifted, in.u, in.v, sigma, a);
  const RealMatrix sys = assemble(method, a, in);

  GradientBundle out = GradientBundle::zeros(m, n);
  for (int part = 0; part < 2; ++part) {
    const RealVector& g = part == 0 ? jac.fr : jac.fi;
    const SplitVector gu(g.segment(0, m), g.segment(m, m));
    const SplitVector gv(g.segment(2 * m, n), g.segment(2 * m + n, n));
    const double g_sigma = g[2 * m + 2 * n];
    SplitMatrix direct(part == 0 ? partial.dfr_dAr : partial.dfi_dAr, part == 0 ? partial.dfr_dAi : partial.dfi_dAi);
    SplitMatrix through_residual;

    if (method == Method::semm) {
      const AdjointVector psi = solve_adjoint(method, sys, g, m);
      through_residual = semm_pullback(psi, in);
    } else {
      // Reduce to the eigen-form state: the non-eigenvector is recovered from phi and sigma.
      const bool left = method == Method::lgmm;
      const SplitVector& g_other = left ? gv : gu;
      const SplitVector& other = left ? in.v : in.u;
      const SplitVector lifted_other = left ? a * g_other : a.adjoint() * g_other;
      const SplitVector& g_phi_direct = left ? gu : gv;
      const SplitVector g_phi(g_phi_direct.re + lifted_other.re / sigma, g_phi_direct.im + lifted_other.im / sigma);
      double ip_re = 0.0;
      double ip_im = 0.0;
      inner(g_other, other, ip_re, ip_im);
      const double g_sigma_total = g_sigma - ip_re / sigma;
      direct = direct + rad::recovery_pullback(left ? Side::right : Side::left, g_other, in);

      const Index len = g_phi.size();
      RealVector rhs(2 * len + 2);
      rhs << g_phi.re, g_phi.im, g_sigma_total / (2.0 * sigma), 0.0;
      const AdjointVector psi = solve_adjoint(method, sys, rhs, m);
      through_residual = gram_chain_to_A(method, gram_pullback(psi, in), a);
    }

    const SplitMatrix total = direct - through_residual;
    (part == 0 ? out.dfr_dAr : out.dfi_dAr) = total.re;
    (part == 0 ? out.dfr_dAi : out.dfi_dAi) = total.im;
  }
  return out;
}

}  // namespace adjoint
}  // namespace dsvd
