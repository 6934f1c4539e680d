// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#include "dsvd/governing.hpp"

#include <cmath>
#include <limits>

namespace dsvd {

const char* to_string(Method m) {
  switch (m) {
    case Method::lgmm:
      return "lgmm";
    case Method::rgmm:
      return "rgmm";
    case Method::semm:
      return "semm";
  }
  return "?";
}

RealVector SemmState::stacked() const {
  RealVector w(state_size());
  w << u.re, u.im, v.re, v.im, sigma_re, sigma_im;
  return w;
}

void SemmState::set_stacked(const RealVector& w) {
  const Index m = u.size();
  const Index n = v.size();
  if (w.size() != state_size()) throw DimensionError("SemmState: stacked length mismatch");
  u.re = w.segment(0, m);
  u.im = w.segment(m, m);
  v.re = w.segment(2 * m, n);
  v.im = w.segment(2 * m + n, n);
  sigma_re = w[2 * m + 2 * n];
  sigma_im = w[2 * m + 2 * n + 1];
}

namespace governing {
namespace {

constexpr double kPivotFloor = 1e-14;

struct Phase {
  double c = 1.0;
  double s = 0.0;
};

// Unit phase p with p * x_k real and of the requested sign.
Phase anchoring_phase(const SplitVector& x, Index k, PivotSign sign) {
  const double a = x.re[k];
  const double b = x.im[k];
  const double rho = std::hypot(a, b);
  if (!(rho >= kPivotFloor)) {
    throw DegeneratePivotError("phase pivot entry " + std::to_string(k) + " has magnitude " + std::to_string(rho));
  }
  double target = 1.0;
  if (sign == PivotSign::negative) target = -1.0;
  if (sign == PivotSign::keep) target = a < 0.0 ? -1.0 : 1.0;
  return {target * a / rho, -target * b / rho};
}

SplitVector rotate(const SplitVector& x, Phase p) { return x.rotated(p.c, p.s); }

// Gradient pullback for a group of vectors rotated by the phase anchored on group[anchor] at entry k.
void pull_group(const std::vector<const SplitVector*>& xs, const std::vector<const SplitVector*>& gs,
                std::vector<SplitVector*> outs, std::size_t anchor, Index k, PivotSign sign) {
  const Phase p = anchoring_phase(*xs[anchor], k, sign);
  double sr = 0.0;
  double si = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const SplitVector& x = *xs[j];
    const SplitVector& g = *gs[j];
    sr += g.re.dot(x.re) + g.im.dot(x.im);
    si += g.re.dot(x.im) - g.im.dot(x.re);
    // conj(p) * g
    *outs[j] = SplitVector(p.c * g.re + p.s * g.im, p.c * g.im - p.s * g.re);
  }
  const double t = p.c * si + p.s * sr;
  const double a = xs[anchor]->re[k];
  const double b = xs[anchor]->im[k];
  const double rho2 = a * a + b * b;
  outs[anchor]->re[k] += -t * b / rho2;
  outs[anchor]->im[k] += t * a / rho2;
}

}  // namespace

Index pivot_index(const SplitVector& x, const PhaseConvention& pc) {
  if (x.size() == 0) throw DimensionError("pivot_index: empty vector");
  if (pc.fixed_pivot) {
    const Index k = *pc.fixed_pivot;
    if (k < 0 || k >= x.size()) {
      throw DimensionError("fixed pivot " + std::to_string(k) + " outside vector of length " + std::to_string(x.size()));
    }
    return k;
  }
  Index best = 0;
  double best_mag = -1.0;
  for (Index j = 0; j < x.size(); ++j) {
    const double mag = x.re[j] * x.re[j] + x.im[j] * x.im[j];
    if (mag > best_mag) {
      best_mag = mag;
      best = j;
    }
  }
  return best;
}

SingularTriplet enforce_phase(const SingularTriplet& t, const PhaseConvention& pc) {
  if (!(t.sigma > 0.0)) throw NearZeroSigmaError("enforce_phase: sigma must be positive");
  const bool on_right = pc.anchor == Anchor::right_vector;
  const SplitVector& x = on_right ? t.v : t.u;
  const Index k = pivot_index(x, pc);
  const Phase p = anchoring_phase(x, k, pc.sign);

  SingularTriplet out = t;
  out.u = rotate(t.u, p);
  out.v = rotate(t.v, p);
  (on_right ? out.v : out.u).im[k] = 0.0;
  out.convention = pc;
  out.pivot = k;
  out.anchored = true;
  return out;
}

GaugeView gauge_view(const SplitVector& u, const SplitVector& v, const PhaseConvention& pc) {
  if (pc.anchor == Anchor::independent) {
    const Index ku = pivot_index(u, pc);
    const Index kv = pivot_index(v, pc);
    return {rotate(u, anchoring_phase(u, ku, pc.sign)), rotate(v, anchoring_phase(v, kv, pc.sign))};
  }
  const SplitVector& x = pc.anchor == Anchor::right_vector ? v : u;
  const Phase p = anchoring_phase(x, pivot_index(x, pc), pc.sign);
  return {rotate(u, p), rotate(v, p)};
}

GaugeView gauge_pullback(const SplitVector& u, const SplitVector& v, const PhaseConvention& pc,
                         const SplitVector& grad_u, const SplitVector& grad_v) {
  GaugeView out;
  if (pc.anchor == Anchor::independent) {
    pull_group({&u}, {&grad_u}, {&out.u}, 0, pivot_index(u, pc), pc.sign);
    pull_group({&v}, {&grad_v}, {&out.v}, 0, pivot_index(v, pc), pc.sign);
    return out;
  }
  const bool on_right = pc.anchor == Anchor::right_vector;
  const Index k = pivot_index(on_right ? v : u, pc);
  pull_group({&u, &v}, {&grad_u, &grad_v}, {&out.u, &out.v}, on_right ? 1 : 0, k, pc.sign);
  return out;
}

GmmState gmm_state(Method kind, const SingularTriplet& t) {
  if (kind == Method::semm) throw DimensionError("gmm_state: semm is not an eigen-form method");
  GmmState s;
  const bool left = kind == Method::lgmm;
  s.phi = left ? t.u : t.v;
  s.lambda_re = t.sigma * t.sigma;
  s.lambda_im = 0.0;
  const bool anchored_here = t.anchored && (left ? t.convention.anchor != Anchor::right_vector
                                                 : t.convention.anchor == Anchor::right_vector);
  s.pivot = anchored_here ? t.pivot : pivot_index(s.phi, PhaseConvention{});
  return s;
}

SemmState semm_state(const SingularTriplet& t) {
  SemmState s;
  s.u = t.u;
  s.v = t.v;
  s.sigma_re = t.sigma;
  s.sigma_im = 0.0;
  s.pivot = t.anchored && t.convention.anchor != Anchor::right_vector ? t.pivot : pivot_index(t.u, PhaseConvention{});
  return s;
}

SingularTriplet to_triplet(const SemmState& s, const PhaseConvention& pc) {
  SingularTriplet t;
  t.sigma = s.sigma_re;
  t.u = s.u;
  t.v = s.v;
  t.pivot = s.pivot;
  return enforce_phase(t, pc);
}

RealVector residual(Method kind, const SplitMatrix& a, const GmmState& s) {
  if (kind == Method::semm) throw DimensionError("residual: semm needs a SemmState");
  const SplitMatrix d = gram(a, kind == Method::lgmm ? Side::left : Side::right);
  const Index n = d.rows();
  if (s.phi.size() != n) throw DimensionError("residual: eigenvector length does not match Gram matrix");
  if (s.pivot < 0 || s.pivot >= n) throw DimensionError("residual: pivot out of range");
  const SplitVector dphi = d * s.phi;
  RealVector r(2 * n + 2);
  r.segment(0, n) = dphi.re - (s.lambda_re * s.phi.re - s.lambda_im * s.phi.im);
  r.segment(n, n) = dphi.im - (s.lambda_re * s.phi.im + s.lambda_im * s.phi.re);
  r[2 * n] = s.phi.squared_norm() - 1.0;
  r[2 * n + 1] = s.phi.im[s.pivot];
  return r;
}

RealVector residual(const SplitMatrix& a, const SemmState& s) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (s.u.size() != m || s.v.size() != n) throw DimensionError("residual: state does not match matrix shape");
  if (s.pivot < 0 || s.pivot >= m) throw DimensionError("residual: pivot out of range");
  const SplitVector av = a * s.v;
  const SplitVector ahu = a.adjoint() * s.u;
  RealVector r(2 * m + 2 * n + 2);
  r.segment(0, m) = av.re - (s.sigma_re * s.u.re - s.sigma_im * s.u.im);
  r.segment(m, m) = av.im - (s.sigma_re * s.u.im + s.sigma_im * s.u.re);
  r.segment(2 * m, n) = ahu.re - (s.sigma_re * s.v.re - s.sigma_im * s.v.im);
  r.segment(2 * m + n, n) = ahu.im - (s.sigma_re * s.v.im + s.sigma_im * s.v.re);
  r[2 * m + 2 * n] = s.u.squared_norm() - 1.0;
  r[2 * m + 2 * n + 1] = s.u.im[s.pivot];
  return r;
}

RealVector residual(Method kind, const SplitMatrix& a, const SingularTriplet& t) {
  if (kind == Method::semm) return residual(a, semm_state(t));
  return residual(kind, a, gmm_state(kind, t));
}

RealMatrix gmm_jacobian(const SplitMatrix& d, const GmmState& s) {
  const Index n = d.rows();
  const RealMatrix eye = RealMatrix::Identity(n, n);
  RealMatrix j = RealMatrix::Zero(2 * n + 2, 2 * n + 2);
  j.block(0, 0, n, n) = d.re - s.lambda_re * eye;
  j.block(0, n, n, n) = -d.im + s.lambda_im * eye;
  j.block(n, 0, n, n) = d.im - s.lambda_im * eye;
  j.block(n, n, n, n) = d.re - s.lambda_re * eye;
  j.block(0, 2 * n, n, 1) = -s.phi.re;
  j.block(0, 2 * n + 1, n, 1) = s.phi.im;
  j.block(n, 2 * n, n, 1) = -s.phi.im;
  j.block(n, 2 * n + 1, n, 1) = -s.phi.re;
  j.block(2 * n, 0, 1, n) = 2.0 * s.phi.re.transpose();
  j.block(2 * n, n, 1, n) = 2.0 * s.phi.im.transpose();
  j(2 * n + 1, n + s.pivot) = 1.0;
  return j;
}

RealMatrix semm_jacobian(const SplitMatrix& a, const SemmState& s) {
  const Index m = a.rows();
  const Index n = a.cols();
  const double sr = s.sigma_re;
  const double si = s.sigma_im;
  const RealMatrix im_ = RealMatrix::Identity(m, m);
  const RealMatrix in_ = RealMatrix::Identity(n, n);
  const Index ur = 0, ui = m, vr = 2 * m, vi = 2 * m + n, sg = 2 * m + 2 * n;
  RealMatrix j = RealMatrix::Zero(sg + 2, sg + 2);

  // Re(A v - sigma u)
  j.block(0, ur, m, m) = -sr * im_;
  j.block(0, ui, m, m) = si * im_;
  j.block(0, vr, m, n) = a.re;
  j.block(0, vi, m, n) = -a.im;
  j.block(0, sg, m, 1) = -s.u.re;
  j.block(0, sg + 1, m, 1) = s.u.im;
  // Im(A v - sigma u)
  j.block(m, ur, m, m) = -si * im_;
  j.block(m, ui, m, m) = -sr * im_;
  j.block(m, vr, m, n) = a.im;
  j.block(m, vi, m, n) = a.re;
  j.block(m, sg, m, 1) = -s.u.im;
  j.block(m, sg + 1, m, 1) = -s.u.re;
  // Re(A^H u - sigma v)
  j.block(2 * m, ur, n, m) = a.re.transpose();
  j.block(2 * m, ui, n, m) = a.im.transpose();
  j.block(2 * m, vr, n, n) = -sr * in_;
  j.block(2 * m, vi, n, n) = si * in_;
  j.block(2 * m, sg, n, 1) = -s.v.re;
  j.block(2 * m, sg + 1, n, 1) = s.v.im;
  // Im(A^H u - sigma v)
  j.block(2 * m + n, ur, n, m) = -a.im.transpose();
  j.block(2 * m + n, ui, n, m) = a.re.transpose();
  j.block(2 * m + n, vr, n, n) = -si * in_;
  j.block(2 * m + n, vi, n, n) = -sr * in_;
  j.block(2 * m + n, sg, n, 1) = -s.v.im;
  j.block(2 * m + n, sg + 1, n, 1) = -s.v.re;

  j.block(sg, ur, 1, m) = 2.0 * s.u.re.transpose();
  j.block(sg, ui, 1, m) = 2.0 * s.u.im.transpose();
  j(sg + 1, ui + s.pivot) = 1.0;
  return j;
}

SemmState newton_refine(const SplitMatrix& a, const SemmState& s, int max_iter, std::optional<double> tol,
                        NewtonTrace* trace) {
  a.require_finite("newton_refine");
  const double stop = tol ? *tol : 1e-13 * jacobi_svd(a).triplets.front().sigma;
  SemmState cur = s;
  for (int it = 0;; ++it) {
    const RealVector r = residual(a, cur);
    const double rn = r.lpNorm<Eigen::Infinity>();
    if (trace) trace->residuals.push_back(rn);
    if (!std::isfinite(rn)) throw ConvergenceError("newton_refine: residual became non-finite");
    if (rn < stop) return cur;
    if (it == max_iter) break;
    RealVector step;
    try {
      step = lu_solve(semm_jacobian(a, cur), -r);
    } catch (const SingularSystemError& e) {
      throw DegeneracyError(std::string("newton_refine: singular Jacobian, singular value likely repeated (") +
                            e.what() + ")");
    }
    cur.set_stacked(cur.stacked() + step);
  }
  throw ConvergenceError("newton_refine: residual above " + std::to_string(stop) + " after " +
                         std::to_string(max_iter) + " iterations");
}

SingularTriplet select_triplet(const SvdResult& res, Index index, double gap_tol) {
  const Index count = static_cast<Index>(res.triplets.size());
  if (index < 0 || index >= count) {
    throw DimensionError("select_triplet: index " + std::to_string(index) + " outside " + std::to_string(count) +
                         " triplets");
  }
  const double sigma1 = res.triplets.front().sigma;
  const double sigma = res.triplets[static_cast<std::size_t>(index)].sigma;
  if (!(sigma > res.rank_tol) || sigma <= 0.0) {
    throw RankError("select_triplet: singular value " + std::to_string(index) + " is numerically zero");
  }
  for (Index j = 0; j < count; ++j) {
    if (j == index) continue;
    const double gap = std::abs(sigma - res.triplets[static_cast<std::size_t>(j)].sigma);
    if (!(gap > gap_tol * sigma1)) {
      throw RepeatedSingularValueError("select_triplet: singular values " + std::to_string(index) + " and " +
                                       std::to_string(j) + " are not distinct (gap " + std::to_string(gap) + ")");
    }
  }
  return res.triplets[static_cast<std::size_t>(index)];
}

SingularTriplet solve_triplet(const SplitMatrix& a, Index index, const PhaseConvention& pc, double gap_tol) {
  const SvdResult res = jacobi_svd(a);
  SingularTriplet t = select_triplet(res, index, gap_tol);
  const double sigma1 = res.triplets.front().sigma;
  // Refinement runs on the u-anchored embedding form; the caller's convention is applied afterwards.
  PhaseConvention on_u = pc;
  if (on_u.anchor != Anchor::left_vector) on_u = PhaseConvention::left();
  SemmState s = semm_state(enforce_phase(t, on_u));
  s = newton_refine(a, s, 12, 1e-13 * sigma1);
  SingularTriplet out = to_triplet(s, pc);
  out.rank_tol = res.rank_tol;
  return out;
}

}  // namespace governing
}  // namespace dsvd
