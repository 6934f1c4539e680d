// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dsvd/core.hpp"

namespace dsvd {
namespace {

constexpr int kMaxSweeps = 80;

// Orthogonalizes the columns of the tall matrix (wr, wi) in place and
// accumulates the right rotations into (vr, vi).
void hestenes_sweeps(RealMatrix& wr, RealMatrix& wi, RealMatrix& vr, RealMatrix& vi) {
  const Index m = wr.rows();
  const Index n = wr.cols();
  const double tol = std::numeric_limits<double>::epsilon() * std::max(1.0, std::sqrt(static_cast<double>(m)));

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double alpha = wr.col(p).squaredNorm() + wi.col(p).squaredNorm();
        const double beta = wr.col(q).squaredNorm() + wi.col(q).squaredNorm();
        const double gr = wr.col(p).dot(wr.col(q)) + wi.col(p).dot(wi.col(q));
        const double gi = wr.col(p).dot(wi.col(q)) - wi.col(p).dot(wr.col(q));
        const double g = std::hypot(gr, gi);
        if (g == 0.0 || g <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;

        // Remove the phase of col_p^H col_q from column q, then apply a real rotation.
        const double pc = gr / g;
        const double ps = -gi / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;

        auto rotate = [&](RealMatrix& xr, RealMatrix& xi) {
          for (Index r = 0; r < xr.rows(); ++r) {
            const double ar = xr(r, p);
            const double ai = xi(r, p);
            const double br = pc * xr(r, q) - ps * xi(r, q);
            const double bi = ps * xr(r, q) + pc * xi(r, q);
            xr(r, p) = c * ar - s * br;
            xi(r, p) = c * ai - s * bi;
            xr(r, q) = s * ar + c * br;
            xi(r, q) = s * ai + c * bi;
          }
        };
        rotate(wr, wi);
        rotate(vr, vi);
      }
    }
    if (!rotated) return;
  }
  throw ConvergenceError("jacobi_svd: no convergence after " + std::to_string(kMaxSweeps) + " sweeps");
}

// Replaces columns at or past `start` with unit vectors orthogonal to all earlier columns.
void complete_basis(RealMatrix& ur, RealMatrix& ui, Index start) {
  const Index m = ur.rows();
  Index candidate = 0;
  for (Index j = start; j < ur.cols(); ++j) {
    for (; candidate < m; ++candidate) {
      RealVector xr = RealVector::Unit(m, candidate);
      RealVector xi = RealVector::Zero(m);
      for (int pass = 0; pass < 2; ++pass) {
        for (Index k = 0; k < j; ++k) {
          const double cr = ur.col(k).dot(xr) + ui.col(k).dot(xi);
          const double ci = ur.col(k).dot(xi) - ui.col(k).dot(xr);
          xr -= cr * ur.col(k) - ci * ui.col(k);
          xi -= cr * ui.col(k) + ci * ur.col(k);
        }
      }
      const double nrm = std::sqrt(xr.squaredNorm() + xi.squaredNorm());
      if (nrm > 0.5) {
        ur.col(j) = xr / nrm;
        ui.col(j) = xi / nrm;
        ++candidate;
        break;
      }
    }
  }
}

}  // namespace

SvdResult jacobi_svd(const SplitMatrix& a) {
  if (a.rows() < 1 || a.cols() < 1) throw DimensionError("jacobi_svd: empty matrix");
  a.require_finite("jacobi_svd");

  const bool wide = a.rows() < a.cols();
  const SplitMatrix w = wide ? a.adjoint() : a;
  const Index m = w.rows();
  const Index n = w.cols();

  RealMatrix wr = w.re;
  RealMatrix wi = w.im;
  RealMatrix vr = RealMatrix::Identity(n, n);
  RealMatrix vi = RealMatrix::Zero(n, n);
  hestenes_sweeps(wr, wi, vr, vi);

  RealVector norms(n);
  for (Index j = 0; j < n; ++j) norms[j] = std::sqrt(wr.col(j).squaredNorm() + wi.col(j).squaredNorm());
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return norms[x] > norms[y]; });

  const double sigma_max = norms[order[0]];
  const double rank_tol = 1e-12 * sigma_max;

  RealMatrix ur(m, n), ui(m, n), rvr(n, n), rvi(n, n);
  RealVector sig(n);
  Index nonzero = 0;
  for (Index j = 0; j < n; ++j) {
    const Index src = order[static_cast<std::size_t>(j)];
    sig[j] = norms[src];
    rvr.col(j) = vr.col(src);
    rvi.col(j) = vi.col(src);
    if (sig[j] > rank_tol && sig[j] > 0.0) {
      ur.col(j) = wr.col(src) / sig[j];
      ui.col(j) = wi.col(src) / sig[j];
      nonzero = j + 1;
    }
  }
  complete_basis(ur, ui, nonzero);

  SvdResult out;
  out.rank_tol = rank_tol;
  out.triplets.reserve(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    SingularTriplet t;
    t.sigma = sig[j];
    SplitVector left(ur.col(j), ui.col(j));
    SplitVector right(rvr.col(j), rvi.col(j));
    if (wide) {
      t.u = std::move(right);
      t.v = std::move(left);
    } else {
      t.u = std::move(left);
      t.v = std::move(right);
    }
    t.rank_tol = rank_tol;
    out.triplets.push_back(std::move(t));
  }
  return out;
}

SvdResult jacobi_svd(const RealMatrix& a) { return jacobi_svd(SplitMatrix::from_real(a)); }

}  // namespace dsvd
