// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#include "dsvd/verify.hpp"

#include <algorithm>
#include <cmath>

namespace dsvd::verify {
namespace {

ObjectiveValue probe(const ObjectiveSpec& lifted, const SplitMatrix& a, const FdOptions& opt) {
  const SvdResult res = jacobi_svd(a);
  SingularTriplet t = governing::select_triplet(res, opt.index, opt.gap_tol);
  t = governing::enforce_phase(t, opt.convention);
  return lifted(t.u, t.v, t.sigma, a);
}

}  // namespace

ObjectiveValue evaluate(const ObjectiveSpec& obj, const SplitMatrix& a, const FdOptions& opt) {
  return probe(gauge_lifted(obj, opt.convention), a, opt);
}

GradientBundle fd_gradient(const ObjectiveSpec& obj, const SplitMatrix& a, const FdOptions& opt) {
  a.require_finite("fd_gradient");
  const ObjectiveSpec lifted = gauge_lifted(obj, opt.convention);
  const ObjectiveValue f0 = opt.central ? ObjectiveValue{} : probe(lifted, a, opt);
  GradientBundle g = GradientBundle::zeros(a.rows(), a.cols());
  SplitMatrix shifted = a;

  for (Index p = 0; p < a.rows(); ++p) {
    for (Index q = 0; q < a.cols(); ++q) {
      for (int part = 0; part < 2; ++part) {
        RealMatrix& block = part == 0 ? shifted.re : shifted.im;
        const double base = block(p, q);
        ObjectiveValue fp, fm;
        try {
          block(p, q) = base + opt.eps;
          fp = probe(lifted, shifted, opt);
          if (opt.central) {
            block(p, q) = base - opt.eps;
            fm = probe(lifted, shifted, opt);
          } else {
            fm = f0;
          }
        } catch (const DegeneracyError& e) {
          throw DegeneracyError("fd_gradient: degenerate SVD at perturbed entry (" + std::to_string(p + 1) + ", " +
                                std::to_string(q + 1) + ") of A_" + (part == 0 ? "r" : "i") + ": " + e.what());
        }
        block(p, q) = base;
        const double denom = opt.central ? 2.0 * opt.eps : opt.eps;
        (part == 0 ? g.dfr_dAr : g.dfr_dAi)(p, q) = (fp.re - fm.re) / denom;
        (part == 0 ? g.dfi_dAr : g.dfi_dAi)(p, q) = (fp.im - fm.im) / denom;
      }
    }
  }
  return g;
}

int matched_digits(double a, double b) {
  const double diff = std::abs(a - b);
  if (diff == 0.0) return 16;
  const double rel = diff / std::max({std::abs(a), std::abs(b), 1e-300});
  const double d = std::floor(-std::log10(rel));
  return static_cast<int>(std::clamp(d, 0.0, 16.0));
}

DigitReport compare(const GradientBundle& analytic, const GradientBundle& fd) {
  if (analytic.rows() != fd.rows() || analytic.cols() != fd.cols()) {
    throw DimensionError("compare: bundle shapes differ");
  }
  DigitReport rep;
  const std::pair<const char*, const RealMatrix GradientBundle::*> blocks[] = {
      {"dfr_dAr", &GradientBundle::dfr_dAr},
      {"dfr_dAi", &GradientBundle::dfr_dAi},
      {"dfi_dAr", &GradientBundle::dfi_dAr},
      {"dfi_dAi", &GradientBundle::dfi_dAi},
  };
  for (const auto& [name, member] : blocks) {
    const RealMatrix& x = analytic.*member;
    const RealMatrix& y = fd.*member;
    for (Index i = 0; i < x.rows(); ++i) {
      for (Index j = 0; j < x.cols(); ++j) {
        DigitEntry e{name, i, j, x(i, j), y(i, j), matched_digits(x(i, j), y(i, j))};
        rep.min_digits = std::min(rep.min_digits, e.digits);
        rep.entries.push_back(std::move(e));
      }
    }
  }
  return rep;
}

nlohmann::json DigitReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const DigitEntry& e : entries) {
    arr.push_back({{"block", e.block},
                   {"i", e.i + 1},
                   {"j", e.j + 1},
                   {"analytic", e.analytic},
                   {"fd", e.fd},
                   {"digits", e.digits}});
  }
  return {{"min_digits", min_digits}, {"entries", std::move(arr)}};
}

double normwise_digits(const GradientBundle& a, const GradientBundle& b) {
  const double diff = max_abs_diff(a, b);
  if (diff == 0.0) return 16.0;
  const double scale = std::max({a.max_abs(), b.max_abs(), 1e-300});
  return std::clamp(-std::log10(diff / scale), 0.0, 16.0);
}

}  // namespace dsvd::verify
