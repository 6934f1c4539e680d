// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dsvd/core.hpp"
#include "dsvd/objective.hpp"

namespace dsvd::verify {

struct FdOptions {
  double eps = 1e-6;
  bool central = false;  ///< forward differences unless set
  Index index = 0;       ///< which singular triplet (0 = dominant)
  PhaseConvention convention;
  double gap_tol = 1e-8;
};

/// Finite-difference bundle: every probe A + eps E_pq and A + i eps E_pq
/// re-solves the SVD and re-anchors with opt.convention before evaluating f.
GradientBundle fd_gradient(const ObjectiveSpec& obj, const SplitMatrix& a, const FdOptions& opt = {});

/// f at the anchored triplet opt.index of A.
ObjectiveValue evaluate(const ObjectiveSpec& obj, const SplitMatrix& a, const FdOptions& opt = {});

/// floor(-log10(|a - b| / max(|a|, |b|))) clamped to [0, 16].
int matched_digits(double a, double b);

struct DigitEntry {
  std::string block;
  Index i = 0;  // 0-based
  Index j = 0;
  double analytic = 0.0;
  double fd = 0.0;
  int digits = 0;
};

struct DigitReport {
  std::vector<DigitEntry> entries;
  int min_digits = 16;

  /// {"min_digits": n, "entries": [{"block", "i", "j", "analytic", "fd", "digits"}]}, 1-based i, j.
  nlohmann::json to_json() const;
};

DigitReport compare(const GradientBundle& analytic, const GradientBundle& fd);

/// -log10(max|a - b| / max|a|), clamped to [0, 16]; scale-aware agreement for whole bundles.
double normwise_digits(const GradientBundle& a, const GradientBundle& b);

}  // namespace dsvd::verify
