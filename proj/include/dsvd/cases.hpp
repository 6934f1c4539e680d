// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "dsvd/core.hpp"
#include "dsvd/objective.hpp"

namespace dsvd::cases {

/// Built-in verification problem: matrix, linear objective, and the gauge
/// under which its reference derivatives are defined.
struct GoldenCase {
  std::string name;
  SplitMatrix a;
  LinearObjectiveParams objective;
  PhaseConvention convention;
};

/// 3x3 complex matrix with dominant sigma ~ 33.16.
GoldenCase square();
/// 4x2 complex matrix with dominant sigma ~ 17.28.
GoldenCase rect();

}  // namespace dsvd::cases
