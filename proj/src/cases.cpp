// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#include "dsvd/cases.hpp"

namespace dsvd::cases {
namespace {

SplitVector complex_vector(std::initializer_list<std::pair<double, double>> entries) {
  SplitVector x(static_cast<Index>(entries.size()));
  Index k = 0;
  for (const auto& [re, im] : entries) {
    x.re[k] = re;
    x.im[k] = im;
    ++k;
  }
  return x;
}

}  // namespace

GoldenCase square() {
  RealMatrix ar(3, 3), ai(3, 3);
  ar << -1.01, 0.86, -31.42,
         3.98, 0.53, -7.04,
         3.3, 8.26, -3.89;
  ai << 0.6, 0.79, 5.47,
        7.21, 1.9, 0.58,
        3.42, 8.97, 0.3;
  const SplitVector c = complex_vector({{0.16, 0.78}, {0.53, 0.11}, {0.11, 0.77}});
  return {"square", SplitMatrix(ar, ai), {c, c, 1.0, 1.0}, PhaseConvention::independent()};
}

GoldenCase rect() {
  RealMatrix ar(4, 2), ai(4, 2);
  ar << 6.3, 5,
        -5.35, 0.62,
        -7.49, -1.6,
        -0.15, 0.71;
  ai << 4.49, -9.95,
        -1.23, 7.29,
        6.17, -1.9,
        -4.89, -3.63;
  const SplitVector cu = complex_vector({{0.12, 0.67}, {0.56, 3.67}, {0.46, 2.96}, {2.89, 1.48}});
  const SplitVector cv = complex_vector({{7.12, 0.97}, {0.26, 6.47}});
  return {"rect", SplitMatrix(ar, ai), {cu, cv, 1.0, 1.0}, PhaseConvention::independent()};
}

}  // namespace dsvd::cases
