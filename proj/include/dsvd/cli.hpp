// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dsvd::cli {

enum class Subcommand { verify, grad, pod_sens };
enum class CaseKind { square, rect, file };
enum class MethodChoice { lgmm, rgmm, semm, rad, all };

enum ExitCode : int {
  kPass = 0,
  kThresholdFail = 1,
  kDegenerate = 2,
  kInputError = 3,
};

struct RunConfig {
  Subcommand subcommand = Subcommand::verify;
  MethodChoice method = MethodChoice::all;
  CaseKind case_kind = CaseKind::square;
  std::string matrix_path;
  std::string objective_path;
  std::string json_out;
  double eps = 1e-6;
  std::vector<int> modes{1};  // 1-based
  bool chain_centering = false;
  bool check = false;
  int threshold = 5;
  std::uint64_t seed = 1;
};

/// Each returns an ExitCode; JSON goes to `out` unless cfg.json_out is set.
int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_grad(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_pod_sens(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Dispatches on cfg.subcommand and maps library errors onto exit codes.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv and runs; command-line errors map to kInputError.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace dsvd::cli
