// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#include "dsvd/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "dsvd/adjoint.hpp"
#include "dsvd/cases.hpp"
#include "dsvd/json_out.hpp"
#include "dsvd/pod.hpp"
#include "dsvd/rad.hpp"
#include "dsvd/verify.hpp"

namespace dsvd::cli {
namespace {

using nlohmann::json;

constexpr double kCrossMethodDigits = 9.0;

struct Problem {
  std::string name;
  SplitMatrix a;
  LinearObjectiveParams params;
  bool sigma_only = false;
  PhaseConvention convention;
};

bool is_sigma_objective(const LinearObjectiveParams& p) {
  return p.c_u.squared_norm() == 0.0 && p.c_v.squared_norm() == 0.0 && p.c_A == 0.0 && p.c_sigma == 1.0;
}

LinearObjectiveParams sigma_params(Index m, Index n) { return {SplitVector(m), SplitVector(n), 1.0, 0.0}; }

Problem load_problem(const RunConfig& cfg) {
  Problem p;
  if (cfg.case_kind == CaseKind::file) {
    if (cfg.matrix_path.empty()) throw IoError("--case file requires --matrix");
    p.name = cfg.matrix_path;
    p.a = load_matrix_json(cfg.matrix_path);
    p.convention = PhaseConvention::left();
    if (cfg.objective_path.empty()) {
      p.params = sigma_params(p.a.rows(), p.a.cols());
    } else {
      p.params = load_linear_params(cfg.objective_path);
      if (p.params.c_u.size() != p.a.rows() || p.params.c_v.size() != p.a.cols()) {
        throw DimensionError("objective coefficients do not match the matrix shape");
      }
    }
  } else {
    const cases::GoldenCase g = cfg.case_kind == CaseKind::square ? cases::square() : cases::rect();
    p.name = g.name;
    p.a = g.a;
    p.params = g.objective;
    p.convention = g.convention;
    // The closed-form route only differentiates sigma.
    if (cfg.method == MethodChoice::rad) p.params = sigma_params(p.a.rows(), p.a.cols());
  }
  p.sigma_only = is_sigma_objective(p.params);
  if (cfg.method == MethodChoice::rad && !p.sigma_only) {
    throw ParseError("--method rad requires the objective f = sigma");
  }
  return p;
}

std::vector<std::string> methods_for(MethodChoice choice, bool sigma_only) {
  switch (choice) {
    case MethodChoice::lgmm:
      return {"lgmm"};
    case MethodChoice::rgmm:
      return {"rgmm"};
    case MethodChoice::semm:
      return {"semm"};
    case MethodChoice::rad:
      return {"rad"};
    case MethodChoice::all:
      break;
  }
  std::vector<std::string> all{"lgmm", "rgmm", "semm"};
  if (sigma_only) all.push_back("rad");
  return all;
}

GradientBundle bundle_for(const std::string& method, const Problem& p, const SingularTriplet& t,
                          const ObjectiveSpec& obj) {
  if (method == "rad") {
    const SplitMatrix g = rad::sigma_grad_complex(t);
    GradientBundle b = GradientBundle::zeros(g.rows(), g.cols());
    b.dfr_dAr = g.re;
    b.dfr_dAi = g.im;
    return b;
  }
  const Method m = method == "lgmm" ? Method::lgmm : method == "rgmm" ? Method::rgmm : Method::semm;
  return adjoint::total_gradient(m, p.a, t, obj);
}

void emit(const RunConfig& cfg, const json& doc, std::ostream& out, const std::string& summary) {
  const std::string text = dump_json(doc);
  if (cfg.json_out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.json_out, std::ios::binary);
  if (!file) throw IoError("cannot write " + cfg.json_out);
  file << text;
  if (!file) throw IoError("write failed for " + cfg.json_out);
  out << summary << "\n";
}

json bundle_json(const GradientBundle& b) {
  return {{"dfr_dAr", json_rows(b.dfr_dAr)},
          {"dfr_dAi", json_rows(b.dfr_dAi)},
          {"dfi_dAr", json_rows(b.dfi_dAr)},
          {"dfi_dAi", json_rows(b.dfi_dAi)}};
}

std::string base_path(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.rfind('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return path.substr(0, dot);
  return path;
}

}  // namespace

int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const Problem p = load_problem(cfg);
  const ObjectiveSpec obj = p.sigma_only ? sigma_objective() : linear_objective(p.params);
  const SingularTriplet t = governing::solve_triplet(p.a, 0, p.convention);

  verify::FdOptions fd_opt;
  fd_opt.eps = cfg.eps;
  fd_opt.convention = p.convention;
  const GradientBundle fd = verify::fd_gradient(obj, p.a, fd_opt);

  json entries = json::array();
  json per_method = json::object();
  int min_digits = 16;
  std::vector<std::pair<std::string, GradientBundle>> bundles;
  for (const std::string& method : methods_for(cfg.method, p.sigma_only)) {
    GradientBundle b = bundle_for(method, p, t, obj);
    const verify::DigitReport rep = verify::compare(b, fd);
    min_digits = std::min(min_digits, rep.min_digits);
    const json rep_json = rep.to_json();
    for (json e : rep_json["entries"]) {
      e["method"] = method;
      entries.push_back(std::move(e));
    }
    per_method[method] = {{"min_digits", rep.min_digits}, {"gradient", bundle_json(b)}};
    bundles.emplace_back(method, std::move(b));
  }

  double cross = 16.0;
  for (std::size_t i = 0; i < bundles.size(); ++i)
    for (std::size_t j = i + 1; j < bundles.size(); ++j)
      cross = std::min(cross, verify::normwise_digits(bundles[i].second, bundles[j].second));

  const bool pass = min_digits >= cfg.threshold && cross >= kCrossMethodDigits;
  json doc = {{"case", p.name},
              {"m", p.a.rows()},
              {"n", p.a.cols()},
              {"sigma", t.sigma},
              {"eps", cfg.eps},
              {"threshold", cfg.threshold},
              {"objective", linear_params_to_json(p.params)},
              {"methods", per_method},
              {"min_digits", min_digits},
              {"cross_method_digits", cross},
              {"entries", entries},
              {"pass", pass}};
  emit(cfg, doc, out,
       std::string(pass ? "PASS" : "FAIL") + " min_digits=" + std::to_string(min_digits) +
           " cross_method_digits=" + std::to_string(cross));
  return pass ? kPass : kThresholdFail;
}

int run_grad(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const Problem p = load_problem(cfg);
  const ObjectiveSpec obj = p.sigma_only ? sigma_objective() : linear_objective(p.params);
  const SingularTriplet t = governing::solve_triplet(p.a, 0, p.convention);
  const std::string method = cfg.method == MethodChoice::all ? "semm" : methods_for(cfg.method, p.sigma_only).front();
  const GradientBundle b = bundle_for(method, p, t, obj);
  const rad::ComplexGradient w = rad::wirtinger_combine(b);
  const ObjectiveValue f = obj(t.u, t.v, t.sigma, p.a);
  json doc = bundle_json(b);
  doc["case"] = p.name;
  doc["method"] = method;
  doc["sigma"] = t.sigma;
  doc["f"] = {{"re", f.re}, {"im", f.im}};
  doc["wirtinger"] = {{"re", json_rows(w.re)}, {"im", json_rows(w.im)}};
  emit(cfg, doc, out, "gradient written to " + cfg.json_out);
  return kPass;
}

int run_pod_sens(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.matrix_path.empty()) throw IoError("pod-sens requires --matrix <snapshot file>");
  if (cfg.modes.empty()) throw ParseError("--modes must name at least one mode");
  for (int mode : cfg.modes) {
    if (mode < 1) throw ParseError("--modes are 1-based positive integers");
  }
  pod::SnapshotMatrix raw = pod::load_snapshots(cfg.matrix_path, pod::format_from_path(cfg.matrix_path));
  const double scale = raw.data.cwiseAbs().maxCoeff();
  pod::SnapshotMatrix centered = std::move(raw);
  pod::center_in_place(centered.data);
  const Index m = centered.states();
  const Index n = centered.snapshots();

  const int k = *std::max_element(cfg.modes.begin(), cfg.modes.end());
  if (k > n) throw RankError("mode " + std::to_string(k) + " exceeds the number of snapshots");
  const pod::PodResult r = pod::method_of_snapshots(centered, k);
  const double total_energy = r.eigenvalues.cwiseMax(0.0).sum();

  const std::string base = base_path(cfg.json_out.empty() ? cfg.matrix_path : cfg.json_out);
  const pod::SigmaProbe probe(centered.data, r);
  const double eps = 1e-6 * scale;

  json modes = json::array();
  int min_digits = 16;
  for (int mode : cfg.modes) {
    const Index i = mode - 1;
    const pod::RankOneField field = pod::sensitivity_factors(r, i, cfg.chain_centering);
    const std::string path = base + ".mode" + std::to_string(mode) + ".bin";
    pod::save_field_bin(path, field);
    json entry = {{"mode", mode},
                  {"sigma", r.sigmas[i]},
                  {"energy", r.eigenvalues[i] / total_energy},
                  {"field", path}};
    if (cfg.check) {
      std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(mode));
      std::uniform_int_distribution<Index> row(0, m - 1), col(0, n - 1);
      json checks = json::array();
      int mode_min = 16;
      for (int s = 0; s < 25; ++s) {
        const Index pi = row(rng);
        const Index qi = col(rng);
        const double analytic = field.at(pi, qi);
        const double fd = probe.central_difference(i, pi, qi, eps, cfg.chain_centering);
        const int digits = verify::matched_digits(analytic, fd);
        mode_min = std::min(mode_min, digits);
        checks.push_back({{"i", pi + 1}, {"j", qi + 1}, {"analytic", analytic}, {"fd", fd}, {"digits", digits}});
      }
      entry["check"] = {{"eps", eps}, {"min_digits", mode_min}, {"entries", checks}};
      min_digits = std::min(min_digits, mode_min);
    }
    modes.push_back(std::move(entry));
  }

  const bool pass = !cfg.check || min_digits >= cfg.threshold;
  json doc = {{"input", cfg.matrix_path},
              {"m", m},
              {"n", n},
              {"chain_centering", cfg.chain_centering},
              {"sigmas", json_array(r.sigmas)},
              {"energies", json_array(r.eigenvalues.head(k) / total_energy)},
              {"modes", modes}};
  if (cfg.check) {
    doc["min_digits"] = min_digits;
    doc["threshold"] = cfg.threshold;
    doc["pass"] = pass;
  }
  emit(cfg, doc, out, std::string(pass ? "PASS" : "FAIL") + " fields written with base " + base);
  return pass ? kPass : kThresholdFail;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.subcommand) {
      case Subcommand::verify:
        return run_verify(cfg, out, err);
      case Subcommand::grad:
        return run_grad(cfg, out, err);
      case Subcommand::pod_sens:
        return run_pod_sens(cfg, out, err);
    }
  } catch (const DegeneracyError& e) {
    err << "error: " << e.what() << "\n";
    return kDegenerate;
  } catch (const StaleTripletError& e) {
    err << "error: " << e.what() << "\n";
    return kDegenerate;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Derivatives of singular values and vectors of complex matrices"};
  app.require_subcommand(1);
  RunConfig cfg;

  const std::map<std::string, CaseKind> case_map{
      {"square", CaseKind::square}, {"rect", CaseKind::rect}, {"file", CaseKind::file}};
  const std::map<std::string, MethodChoice> method_map{{"lgmm", MethodChoice::lgmm},
                                                       {"rgmm", MethodChoice::rgmm},
                                                       {"semm", MethodChoice::semm},
                                                       {"rad", MethodChoice::rad},
                                                       {"all", MethodChoice::all}};

  auto add_problem_flags = [&](CLI::App* sub) {
    sub->add_option("--case", cfg.case_kind, "square | rect | file")
        ->transform(CLI::CheckedTransformer(case_map, CLI::ignore_case));
    sub->add_option("--method", cfg.method, "lgmm | rgmm | semm | rad | all")
        ->transform(CLI::CheckedTransformer(method_map, CLI::ignore_case));
    sub->add_option("--matrix", cfg.matrix_path, "matrix JSON for --case file");
    sub->add_option("--objective", cfg.objective_path, "linear objective JSON (default f = sigma)");
    sub->add_option("--json-out", cfg.json_out, "write the JSON report here instead of stdout");
  };

  CLI::App* verify_cmd = app.add_subcommand("verify", "compare adjoint gradients against finite differences");
  add_problem_flags(verify_cmd);
  verify_cmd->add_option("--eps", cfg.eps, "finite-difference step")->capture_default_str();
  verify_cmd->add_option("--threshold", cfg.threshold, "minimum matched digits")->capture_default_str();

  CLI::App* grad_cmd = app.add_subcommand("grad", "print the gradient bundle of one method");
  add_problem_flags(grad_cmd);

  CLI::App* pod_cmd = app.add_subcommand("pod-sens", "singular-value sensitivity fields of snapshot data");
  pod_cmd->add_option("--matrix", cfg.matrix_path, "snapshot file (.bin or .csv)")->required();
  pod_cmd->add_option("--modes", cfg.modes, "1-based mode indices")->delimiter(',');
  pod_cmd->add_flag("--chain-centering", cfg.chain_centering, "differentiate through mean removal");
  pod_cmd->add_flag("--check", cfg.check, "finite-difference spot check at 25 entries per mode");
  pod_cmd->add_option("--json-out", cfg.json_out, "sidecar JSON path; fields are written next to it");
  pod_cmd->add_option("--threshold", cfg.threshold, "minimum matched digits for --check")->capture_default_str();
  pod_cmd->add_option("--seed", cfg.seed, "seed for spot-check sampling")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  if (*verify_cmd) cfg.subcommand = Subcommand::verify;
  if (*grad_cmd) cfg.subcommand = Subcommand::grad;
  if (*pod_cmd) cfg.subcommand = Subcommand::pod_sens;
  return run(cfg, out, err);
}

}  // namespace dsvd::cli
