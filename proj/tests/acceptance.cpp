// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion. `--criterion N` runs one.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/QR>

#include "dsvd/adjoint.hpp"
#include "dsvd/cases.hpp"
#include "dsvd/pod.hpp"
#include "dsvd/rad.hpp"
#include "dsvd/verify.hpp"
#include "property_suite.hpp"

namespace dsvd {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// One tabulated entry: block, 0-based (i, j), value.
struct TableEntry {
  const RealMatrix GradientBundle::* block;
  Index i;
  Index j;
  double value;
};

using B = GradientBundle;

// Adjoint columns of the published verification tables (identical across LGMM, RGMM, SEMM).
const std::vector<TableEntry> kSquareAdjoint = {
    {&B::dfr_dAr, 0, 0, 1.006352961803713},  {&B::dfr_dAr, 0, 1, 0.043276271008604},
    {&B::dfr_dAr, 0, 2, -0.936930641525170}, {&B::dfr_dAi, 0, 0, 0.063695888970744},
    {&B::dfr_dAi, 0, 1, 0.082766443637231},  {&B::dfr_dAi, 0, 2, 0.156944460318835},
    {&B::dfi_dAr, 0, 0, -0.017846334274906}, {&B::dfi_dAr, 0, 1, 0.002833157022766},
    {&B::dfi_dAr, 0, 2, 0.006354411136774},  {&B::dfi_dAi, 0, 0, 1.006719107202561},
    {&B::dfi_dAi, 0, 1, 0.019954391307143},  {&B::dfi_dAi, 0, 2, 0.003910503966226},
};
const std::vector<TableEntry> kSquareFd = {
    {&B::dfr_dAr, 0, 0, 1.006352068344540},  {&B::dfr_dAr, 0, 1, 0.043275413474930},
    {&B::dfr_dAr, 0, 2, -0.936930476314046}, {&B::dfr_dAi, 0, 0, 0.063696809604608},
    {&B::dfr_dAi, 0, 1, 0.082767300568776},  {&B::dfr_dAi, 0, 2, 0.156946299512128},
    {&B::dfi_dAr, 0, 0, -0.017846180533354}, {&B::dfi_dAr, 0, 1, 0.002833298928806},
    {&B::dfi_dAr, 0, 2, 0.006354630599503},  {&B::dfi_dAi, 0, 0, 1.006719100082876},
    {&B::dfi_dAi, 0, 1, 0.019954295993330},  {&B::dfi_dAi, 0, 2, 0.003910511914285},
};
const std::vector<TableEntry> kRectAdjoint = {
    {&B::dfr_dAr, 0, 0, 1.846102900714162}, {&B::dfr_dAr, 0, 1, -0.006821647620363},
    {&B::dfr_dAi, 0, 0, 0.354647919899091}, {&B::dfr_dAi, 0, 1, -0.124582311966832},
    {&B::dfi_dAr, 0, 0, 0.227870193134751}, {&B::dfi_dAr, 0, 1, 0.353104252473483},
    {&B::dfi_dAi, 0, 0, 0.780271281223158}, {&B::dfi_dAi, 0, 1, 0.113513089065063},
};
const std::vector<TableEntry> kRectFd = {
    {&B::dfr_dAr, 0, 0, 1.846101064018058}, {&B::dfr_dAr, 0, 1, -0.006822084230862},
    {&B::dfr_dAi, 0, 0, 0.354647895051130}, {&B::dfr_dAi, 0, 1, -0.124581340799068},
    {&B::dfi_dAr, 0, 0, 0.227870147639919}, {&B::dfi_dAr, 0, 1, 0.353103555283951},
    {&B::dfi_dAi, 0, 0, 0.780273927247777}, {&B::dfi_dAi, 0, 1, 0.113512610866451},
};
// Singular-value gradients: dsigma/dA_r in dfr_dAr, dsigma/dA_i in dfr_dAi.
const std::vector<TableEntry> kSquareSigma = {
    {&B::dfr_dAr, 0, 0, 0.018703061899253},  {&B::dfr_dAr, 0, 1, 0.068881276214858},
    {&B::dfr_dAr, 0, 2, -0.934470093986586}, {&B::dfr_dAi, 0, 0, 0.080015153716675},
    {&B::dfr_dAi, 0, 1, 0.076615998520789},  {&B::dfr_dAi, 0, 2, 0.160118791389606},
};
const std::vector<TableEntry> kSquareSigmaFd = {
    {&B::dfr_dAr, 0, 0, 0.018702181137087},  {&B::dfr_dAr, 0, 1, 0.068880360970525},
    {&B::dfr_dAr, 0, 2, -0.934470051561220}, {&B::dfr_dAi, 0, 0, 0.080016050674203},
    {&B::dfr_dAi, 0, 1, 0.076616849753464},  {&B::dfr_dAi, 0, 2, 0.160120613657000},
};
const std::vector<TableEntry> kRectSigma = {
    {&B::dfr_dAr, 0, 0, 0.467749108787955}, {&B::dfr_dAr, 0, 1, 0.251572392322310},
    {&B::dfr_dAi, 0, 0, 0.303989439817427}, {&B::dfr_dAi, 0, 1, -0.463615299320613},
};
const std::vector<TableEntry> kRectSigmaFd = {
    {&B::dfr_dAr, 0, 0, 0.467748947130531}, {&B::dfr_dAr, 0, 1, 0.251571147913410},
    {&B::dfr_dAi, 0, 0, 0.303989750705114}, {&B::dfr_dAi, 0, 1, -0.463615023704733},
};

constexpr double kSigmaSquare = 33.16357940928816;
constexpr double kSigmaRect = 17.275386033399094;

double table_deviation(const GradientBundle& g, const std::vector<TableEntry>& table) {
  double worst = 0.0;
  for (const TableEntry& e : table) worst = std::max(worst, std::abs((g.*e.block)(e.i, e.j) - e.value));
  return worst;
}

GradientBundle as_bundle(const SplitMatrix& sigma_grad) {
  GradientBundle b = GradientBundle::zeros(sigma_grad.rows(), sigma_grad.cols());
  b.dfr_dAr = sigma_grad.re;
  b.dfr_dAi = sigma_grad.im;
  return b;
}

constexpr Method kMethods[] = {Method::lgmm, Method::rgmm, Method::semm};

// Largest table deviation over the three adjoint methods.
double golden_deviation(const cases::GoldenCase& c, const PhaseConvention& pc, const std::vector<TableEntry>& table) {
  const ObjectiveSpec obj = linear_objective(c.objective);
  const SingularTriplet t = governing::solve_triplet(c.a, 0, pc);
  double worst = 0.0;
  for (Method m : kMethods) worst = std::max(worst, table_deviation(adjoint::total_gradient(m, c.a, t, obj), table));
  return worst;
}

Outcome criterion1() {
  const auto t0 = Clock::now();
  const cases::GoldenCase c = cases::square();
  const double dev = golden_deviation(c, c.convention, kSquareAdjoint);
  const double secs = seconds_since(t0);
  return {dev <= 1e-11 && secs < 1.0,
          fmt("square table, LGMM/RGMM/SEMM: max |dev| = %.3e (tol 1e-11), runtime %.3f s (limit 1 s)", dev, secs)};
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  const cases::GoldenCase c = cases::rect();
  const PhaseConvention rect_pc{Anchor::right_vector, Index{0}, PivotSign::negative};
  const double dev = golden_deviation(c, rect_pc, kRectAdjoint);
  const double secs = seconds_since(t0);
  const double dev_independent = golden_deviation(c, c.convention, kRectAdjoint);
  return {dev <= 1e-11 && secs < 1.0,
          fmt("rect table under Im(v_1)=0, Re(v_1)<0: max |dev| = %.3e (tol 1e-11), runtime %.3f s; "
              "under separately anchored u, v: max |dev| = %.3e",
              dev, secs, dev_independent)};
}

Outcome criterion3() {
  const double sig_sq = jacobi_svd(cases::square().a).triplets[0].sigma;
  const double sig_rc = jacobi_svd(cases::rect().a).triplets[0].sigma;
  const double sigma_dev = std::max(std::abs(sig_sq - kSigmaSquare), std::abs(sig_rc - kSigmaRect));
  const auto rad_for = [](const cases::GoldenCase& c) {
    return as_bundle(rad::sigma_grad_complex(governing::solve_triplet(c.a, 0, PhaseConvention::left())));
  };
  const double grad_dev = std::max(table_deviation(rad_for(cases::square()), kSquareSigma),
                                   table_deviation(rad_for(cases::rect()), kRectSigma));
  return {sigma_dev <= 1e-11 && grad_dev <= 1e-11,
          fmt("sigma values: max |dev| = %.3e (tol 1e-11); RAD tables: max |dev| = %.3e (tol 1e-11)", sigma_dev,
              grad_dev)};
}

Outcome criterion4() {
  verify::FdOptions opt;  // forward, eps = 1e-6
  double fd_dev = 0.0;
  int min_digits = 16;
  for (const cases::GoldenCase& c : {cases::square(), cases::rect()}) {
    const bool square = c.name == "square";
    opt.convention = c.convention;
    const ObjectiveSpec obj = linear_objective(c.objective);
    const GradientBundle fd = verify::fd_gradient(obj, c.a, opt);
    fd_dev = std::max(fd_dev, table_deviation(fd, square ? kSquareFd : kRectFd));
    const GradientBundle fd_sigma = verify::fd_gradient(sigma_objective(), c.a, opt);
    fd_dev = std::max(fd_dev, table_deviation(fd_sigma, square ? kSquareSigmaFd : kRectSigmaFd));

    const SingularTriplet t = governing::solve_triplet(c.a, 0, c.convention);
    for (Method m : kMethods) {
      min_digits = std::min(min_digits, verify::compare(adjoint::total_gradient(m, c.a, t, obj), fd).min_digits);
    }
  }
  return {fd_dev <= 1e-12 && min_digits >= 5,
          fmt("FD columns: max |dev| = %.3e (tol 1e-12); adjoint vs FD min_digits = %d (need >= 5)", fd_dev,
              min_digits)};
}

struct RandomProblem {
  SplitMatrix a;
  ObjectiveSpec objective;
};

// 50 complex matrices from 3x3 up to 12x8 with random linear objectives.
const std::vector<RandomProblem>& random_set() {
  static const std::vector<RandomProblem> set = [] {
    std::mt19937_64 rng(20240501);
    std::vector<RandomProblem> out;
    for (int k = 0; k < 50; ++k) {
      const Index m = testing::random_dim(3, 12, rng);
      const Index n = testing::random_dim(3, 8, rng);
      SplitMatrix a = testing::random_split(m, n, rng);
      out.push_back({std::move(a), linear_objective(testing::random_params(m, n, rng))});
    }
    return out;
  }();
  return set;
}

double relative_diff(const GradientBundle& a, const GradientBundle& b) {
  return max_abs_diff(a, b) / std::max(a.max_abs(), b.max_abs());
}

Outcome criterion5() {
  const auto t0 = Clock::now();
  double cross = 0.0;
  double vs_fd = 0.0;
  verify::FdOptions opt;
  opt.central = true;
  for (const RandomProblem& p : random_set()) {
    const SingularTriplet t = governing::solve_triplet(p.a, 0, opt.convention);
    std::vector<GradientBundle> g;
    for (Method m : kMethods) g.push_back(adjoint::total_gradient(m, p.a, t, p.objective));
    const GradientBundle fd = verify::fd_gradient(p.objective, p.a, opt);
    for (std::size_t i = 0; i < g.size(); ++i) {
      vs_fd = std::max(vs_fd, relative_diff(g[i], fd));
      for (std::size_t j = i + 1; j < g.size(); ++j) cross = std::max(cross, relative_diff(g[i], g[j]));
    }
  }
  const double secs = seconds_since(t0);
  return {cross <= 1e-9 && vs_fd <= 1e-5 && secs < 60.0,
          fmt("50 matrices: pairwise rel diff %.3e (tol 1e-9), vs central FD rel diff %.3e (tol 1e-5), "
              "runtime %.2f s (limit 60 s)",
              cross, vs_fd, secs)};
}

Outcome criterion6() {
  double worst = 0.0;
  for (const RandomProblem& p : random_set()) {
    const SingularTriplet t = governing::solve_triplet(p.a, 0, PhaseConvention::left());
    const GradientBundle rad = as_bundle(rad::sigma_grad_complex(t));
    for (Method m : kMethods) {
      worst = std::max(worst, max_abs_diff(rad, adjoint::total_gradient(m, p.a, t, sigma_objective())));
    }
  }
  return {worst <= 1e-10, fmt("f = sigma on 50 matrices: max |RAD - adjoint| = %.3e (tol 1e-10)", worst)};
}

Outcome criterion7() {
  double semm_worst = 0.0;  // in units of sigma_1
  double gmm_worst = 0.0;
  for (const RandomProblem& p : random_set()) {
    const SvdResult res = jacobi_svd(p.a);
    const double s1 = res.triplets.front().sigma;
    const SingularTriplet t0 = governing::enforce_phase(governing::select_triplet(res, 0), PhaseConvention::left());
    const SemmState s = governing::newton_refine(p.a, governing::semm_state(t0));
    const SingularTriplet t = governing::to_triplet(s, PhaseConvention::left());
    semm_worst = std::max(semm_worst, governing::residual(p.a, s).lpNorm<Eigen::Infinity>() / s1);
    gmm_worst = std::max(gmm_worst, governing::residual(Method::lgmm, p.a, t).lpNorm<Eigen::Infinity>());
    const SingularTriplet tr = governing::enforce_phase(t, PhaseConvention::right());
    gmm_worst = std::max(gmm_worst, governing::residual(Method::rgmm, p.a, tr).lpNorm<Eigen::Infinity>());
  }
  return {semm_worst < 1e-13 && gmm_worst < 1e-11,
          fmt("SEMM max ||r||/sigma_1 = %.3e (tol 1e-13); GMM max ||r|| = %.3e (tol 1e-11)", semm_worst, gmm_worst)};
}

// Low-rank snapshots with decaying mode energies plus small noise.
RealMatrix synthetic_snapshots(Index m, Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  constexpr Index kRank = 8;
  RealMatrix spatial(m, kRank);
  for (Index j = 0; j < kRank; ++j)
    for (Index i = 0; i < m; ++i) spatial(i, j) = d(rng);
  RealMatrix temporal(kRank, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < kRank; ++i) temporal(i, j) = d(rng) * std::pow(0.6, static_cast<double>(i));
  RealMatrix x = spatial * temporal;
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) x(i, j) += 1e-2 * d(rng) + 3.0;
  return x;
}

struct SpotCheck {
  double worst_rel = 0.0;
  int count = 0;
};

SpotCheck spot_check(const RealMatrix& centered, const pod::PodResult& r, double eps, std::uint64_t seed) {
  const pod::SigmaProbe probe(centered, r);
  const pod::RankOneField field = pod::sensitivity_factors(r, 0);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> row(0, centered.rows() - 1), col(0, centered.cols() - 1);
  SpotCheck out;
  for (int k = 0; k < 25; ++k) {
    const Index p = row(rng);
    const Index q = col(rng);
    const double fd = probe.central_difference(0, p, q, eps, false);
    out.worst_rel = std::max(out.worst_rel, std::abs(field.at(p, q) - fd) / std::abs(fd));
    ++out.count;
  }
  return out;
}

// max_i |sigma_i - reference_i| / sigma_1 over the modes of r.
double sigma_deviation(const pod::PodResult& r, const RealVector& reference) {
  double worst = 0.0;
  for (Index i = 0; i < r.mode_count(); ++i) worst = std::max(worst, std::abs(r.sigmas[i] - reference[i]));
  return worst / reference[0];
}

Outcome criterion8() {
  // Desk-scale run against a direct SVD of the full snapshot matrix.
  RealMatrix x = synthetic_snapshots(2000, 30, 7);
  double eps = 1e-6 * x.cwiseAbs().maxCoeff();
  pod::center_in_place(x);
  const pod::SnapshotMatrix small(x);
  const pod::PodResult r = pod::method_of_snapshots(small, 29);
  const double small_sigma = sigma_deviation(r, jacobi_svd(x).sigmas());
  const SpotCheck small_spot = spot_check(x, r, eps, 11);

  // Scaling run; the reference sigmas come from the 75 x 75 R factor of a QR.
  const auto t0 = Clock::now();  // data generation included
  RealMatrix big = synthetic_snapshots(1000000, 75, 13);
  eps = 1e-6 * big.cwiseAbs().maxCoeff();
  pod::center_in_place(big);
  const pod::PodResult rb = pod::method_of_snapshots(pod::SnapshotMatrix(big), 74);
  const SpotCheck big_spot = spot_check(big, rb, eps, 17);
  const double big_secs = seconds_since(t0);
  RealVector reference;
  {
    Eigen::HouseholderQR<RealMatrix> qr(big);
    big.resize(0, 0);
    const RealMatrix rfac = qr.matrixQR().topRows(75).triangularView<Eigen::Upper>();
    reference = jacobi_svd(rfac).sigmas();
  }
  const double big_sigma = sigma_deviation(rb, reference);

  const bool pass = small_sigma <= 1e-10 && small_spot.worst_rel <= 1e-6 && big_sigma <= 1e-10 &&
                    big_spot.worst_rel <= 1e-6 && big_secs < 120.0;
  return {pass, fmt("2000x30: sigma dev/sigma_1 %.3e (tol 1e-10), %d spot checks max rel %.3e (tol 1e-6); "
                    "1e6x75: sigma dev/sigma_1 %.3e, %d spot checks max rel %.3e, POD + checks %.1f s (limit 120 s)",
                    small_sigma, small_spot.count, small_spot.worst_rel, big_sigma, big_spot.count, big_spot.worst_rel,
                    big_secs)};
}

Outcome criterion9() {
  constexpr int kInstances = 200;
  const testing::PropertyResult results[] = {
      testing::dot_product_identity(9001, kInstances), testing::vec_roundtrip(9002, kInstances),
      testing::sigma_gauge_invariance(9003, kInstances), testing::rank_bounds(9004, kInstances),
      testing::center_row_sums(9005, kInstances)};
  bool pass = true;
  std::string detail;
  for (const auto& r : results) {
    pass = pass && r.pass() && r.instances >= 200;
    detail += fmt("%s%s: %d instances, worst %.2e (tol %.0e)", detail.empty() ? "" : "; ", r.name.c_str(),
                  r.instances, r.worst, r.tol);
  }
  return {pass, detail};
}

}  // namespace
}  // namespace dsvd

int main(int argc, char** argv) {
  CLI::App app{"dsvd acceptance run"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::function<dsvd::Outcome()> criteria[] = {dsvd::criterion1, dsvd::criterion2, dsvd::criterion3,
                                                     dsvd::criterion4, dsvd::criterion5, dsvd::criterion6,
                                                     dsvd::criterion7, dsvd::criterion8, dsvd::criterion9};
  bool all = true;
  for (int k = 1; k <= 9; ++k) {
    if (only != 0 && k != only) continue;
    dsvd::Outcome o{false, ""};
    try {
      o = criteria[k - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s  %s\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
