// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#include "dsvd/pod.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

namespace dsvd::pod {
namespace {

constexpr char kMagic[5] = {'S', 'N', 'A', 'P', '1'};
constexpr unsigned char kVersion = 0x01;
constexpr std::size_t kHeaderBytes = 14;

std::uint32_t read_u32(std::string_view b, std::size_t at) {
  std::uint32_t v = 0;
  for (int k = 3; k >= 0; --k) v = (v << 8) | static_cast<unsigned char>(b[at + static_cast<std::size_t>(k)]);
  return v;
}

double read_f64(std::string_view b, std::size_t at) {
  std::uint64_t bits = 0;
  for (int k = 7; k >= 0; --k) bits = (bits << 8) | static_cast<unsigned char>(b[at + static_cast<std::size_t>(k)]);
  double x;
  std::memcpy(&x, &bits, sizeof x);
  return x;
}

void append_u32(std::string& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xffu));
}

void append_f64(std::string& out, double x) {
  std::uint64_t bits;
  std::memcpy(&bits, &x, sizeof bits);
  for (int k = 0; k < 8; ++k) out.push_back(static_cast<char>((bits >> (8 * k)) & 0xffu));
}

std::string header(Index m, Index n) {
  if (m > 0xffffffffLL || n > 0xffffffffLL) throw DimensionError("snapshot dimensions exceed u32");
  std::string out(kMagic, sizeof kMagic);
  out.push_back(static_cast<char>(kVersion));
  append_u32(out, static_cast<std::uint32_t>(m));
  append_u32(out, static_cast<std::uint32_t>(n));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Parses one unsigned integer or double token ending at a delimiter; returns the end offset.
template <typename T>
std::size_t parse_token(std::string_view text, std::size_t at, T& value, const char* what) {
  while (at < text.size() && (text[at] == ' ' || text[at] == '\t')) ++at;
  const char* first = text.data() + at;
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc()) throw ParseError(std::string("csv: expected ") + what, at);
  std::size_t end = static_cast<std::size_t>(ptr - text.data());
  while (end < text.size() && (text[end] == ' ' || text[end] == '\t')) ++end;
  return end;
}

std::size_t expect(std::string_view text, std::size_t at, char c) {
  if (c == '\n') {
    if (at < text.size() && text[at] == '\r') ++at;
    if (at < text.size() && text[at] == '\n') return at + 1;
    throw ParseError("csv: expected end of line", at);
  }
  if (at < text.size() && text[at] == c) return at + 1;
  throw ParseError(std::string("csv: expected '") + c + "'", at);
}

}  // namespace

SnapshotMatrix::SnapshotMatrix(RealMatrix x) : data(std::move(x)) {
  if (data.cols() < 2 || data.rows() < data.cols()) {
    throw DimensionError("snapshot matrix must satisfy m >= n >= 2, got " + std::to_string(data.rows()) + "x" +
                         std::to_string(data.cols()));
  }
  if (!data.allFinite()) throw NonFiniteError("snapshot matrix has non-finite entries");
}

Format format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  if (dot != std::string::npos) {
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == "csv") return Format::csv;
  }
  return Format::bin;
}

SnapshotMatrix parse_bin(std::string_view bytes) {
  if (bytes.size() < kHeaderBytes) {
    throw ParseError("snapshot bin: truncated header, expected " + std::to_string(kHeaderBytes) + " bytes, got " +
                         std::to_string(bytes.size()),
                     bytes.size());
  }
  for (std::size_t k = 0; k < sizeof kMagic; ++k) {
    if (bytes[k] != kMagic[k]) throw ParseError("snapshot bin: bad magic", k);
  }
  if (static_cast<unsigned char>(bytes[5]) != kVersion) throw ParseError("snapshot bin: unsupported version", 5);
  const std::uint64_t m = read_u32(bytes, 6);
  const std::uint64_t n = read_u32(bytes, 10);
  const std::uint64_t expected = kHeaderBytes + 8 * m * n;
  if (bytes.size() != expected) {
    throw ParseError("snapshot bin: expected " + std::to_string(expected) + " bytes for " + std::to_string(m) + "x" +
                         std::to_string(n) + ", got " + std::to_string(bytes.size()),
                     std::min<std::size_t>(bytes.size(), expected));
  }
  RealMatrix x(static_cast<Index>(m), static_cast<Index>(n));
  std::size_t at = kHeaderBytes;
  double* out = x.data();  // column-major, same order as the file
  for (std::uint64_t k = 0; k < m * n; ++k, at += 8) {
    out[k] = read_f64(bytes, at);
    if (!std::isfinite(out[k])) throw ParseError("snapshot bin: non-finite value", at);
  }
  return SnapshotMatrix(std::move(x));
}

SnapshotMatrix parse_csv(std::string_view text) {
  unsigned long long m = 0, n = 0;
  std::size_t at = parse_token(text, 0, m, "row count");
  at = expect(text, at, ',');
  at = parse_token(text, at, n, "column count");
  at = expect(text, at, '\n');
  RealMatrix x(static_cast<Index>(m), static_cast<Index>(n));
  for (unsigned long long i = 0; i < m; ++i) {
    for (unsigned long long j = 0; j < n; ++j) {
      double value = 0.0;
      const std::size_t start = at;
      at = parse_token(text, at, value, "number");
      if (!std::isfinite(value)) throw ParseError("csv: non-finite value", start);
      x(static_cast<Index>(i), static_cast<Index>(j)) = value;
      if (j + 1 < n) at = expect(text, at, ',');
    }
    if (i + 1 < m || at < text.size()) at = expect(text, at, '\n');
  }
  while (at < text.size() && (text[at] == '\n' || text[at] == '\r')) ++at;
  if (at != text.size()) throw ParseError("csv: trailing data after " + std::to_string(m) + " rows", at);
  return SnapshotMatrix(std::move(x));
}

std::string encode_bin(const RealMatrix& x) {
  std::string out = header(x.rows(), x.cols());
  out.reserve(kHeaderBytes + 8 * static_cast<std::size_t>(x.size()));
  for (Index j = 0; j < x.cols(); ++j)
    for (Index i = 0; i < x.rows(); ++i) append_f64(out, x(i, j));
  return out;
}

std::string encode_csv(const RealMatrix& x) {
  std::string out = std::to_string(x.rows()) + "," + std::to_string(x.cols()) + "\n";
  char buf[40];
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      if (j) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", x(i, j));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

SnapshotMatrix load_snapshots(const std::string& path, Format format) {
  const std::string bytes = read_file(path);
  return format == Format::csv ? parse_csv(bytes) : parse_bin(bytes);
}

void save_matrix(const std::string& path, const RealMatrix& x, Format format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  const std::string bytes = format == Format::csv ? encode_csv(x) : encode_bin(x);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path);
}

void center_in_place(RealMatrix& x) {
  const RealVector mean = x.rowwise().mean();
  x.colwise() -= mean;
}

SnapshotMatrix center(const SnapshotMatrix& x) {
  SnapshotMatrix out = x;
  center_in_place(out.data);
  return out;
}

PodResult method_of_snapshots(const SnapshotMatrix& centered, Index k, double gap_tol) {
  const RealMatrix& x = centered.data;
  const Index n = x.cols();
  if (k < 1 || k > n) throw DimensionError("method_of_snapshots: k must lie in [1, n]");

  RealMatrix cov = RealMatrix::Zero(n, n);
  cov.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
  cov.triangularView<Eigen::StrictlyUpper>() = cov.transpose();

  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(cov);
  if (solver.info() != Eigen::Success) throw ConvergenceError("method_of_snapshots: eigensolver failed");
  PodResult r;
  r.eigenvalues = solver.eigenvalues().reverse();
  r.eigenvectors = solver.eigenvectors().rowwise().reverse();

  const double lambda1 = r.eigenvalues[0];
  if (!(lambda1 > 0.0)) throw RankError("method_of_snapshots: snapshot matrix is zero");
  if (!(r.eigenvalues[k - 1] >= 1e-12 * lambda1)) {
    throw RankError("method_of_snapshots: mode " + std::to_string(k) + " is beyond the numerical rank");
  }
  const double sigma1 = std::sqrt(lambda1);
  for (Index i = 0; i < k; ++i) {
    const double si = std::sqrt(r.eigenvalues[i]);
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double sj = std::sqrt(std::max(0.0, r.eigenvalues[j]));
      if (!(std::abs(si - sj) > gap_tol * sigma1)) {
        throw RepeatedSingularValueError("method_of_snapshots: modes " + std::to_string(i + 1) + " and " +
                                         std::to_string(j + 1) + " are not distinct");
      }
    }
  }

  r.sigmas = r.eigenvalues.head(k).cwiseSqrt();
  r.right_vectors = r.eigenvectors.leftCols(k);
  r.modes = x * r.right_vectors;
  for (Index i = 0; i < k; ++i) {
    r.modes.col(i) /= r.sigmas[i];
    Index best = 0;
    r.modes.col(i).cwiseAbs().maxCoeff(&best);  // first maximal index
    if (r.modes(best, i) < 0.0) {
      r.modes.col(i) *= -1.0;
      r.right_vectors.col(i) *= -1.0;
      r.eigenvectors.col(i) *= -1.0;
    }
  }
  r.temporal_coeffs = r.sigmas.asDiagonal() * r.right_vectors.transpose();
  return r;
}

RankOneField sensitivity_factors(const PodResult& r, Index i, bool chain_centering) {
  if (i < 0 || i >= r.mode_count()) throw DimensionError("sensitivity: mode index out of range");
  RankOneField f{r.modes.col(i), r.right_vectors.col(i)};
  if (chain_centering) f.right.array() -= f.right.mean();
  return f;
}

RealMatrix sigma_sensitivity_field(const PodResult& r, Index i, bool chain_centering) {
  return sensitivity_factors(r, i, chain_centering).dense();
}

void save_field_bin(const std::string& path, const RankOneField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  const std::string head = header(field.left.size(), field.right.size());
  out.write(head.data(), static_cast<std::streamsize>(head.size()));
  std::string column;
  column.reserve(8 * static_cast<std::size_t>(field.left.size()));
  for (Index q = 0; q < field.right.size(); ++q) {
    column.clear();
    for (Index p = 0; p < field.left.size(); ++p) append_f64(column, field.left[p] * field.right[q]);
    out.write(column.data(), static_cast<std::streamsize>(column.size()));
  }
  if (!out) throw IoError("write failed for " + path);
}

SigmaProbe::SigmaProbe(const RealMatrix& centered, const PodResult& r)
    : x_(&centered), lambda_(r.eigenvalues), basis_(r.eigenvectors) {
  if (basis_.rows() != centered.cols()) throw DimensionError("SigmaProbe: result does not match matrix");
}

double SigmaProbe::shift(Index i, Index p, Index q, double delta, bool chain_centering) const {
  const Index n = basis_.rows();
  if (i < 0 || i >= n || p < 0 || p >= x_->rows() || q < 0 || q >= n) {
    throw DimensionError("SigmaProbe: index out of range");
  }
  // Perturbed centered matrix is X' + e_p d^T.
  RealVector d = RealVector::Zero(n);
  d[q] = delta;
  if (chain_centering) d.array() -= delta / static_cast<double>(n);
  const RealVector xt = basis_.transpose() * x_->row(p).transpose();
  const RealVector dt = basis_.transpose() * d;
  const RealMatrix e = xt * dt.transpose() + dt * xt.transpose() + dt * dt.transpose();

  // Eigenvalue of diag(lambda) + E continuing lambda_i; eigenvector e_i + y with y_i = 0.
  const double li = lambda_[i];
  RealVector y = RealVector::Zero(n);
  double mu = e(i, i);
  for (int it = 0; it < 200; ++it) {
    RealVector next(n);
    const RealVector ey = e * y;
    for (Index j = 0; j < n; ++j) {
      next[j] = j == i ? 0.0 : -(e(j, i) + ey[j]) / (lambda_[j] - li - mu);
    }
    y = next;
    const double mu_next = e(i, i) + e.row(i).dot(y);
    const bool done = std::abs(mu_next - mu) <= 1e-17 * std::abs(mu_next);
    mu = mu_next;
    if (done) break;
  }
  return mu / (std::sqrt(li + mu) + std::sqrt(li));
}

double SigmaProbe::central_difference(Index i, Index p, Index q, double eps, bool chain_centering) const {
  return (shift(i, p, q, eps, chain_centering) - shift(i, p, q, -eps, chain_centering)) / (2.0 * eps);
}

}  // namespace dsvd::pod
