// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dsvd/core.hpp"
#include "dsvd/json_out.hpp"

namespace dsvd {
namespace {

using nlohmann::json;

RealMatrix read_block(const json& doc, const char* key, Index m, Index n) {
  const json& rows = doc.at(key);
  if (!rows.is_array() || static_cast<Index>(rows.size()) != m) {
    throw ParseError(std::string("matrix json: \"") + key + "\" must have " + std::to_string(m) + " rows");
  }
  RealMatrix out(m, n);
  for (Index i = 0; i < m; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n) {
      throw ParseError(std::string("matrix json: row ") + std::to_string(i) + " of \"" + key + "\" must have " +
                       std::to_string(n) + " entries");
    }
    for (Index j = 0; j < n; ++j) {
      const json& x = row[static_cast<std::size_t>(j)];
      if (!x.is_number()) throw ParseError(std::string("matrix json: non-numeric entry in \"") + key + "\"");
      out(i, j) = x.get<double>();
    }
  }
  if (!out.allFinite()) throw ParseError(std::string("matrix json: non-finite entry in \"") + key + "\"");
  return out;
}

}  // namespace

SplitMatrix matrix_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("matrix json: ") + e.what(), e.byte);
  }
  try {
    const auto m = doc.at("m").get<long long>();
    const auto n = doc.at("n").get<long long>();
    if (m < 1 || n < 1) throw ParseError("matrix json: m and n must be positive");
    RealMatrix re = read_block(doc, "re", m, n);
    RealMatrix im = doc.contains("im") ? read_block(doc, "im", m, n) : RealMatrix::Zero(m, n);
    return {std::move(re), std::move(im)};
  } catch (const json::exception& e) {
    throw ParseError(std::string("matrix json: ") + e.what());
  }
}

SplitMatrix load_matrix_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return matrix_from_json_text(buf.str());
}

std::string matrix_to_json_text(const SplitMatrix& a) {
  json doc;
  doc["m"] = a.rows();
  doc["n"] = a.cols();
  doc["re"] = json_rows(a.re);
  doc["im"] = json_rows(a.im);
  return dump_json(doc);
}

}  // namespace dsvd
