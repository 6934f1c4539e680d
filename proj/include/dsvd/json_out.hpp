// Copyright the dsvd authors. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include <json.hpp>

#include "dsvd/core.hpp"

namespace dsvd {

nlohmann::json json_rows(const RealMatrix& m);
nlohmann::json json_array(const RealVector& v);

/// Serializes with every floating-point number printed to 17 significant
/// digits; object keys come out sorted, so output is byte-stable.
std::string dump_json(const nlohmann::json& doc, int indent = 2);

}  // namespace dsvd
