#pragma once

#include <string>

#include <json.hpp>

#include "lvn/linalg.hpp"

namespace lvn::app {

using Json = nlohmann::ordered_json;

/// Compact JSON with insertion-ordered keys and every floating-point value
/// rendered with 17 significant digits, so a document reproduces bit-exactly.
std::string canonical_dump(const Json& doc, int indent = 2);

/// [[[re, im], ...], ...], row-major.
Json matrix_to_json(const CMatrix& m);
/// Accepts [re, im] pairs or plain reals as entries.
CMatrix matrix_from_json(const Json& j);

Json ket_to_json(const CKet& k);
CKet ket_from_json(const Json& j);

}  // namespace lvn::app
