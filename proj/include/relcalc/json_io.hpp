#pragma once

// File formats. Structures:
//   {"universe": [labels], "relations": {"R": {"arity": 3, "tuples": [[0,0,0], ...]}}}
// Operation tables:
//   {"arity": 2, "size": 2, "values": [0,0,0,1]}
// Algebras:
//   {"universe": [labels], "operations": {"meet": <operation table>}}
// Readers reject unknown top-level keys.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "relcalc/algebra.hpp"
#include "relcalc/freecons.hpp"
#include "relcalc/structure.hpp"

namespace relcalc {

std::string read_text_file(const std::filesystem::path& path);
/// Throws Error on malformed JSON.
nlohmann::json parse_json(const std::string& text);

/// Shape errors throw InvalidStructure; the invariants are left to validate().
RawStructure raw_structure_from_json(const nlohmann::json& j);
RelationalStructure structure_from_json(const nlohmann::json& j);
nlohmann::json structure_to_json(const RelationalStructure& s);
RelationalStructure read_structure(const std::filesystem::path& path);

OperationTable table_from_json(const nlohmann::json& j);
nlohmann::json table_to_json(const OperationTable& t);

FiniteAlgebra algebra_from_json(const nlohmann::json& j);
nlohmann::json algebra_to_json(const FiniteAlgebra& a);
FiniteAlgebra read_algebra(const std::filesystem::path& path);

/// Lists U, component sizes, |H_u| and the kernel classes of psi.
nlohmann::json bundle_manifest(const FreeBundle& b);
/// Writes Fstruct.json, K.json and manifest.json into `dir` (created if needed).
void export_bundle(const FreeBundle& b, const std::filesystem::path& dir);

}  // namespace relcalc
