#pragma once

#include "locc/povm.hpp"
#include "locc/protocol.hpp"
#include "locc/subspace.hpp"

#include <json.hpp>

#include <string>

namespace locc {

using Json = nlohmann::json;

// Wire format, version 1. Complex numbers are [re, im] pairs (plain numbers
// are accepted on input); matrices are {rows, cols, entries} with row-major
// entries. Top-level objects carry {"version": 1, "kind": ...}.

Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j, const std::string& where);

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& where);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& where);

Json povm_to_json(const Povm& povm);
Povm povm_from_json(const Json& j);

Json subspace_to_json(const LogicalSubspace& ls);
LogicalSubspace subspace_from_json(const Json& j);

Json plan_to_json(const MeasurementPlan& plan);
MeasurementPlan plan_from_json(const Json& j);

// Keys sorted, two-space indent, trailing newline: dumps are byte-stable.
std::string canonical_dump(const Json& j);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

}  // namespace locc
