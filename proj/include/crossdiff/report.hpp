#pragma once

#include <string>

#include <json.hpp>

#include "crossdiff/diagnostics.hpp"
#include "crossdiff/index_theory.hpp"
#include "crossdiff/pde_solver.hpp"

namespace crossdiff {

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr const char* kToolVersion = "0.1.0";

using ojson = nlohmann::ordered_json;

ojson to_json(const Vector& v);
ojson to_json(const StructureReport& s);
ojson to_json(const ConstantState& s, int m);
ojson to_json(const DegenerateSubset& d, int m);
ojson to_json(const StabilityVerdict& v, int m);
ojson to_json(const IndexReport& r);
ojson to_json(const ExistenceVerdict& v, int m);
ojson to_json(const SolveResult& r);
ojson to_json(const DiagnosticsReport& d);
ojson to_json(const NonexistenceThreshold& t);

/// Support mask as a 0/1 string, component 1 first.
std::string support_string(SupportMask mask, int m);

/// One-line human statement of the verdict.
std::string verdict_statement(const ExistenceVerdict& v);

}  // namespace crossdiff
