#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "steerdist/assemblage.hpp"
#include "steerdist/distillation.hpp"
#include "steerdist/protocol_sim.hpp"

namespace steerdist {

// Assemblage document:
//   {"scenario": "1sdi" | "2sdi",
//    "theta": <radians, optional>,
//    "element_dim": 4 | 2,
//    "elements": [{"a":0, "x":0, "data": [[re, im], ...]}, ...]}
// 2sdi elements carry "a", "b", "x", "y". "data" holds element_dim^2
// [re, im] pairs in row-major order. Every grid slot must appear once.

nlohmann::json to_json(const Assemblage& asm_);
/// Throws Parse on schema errors; element checks (Hermiticity, shape)
/// propagate as their own codes. Physical invariants are not checked here.
Assemblage assemblage_from_json(const nlohmann::json& doc);
Assemblage load_assemblage(const std::filesystem::path& path);

nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const OptimizationResult& result);
nlohmann::json to_json(const SimOutcome& outcome);

}  // namespace steerdist
