#pragma once

#include <string>

#include <json.hpp>

namespace mucert::cli {

/// Exit codes: 0 success / bound_ok, 1 input error, 2 bound violation or
/// certification refusal.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitViolation = 2;

/// Effective configuration: the user's JSON overlaid onto the per-command
/// defaults, so every knob that shaped a run is embedded in its result.
nlohmann::json effective_config(const nlohmann::json& user);

/// Dispatches one command.  Writes result.json (plus series.csv and
/// certificate.json where applicable) into the configured output directory
/// and prints a short summary to stdout.
int run(const nlohmann::json& config);

/// The JSON Schema shipped in docs/result.schema.json.
nlohmann::json result_schema();

/// Structural validation of a result document against the shipped schema
/// (required keys, types, enums).  On failure stores a reason in `why`.
bool validate_result(const nlohmann::json& result, std::string* why = nullptr);

}  // namespace mucert::cli
