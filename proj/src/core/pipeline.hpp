#pragma once

#include <nlohmann/json.hpp>

#include "config.hpp"

namespace stcmc {

using Json = nlohmann::ordered_json;

struct RunResult {
  Json report;
  bool ok = true;
};

/// Runs the requested analyses in declaration order. Module failures are
/// captured per analysis and the remaining independent analyses continue.
RunResult run(const AnalysisConfig& cfg);

/// Writes the JSON report and, when enabled, the CSV tables and the OFF mesh
/// into the configured output directory (overridable).
void emit(const RunResult& result, const AnalysisConfig& cfg,
          const std::string& directory_override = "");

/// Deterministic content digest of a report: FNV-1a over the serialization
/// with the timing block removed.
std::string report_digest(const Json& report);

/// Named verification suites backing the `check` subcommand.
/// Known names: "round-sphere", "schwarzschild", "foliation", "all".
RunResult run_suite(const std::string& name, int level, std::uint64_t seed);

}  // namespace stcmc
