#pragma once

#include <string>

#include "cli/config.hpp"
#include "cli/report.hpp"

namespace fraclab::cli {

/// Checks cross-key constraints (order range, dimension support). Throws ParameterError or
/// ConfigError.
void validate(const RunConfig& cfg);

/// Runs the configured command and renders <command>.csv and <command>.json.
ReportBundle execute(const RunConfig& cfg);

/// <command>.json describing a failed run.
ReportBundle failure_bundle(const RunConfig& cfg, const std::string& kind, const std::string& message);

}  // namespace fraclab::cli
