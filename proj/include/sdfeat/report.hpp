#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sdfeat/experiment.hpp"

namespace sdfeat {

enum class ReportFormat { csv, json };

/// Picks JSON for a .json extension, CSV otherwise.
ReportFormat format_for(const std::filesystem::path& path);

/// One CSV row per (report, seed): axis_value, seed, metric, channels, mask,
/// W, X, k, accuracy_percent, duration_ms, error. Failed points get a single
/// row with empty seed and accuracy.
std::string reports_to_csv(const std::vector<ExperimentReport>& reports);
std::string reports_to_json(const std::vector<ExperimentReport>& reports);
std::vector<ExperimentReport> reports_from_json(std::string_view text);

/// Throws ConfigError for an empty report list and IoError when the path is
/// not writable.
void emit_report(const std::vector<ExperimentReport>& reports, const std::filesystem::path& path,
                 ReportFormat format);

}  // namespace sdfeat
