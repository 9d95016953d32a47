#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "equidyn/config.hpp"

namespace equidyn {

enum class ExperimentKind { Density, Classify, Lep, Spectral, Sensitivity, Dichotomy, Vitali };

std::optional<ExperimentKind> parse_kind(std::string_view name);
std::string_view to_string(ExperimentKind kind);

/// A validated experiment: `resolved` holds every field with defaults
/// expanded, and is embedded verbatim in the report.
struct ExperimentConfig {
    ExperimentKind kind;
    Json resolved;
};

/// Validate every field the kind needs before any computation. Throws
/// ConfigInvalid naming the first offending field.
ExperimentConfig resolve_config(ExperimentKind kind, const Json& raw);

struct ExperimentOutput {
    std::string json_text;
    /// Present for tabular experiments.
    std::optional<std::string> csv_text;
};

ExperimentOutput run_experiment(const ExperimentConfig& config);

/// Write to a sibling temp file, then rename over `path`.
void write_atomically(const std::filesystem::path& path, const std::string& bytes);

/// JSON to `json_path`; CSV (if any) next to it with a .csv extension.
void write_outputs(const ExperimentOutput& out, const std::filesystem::path& json_path);

/// 2 config error, 3 resource cap, 4 anything unexpected.
int exit_code_for(ErrorCode code);

} // namespace equidyn
