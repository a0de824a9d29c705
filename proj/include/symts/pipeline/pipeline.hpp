#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "symts/pipeline/config.hpp"
#include "symts/pipeline/csv_input.hpp"

namespace symts {

enum class Stage { Derive, Solve, Symbolize, Combine, Histogram, Classify, Match };

/// Every stage, in pipeline order.
std::set<Stage> all_stages();

struct PipelineOverrides {
    std::optional<std::string> channel;  // restrict per-channel outputs to this channel
    std::optional<double> level;         // band level
    std::optional<std::string> pattern;  // match pattern
};

/// Stages the configuration has something for: derive and symbolize always,
/// solve for inverse-mode channels, combine and histogram when channels are
/// combined, classify with references, match with a pattern.
std::set<Stage> supported_stages(const PipelineConfig& config, const PipelineOverrides& overrides = {});

/// Output file name -> file content. Map order keeps serialization deterministic.
using Bundle = std::map<std::string, std::string>;

/// Runs the configured channels over already ingested series (matched to
/// channels by column name) and renders the outputs of the requested stages.
///
/// Files: <ch>.derived.csv, <ch>.solution.csv, <ch>.band.csv,
/// <ch>.prediction.csv, <ch>.tokens.csv, <ch>.matches.csv, combined.csv,
/// histogram.json, frequency.json, classification.csv.
///
/// Errors are rethrown with the channel and stage prepended.
Bundle run_pipeline(const PipelineConfig& config, const std::vector<ChannelSeries>& inputs,
                    const std::set<Stage>& stages, const PipelineOverrides& overrides = {});

/// Parses CSV text with the columns the config references, then runs.
Bundle run_pipeline_csv(const PipelineConfig& config, std::string_view csv_text, const std::set<Stage>& stages,
                        const PipelineOverrides& overrides = {});

/// Columns the config reads, in first-use order.
std::vector<std::string> input_columns(const PipelineConfig& config);

/// Writes every file of the bundle into `dir`, creating it if needed. Throws Io.
void write_bundle(const Bundle& bundle, const std::filesystem::path& dir);

}  // namespace symts
