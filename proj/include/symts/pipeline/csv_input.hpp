#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "symts/grid.hpp"

namespace symts {

/// One sensor channel on its own uniform grid.
struct ChannelSeries {
    std::string name;
    Grid grid;
    std::vector<double> values;
};

enum class MissingPolicy {
    Nan,   // empty cells become NaN and every channel shares the file's time column
    Drop,  // empty cells are skipped, giving each channel its own (multirate) grid
};

/// Parses comma-separated text with a header row. `NaN` is accepted as a value.
/// Throws MalformedCsv (with line number), MissingColumn, NonMonotoneTime,
/// NonUniformGrid (successive deltas deviate from their mean by more than
/// 1e-6 relative) and InvalidGrid.
std::vector<ChannelSeries> parse_csv(std::string_view text, const std::string& time_column,
                                     const std::vector<std::string>& value_columns,
                                     MissingPolicy missing = MissingPolicy::Nan);

/// Reads the file and parses it. Throws Io when it cannot be read.
std::vector<ChannelSeries> ingest_csv(const std::filesystem::path& path, const std::string& time_column,
                                      const std::vector<std::string>& value_columns,
                                      MissingPolicy missing = MissingPolicy::Nan);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace symts
