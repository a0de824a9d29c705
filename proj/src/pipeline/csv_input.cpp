#include "symts/pipeline/csv_input.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "symts/error.hpp"

namespace symts {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t begin = 0;
    while (true) {
        const std::size_t comma = line.find(',', begin);
        fields.push_back(trim(line.substr(begin, comma == std::string_view::npos ? std::string_view::npos : comma - begin)));
        if (comma == std::string_view::npos) {
            return fields;
        }
        begin = comma + 1;
    }
}

std::string location(std::size_t line) { return "line " + std::to_string(line); }

// Empty optional for an empty cell.
std::optional<double> parse_cell(std::string_view cell, std::size_t line, std::string_view column) {
    if (cell.empty()) {
        return std::nullopt;
    }
    if (cell == "NaN" || cell == "nan" || cell == "NAN") {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::string_view digits = cell;
    if (digits.front() == '+') {
        digits.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
        fail(ErrorCode::MalformedCsv, location(line) + ", column " + std::string(column) + ": cannot parse '" +
                                          std::string(cell) + "' as a number");
    }
    return value;
}

Grid uniform_grid(const std::vector<double>& times, const std::string& channel) {
    if (times.size() < 2) {
        fail(ErrorCode::InvalidGrid,
             "channel " + channel + " has " + std::to_string(times.size()) + " samples, at least 2 are needed");
    }
    const double mean = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double delta = times[k] - times[k - 1];
        if (std::fabs(delta - mean) > 1e-6 * mean) {
            fail(ErrorCode::NonUniformGrid, "channel " + channel + ": time step " + std::to_string(delta) +
                                                " before sample " + std::to_string(k) +
                                                " deviates from the mean step " + std::to_string(mean));
        }
    }
    return Grid(times.size(), mean, times.front());
}

}  // namespace

std::vector<ChannelSeries> parse_csv(std::string_view text, const std::string& time_column,
                                     const std::vector<std::string>& value_columns, MissingPolicy missing) {
    std::vector<std::string_view> lines;
    {
        std::size_t begin = 0;
        while (begin < text.size()) {
            std::size_t end = text.find('\n', begin);
            if (end == std::string_view::npos) {
                end = text.size();
            }
            lines.push_back(text.substr(begin, end - begin));
            begin = end + 1;
        }
    }
    if (lines.empty() || trim(lines.front()).empty()) {
        fail(ErrorCode::MalformedCsv, location(1) + ": missing header row");
    }
    std::vector<std::string> header;
    for (auto field : split_fields(lines.front())) {
        if (field.size() >= 2 && field.front() == '"' && field.back() == '"') {
            field = field.substr(1, field.size() - 2);
        }
        header.emplace_back(field);
    }
    const auto column_index = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            fail(ErrorCode::MissingColumn, "column '" + name + "' is not in the header");
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t time_index = column_index(time_column);
    std::vector<std::size_t> indices;
    for (const auto& name : value_columns) {
        indices.push_back(column_index(name));
    }

    std::vector<std::vector<double>> times(value_columns.size());
    std::vector<std::vector<double>> values(value_columns.size());
    std::vector<std::size_t> last_line(value_columns.size(), 0);
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const std::size_t line = li + 1;
        if (trim(lines[li]).empty()) {
            continue;
        }
        const auto fields = split_fields(lines[li]);
        if (fields.size() != header.size()) {
            fail(ErrorCode::MalformedCsv, location(line) + ": expected " + std::to_string(header.size()) +
                                              " fields, found " + std::to_string(fields.size()));
        }
        const auto t = parse_cell(fields[time_index], line, time_column);
        if (!t || !std::isfinite(*t)) {
            fail(ErrorCode::MalformedCsv, location(line) + ": time value must be a finite number");
        }
        for (std::size_t c = 0; c < indices.size(); ++c) {
            auto v = parse_cell(fields[indices[c]], line, value_columns[c]);
            if (!v) {
                if (missing == MissingPolicy::Drop) {
                    continue;
                }
                v = std::numeric_limits<double>::quiet_NaN();
            }
            if (!times[c].empty() && !(*t > times[c].back())) {
                fail(ErrorCode::NonMonotoneTime, location(line) + ", column " + value_columns[c] + ": time " +
                                                     std::to_string(*t) + " does not follow " +
                                                     std::to_string(times[c].back()) + " on " +
                                                     location(last_line[c]));
            }
            times[c].push_back(*t);
            values[c].push_back(*v);
            last_line[c] = line;
        }
    }

    std::vector<ChannelSeries> out;
    for (std::size_t c = 0; c < value_columns.size(); ++c) {
        Grid grid = uniform_grid(times[c], value_columns[c]);
        out.push_back(ChannelSeries{value_columns[c], grid, std::move(values[c])});
    }
    return out;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::Io, "cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        fail(ErrorCode::Io, "cannot read " + path.string());
    }
    return buffer.str();
}

std::vector<ChannelSeries> ingest_csv(const std::filesystem::path& path, const std::string& time_column,
                                      const std::vector<std::string>& value_columns, MissingPolicy missing) {
    const std::string text = read_text_file(path);
    try {
        return parse_csv(text, time_column, value_columns, missing);
    } catch (const Error& e) {
        fail(e.code(), path.string() + ": " + e.detail());
    }
}

}  // namespace symts
