#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "symts/alphabet.hpp"
#include "symts/ldo.hpp"
#include "symts/mcla.hpp"
#include "symts/pipeline/csv_input.hpp"
#include "symts/streaming.hpp"

namespace symts {

struct AlphabetConfig {
    enum class Kind { Usd, Intervals };

    Kind kind = Kind::Usd;
    double epsilon = 0.0;  // Usd
    std::string symbols;   // Intervals
    std::vector<double> boundaries;
    std::optional<ValueRange> range;
    std::optional<char> catch_all;

    Alphabet build(NanPolicy nan_policy) const;
    bool operator==(const AlphabetConfig& other) const;
};

/// Local derivative operator applied before quantization.
struct OperatorConfig {
    int order = 1;
    int accuracy = 2;
    BoundaryMode boundary = BoundaryMode::Valid;

    bool operator==(const OperatorConfig&) const = default;
};

struct LdoConfig {
    enum class Mode {
        Inverse,  // the column is the forcing g; the channel becomes the solution y
        Forward,  // the column is y; the channel becomes L y
    };

    int degree = 1;
    std::vector<Coefficient> coefficients;
    int accuracy = 2;
    std::vector<Constraint> constraints;
    double rank_tolerance = kDefaultRankTolerance;
    Mode mode = Mode::Inverse;

    LdoSpec spec() const { return LdoSpec{degree, coefficients}; }
    bool operator==(const LdoConfig& other) const;
};

struct ChannelConfig {
    std::string name;
    std::string column;
    AlphabetConfig alphabet;
    std::optional<OperatorConfig> op;
    std::optional<LdoConfig> ldo;

    bool operator==(const ChannelConfig&) const = default;
};

struct BandConfig {
    double level = 0.95;
    std::size_t horizon = 0;  // prediction samples; 0 disables the forecast
    /// Known standard deviation of the forcing; estimated from the residual when absent.
    std::optional<double> noise_sigma;

    bool operator==(const BandConfig&) const = default;
};

struct HistogramConfig {
    std::optional<IndexWindow> window;
    std::set<std::string> exclude;

    bool operator==(const HistogramConfig& other) const;
};

struct ClassifyConfig {
    std::size_t window = 0;  // samples per classified window
    Measure measure = Measure::L1;
    std::set<std::string> exclude;
    std::map<std::string, FrequencyDict> references;

    bool operator==(const ClassifyConfig&) const = default;
};

struct PipelineConfig {
    std::string time_column = "t";
    MissingPolicy missing = MissingPolicy::Nan;
    NanPolicy nan_policy = NanPolicy::Reject;
    std::vector<ChannelConfig> channels;
    std::vector<std::string> combine;
    std::optional<BandConfig> band;
    std::optional<std::string> pattern;
    /// Channels searched by the match stage; empty means all.
    std::vector<std::string> match_channels;
    HistogramConfig histogram;
    std::optional<ClassifyConfig> classify;

    const ChannelConfig& channel(const std::string& name) const;
    bool operator==(const PipelineConfig&) const = default;
};

/// Throws InvalidConfig naming the offending field; alphabet problems keep
/// InvalidAlphabet or NonpositiveEpsilon.
PipelineConfig parse_config(std::string_view json_text);
/// Canonical JSON with every field spelled out; parse_config(serialize_config(c)) == c.
std::string serialize_config(const PipelineConfig& config);

}  // namespace symts
