#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "symts/grid.hpp"
#include "symts/mcla.hpp"
#include "symts/pattern.hpp"
#include "symts/scla.hpp"
#include "symts/uncertainty.hpp"

namespace symts {

/// Shortest form with 17 significant digits, locale independent; NaN prints as "NaN".
std::string format_double(double value);

/// index,time,value
std::string series_csv(std::span<const double> values, double start, double step);
/// symbol,runLength,startIndex
std::string tokens_csv(std::span<const Token> tokens);
/// Inverse of tokens_csv. Throws MalformedCsv and MalformedTokens.
std::vector<Token> parse_tokens_csv(std::string_view text);
/// index,center,lower,upper; index counts from first_index.
std::string band_csv(const ConfidenceBand& band, std::size_t first_index = 0);
/// start,end
std::string matches_csv(std::span<const Match> matches);
/// index,time,key
std::string multistream_csv(const MultiStream& ms);
/// {"key": count, ..., "total": N} with keys in ascending order.
std::string histogram_json(const FrequencyDict& fd);
/// [["key", count], ...] in frequency-dictionary order.
std::string frequency_json(const FrequencyDict& fd);

}  // namespace symts
