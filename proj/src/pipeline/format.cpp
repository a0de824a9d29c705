#include "symts/pipeline/format.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>

#include "symts/error.hpp"

namespace symts {

std::string format_double(double value) {
    if (std::isnan(value)) {
        return "NaN";
    }
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    (void)ec;
    return std::string(buf, ptr);
}

std::string series_csv(std::span<const double> values, double start, double step) {
    std::string out = "index,time,value\n";
    for (std::size_t k = 0; k < values.size(); ++k) {
        out += std::to_string(k) + "," + format_double(start + static_cast<double>(k) * step) + "," +
               format_double(values[k]) + "\n";
    }
    return out;
}

std::string tokens_csv(std::span<const Token> tokens) {
    std::string out = "symbol,runLength,startIndex\n";
    for (const auto& t : tokens) {
        out += t.symbol;
        out += "," + std::to_string(t.run_length) + "," + std::to_string(t.start_index) + "\n";
    }
    return out;
}

std::vector<Token> parse_tokens_csv(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t line = 0;
    std::size_t begin = 0;
    while (begin < text.size()) {
        std::size_t end = text.find('\n', begin);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view row = text.substr(begin, end - begin);
        begin = end + 1;
        ++line;
        if (!row.empty() && row.back() == '\r') {
            row.remove_suffix(1);
        }
        if (line == 1) {
            if (row != "symbol,runLength,startIndex") {
                fail(ErrorCode::MalformedCsv, "line 1: expected header symbol,runLength,startIndex");
            }
            continue;
        }
        if (row.empty()) {
            continue;
        }
        const std::size_t c1 = row.find(',');
        const std::size_t c2 = c1 == std::string_view::npos ? c1 : row.find(',', c1 + 1);
        if (c1 != 1 || c2 == std::string_view::npos) {
            fail(ErrorCode::MalformedCsv, "line " + std::to_string(line) + ": expected symbol,runLength,startIndex");
        }
        Token t;
        t.symbol = row[0];
        const auto parse = [&](std::string_view field, std::size_t& value) {
            const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
            if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
                fail(ErrorCode::MalformedCsv, "line " + std::to_string(line) + ": bad integer '" +
                                                  std::string(field) + "'");
            }
        };
        parse(row.substr(c1 + 1, c2 - c1 - 1), t.run_length);
        parse(row.substr(c2 + 1), t.start_index);
        tokens.push_back(t);
    }
    validate_tokens(tokens);
    return tokens;
}

std::string band_csv(const ConfidenceBand& band, std::size_t first_index) {
    std::string out = "index,center,lower,upper\n";
    const Eigen::VectorXd lo = band.lower();
    const Eigen::VectorXd hi = band.upper();
    for (Eigen::Index j = 0; j < band.center.size(); ++j) {
        out += std::to_string(first_index + static_cast<std::size_t>(j)) + "," + format_double(band.center(j)) +
               "," + format_double(lo(j)) + "," + format_double(hi(j)) + "\n";
    }
    return out;
}

std::string matches_csv(std::span<const Match> matches) {
    std::string out = "start,end\n";
    for (const auto& m : matches) {
        out += std::to_string(m.start) + "," + std::to_string(m.end) + "\n";
    }
    return out;
}

std::string multistream_csv(const MultiStream& ms) {
    std::string out = "index,time,key\n";
    for (std::size_t j = 0; j < ms.size(); ++j) {
        out += std::to_string(j) + "," + format_double(ms.time(j)) + ",";
        out += ms.tuple(j);
        out += "\n";
    }
    return out;
}

std::string histogram_json(const FrequencyDict& fd) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [key, count] : fd.counts) {
        j[key] = count;
    }
    j["total"] = fd.total;
    return j.dump(2) + "\n";
}

std::string frequency_json(const FrequencyDict& fd) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& [key, count] : frequency_dictionary(fd)) {
        j.push_back(nlohmann::ordered_json::array({key, count}));
    }
    return j.dump() + "\n";
}

}  // namespace symts
