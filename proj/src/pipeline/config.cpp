#include "symts/pipeline/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <initializer_list>

#include "symts/error.hpp"

namespace symts {

using Json = nlohmann::ordered_json;

Alphabet AlphabetConfig::build(NanPolicy nan_policy) const {
    if (kind == Kind::Usd) {
        return usd_alphabet(epsilon).with_nan_policy(nan_policy);
    }
    return Alphabet(symbols, boundaries, range, catch_all, nan_policy);
}

bool AlphabetConfig::operator==(const AlphabetConfig& other) const {
    const bool same_range = range.has_value() == other.range.has_value() &&
                            (!range || (range->low == other.range->low && range->high == other.range->high));
    return kind == other.kind && epsilon == other.epsilon && symbols == other.symbols &&
           boundaries == other.boundaries && same_range && catch_all == other.catch_all;
}

bool LdoConfig::operator==(const LdoConfig& other) const {
    const auto same_constraints = [](const std::vector<Constraint>& a, const std::vector<Constraint>& b) {
        return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const Constraint& x, const Constraint& y) {
            return x.index == y.index && x.value == y.value;
        });
    };
    return degree == other.degree && coefficients == other.coefficients && accuracy == other.accuracy &&
           same_constraints(constraints, other.constraints) && rank_tolerance == other.rank_tolerance &&
           mode == other.mode;
}

bool HistogramConfig::operator==(const HistogramConfig& other) const {
    const bool same_window =
        window.has_value() == other.window.has_value() &&
        (!window || (window->first == other.window->first && window->count == other.window->count));
    return same_window && exclude == other.exclude;
}

const ChannelConfig& PipelineConfig::channel(const std::string& name) const {
    for (const auto& c : channels) {
        if (c.name == name) {
            return c;
        }
    }
    fail(ErrorCode::InvalidConfig, "unknown channel '" + name + "'");
}

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& message) {
    fail(ErrorCode::InvalidConfig, path + ": " + message);
}

void allow_keys(const Json& object, const std::string& path, std::initializer_list<const char*> keys) {
    if (!object.is_object()) {
        invalid(path, "expected an object");
    }
    for (const auto& item : object.items()) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return item.key() == k; })) {
            invalid(path, "unknown field '" + item.key() + "'");
        }
    }
}

double number(const Json& value, const std::string& path) {
    if (!value.is_number()) {
        invalid(path, "expected a number");
    }
    return value.get<double>();
}

long integer(const Json& value, const std::string& path, long min) {
    if (!value.is_number_integer()) {
        invalid(path, "expected an integer");
    }
    const long v = value.get<long>();
    if (v < min) {
        invalid(path, "must be at least " + std::to_string(min));
    }
    return v;
}

std::string text(const Json& value, const std::string& path) {
    if (!value.is_string()) {
        invalid(path, "expected a string");
    }
    return value.get<std::string>();
}

char single_char(const Json& value, const std::string& path) {
    const std::string s = text(value, path);
    if (s.size() != 1) {
        invalid(path, "expected a single character");
    }
    return s.front();
}

std::set<std::string> string_set(const Json& value, const std::string& path) {
    if (!value.is_array()) {
        invalid(path, "expected an array of strings");
    }
    std::set<std::string> out;
    for (std::size_t i = 0; i < value.size(); ++i) {
        out.insert(text(value[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

template <typename E>
E enumeration(const Json& value, const std::string& path, std::initializer_list<std::pair<const char*, E>> names) {
    const std::string s = text(value, path);
    for (const auto& [name, e] : names) {
        if (s == name) {
            return e;
        }
    }
    std::string allowed;
    for (const auto& [name, e] : names) {
        allowed += (allowed.empty() ? "" : ", ") + std::string(name);
    }
    invalid(path, "'" + s + "' is not one of " + allowed);
}

AlphabetConfig parse_alphabet(const Json& j, const std::string& path) {
    allow_keys(j, path, {"type", "epsilon", "symbols", "boundaries", "range", "catchAll"});
    AlphabetConfig a;
    if (!j.contains("type")) {
        invalid(path, "missing field 'type'");
    }
    a.kind = enumeration<AlphabetConfig::Kind>(j["type"], path + ".type",
                                               {{"usd", AlphabetConfig::Kind::Usd},
                                                {"intervals", AlphabetConfig::Kind::Intervals}});
    if (a.kind == AlphabetConfig::Kind::Usd) {
        if (!j.contains("epsilon")) {
            invalid(path, "usd alphabet needs 'epsilon'");
        }
        a.epsilon = number(j["epsilon"], path + ".epsilon");
        for (const char* key : {"symbols", "boundaries", "range", "catchAll"}) {
            if (j.contains(key)) {
                invalid(path, std::string("field '") + key + "' does not apply to a usd alphabet");
            }
        }
        return a;
    }
    if (j.contains("epsilon")) {
        invalid(path, "field 'epsilon' does not apply to an intervals alphabet");
    }
    if (!j.contains("symbols") || !j.contains("boundaries")) {
        invalid(path, "intervals alphabet needs 'symbols' and 'boundaries'");
    }
    a.symbols = text(j["symbols"], path + ".symbols");
    const Json& b = j["boundaries"];
    if (!b.is_array()) {
        invalid(path + ".boundaries", "expected an array of numbers");
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
        a.boundaries.push_back(number(b[i], path + ".boundaries[" + std::to_string(i) + "]"));
    }
    if (j.contains("range")) {
        const Json& r = j["range"];
        if (!r.is_array() || r.size() != 2) {
            invalid(path + ".range", "expected [low, high]");
        }
        a.range = ValueRange{number(r[0], path + ".range[0]"), number(r[1], path + ".range[1]")};
    }
    if (j.contains("catchAll")) {
        a.catch_all = single_char(j["catchAll"], path + ".catchAll");
    }
    return a;
}

OperatorConfig parse_operator(const Json& j, const std::string& path) {
    allow_keys(j, path, {"order", "accuracy", "boundary"});
    OperatorConfig op;
    if (j.contains("order")) {
        op.order = static_cast<int>(integer(j["order"], path + ".order", 0));
    }
    if (j.contains("accuracy")) {
        op.accuracy = static_cast<int>(integer(j["accuracy"], path + ".accuracy", 1));
    }
    if (j.contains("boundary")) {
        op.boundary = enumeration<BoundaryMode>(j["boundary"], path + ".boundary",
                                                {{"valid", BoundaryMode::Valid}, {"one_sided", BoundaryMode::OneSided}});
    }
    if (op.order > op.accuracy) {
        invalid(path, "order " + std::to_string(op.order) + " exceeds accuracy " + std::to_string(op.accuracy));
    }
    return op;
}

LdoConfig parse_ldo(const Json& j, const std::string& path) {
    allow_keys(j, path, {"degree", "coefficients", "accuracy", "constraints", "rankTolerance", "mode"});
    LdoConfig ldo;
    if (!j.contains("degree") || !j.contains("coefficients")) {
        invalid(path, "ldo needs 'degree' and 'coefficients'");
    }
    ldo.degree = static_cast<int>(integer(j["degree"], path + ".degree", 0));
    const Json& coeffs = j["coefficients"];
    if (!coeffs.is_array()) {
        invalid(path + ".coefficients", "expected an array");
    }
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const std::string at = path + ".coefficients[" + std::to_string(i) + "]";
        if (coeffs[i].is_array()) {
            std::vector<double> series;
            for (std::size_t k = 0; k < coeffs[i].size(); ++k) {
                series.push_back(number(coeffs[i][k], at + "[" + std::to_string(k) + "]"));
            }
            ldo.coefficients.emplace_back(std::move(series));
        } else {
            ldo.coefficients.emplace_back(number(coeffs[i], at));
        }
    }
    if (ldo.coefficients.size() != static_cast<std::size_t>(ldo.degree) + 1) {
        invalid(path + ".coefficients", "degree " + std::to_string(ldo.degree) + " needs " +
                                            std::to_string(ldo.degree + 1) + " coefficients");
    }
    ldo.accuracy = j.contains("accuracy") ? static_cast<int>(integer(j["accuracy"], path + ".accuracy", 1))
                                          : std::max(2, ldo.degree + ldo.degree % 2);
    if (ldo.accuracy < ldo.degree) {
        invalid(path + ".accuracy", "must be at least the degree");
    }
    if (j.contains("constraints")) {
        const Json& cs = j["constraints"];
        if (!cs.is_array()) {
            invalid(path + ".constraints", "expected an array");
        }
        for (std::size_t i = 0; i < cs.size(); ++i) {
            const std::string at = path + ".constraints[" + std::to_string(i) + "]";
            allow_keys(cs[i], at, {"index", "value"});
            if (!cs[i].contains("index") || !cs[i].contains("value")) {
                invalid(at, "constraint needs 'index' and 'value'");
            }
            ldo.constraints.push_back(Constraint{static_cast<std::size_t>(integer(cs[i]["index"], at + ".index", 0)),
                                                 number(cs[i]["value"], at + ".value")});
        }
    }
    if (j.contains("rankTolerance")) {
        ldo.rank_tolerance = number(j["rankTolerance"], path + ".rankTolerance");
        if (!(ldo.rank_tolerance > 0.0 && ldo.rank_tolerance < 1.0)) {
            invalid(path + ".rankTolerance", "must lie in (0, 1)");
        }
    }
    if (j.contains("mode")) {
        ldo.mode = enumeration<LdoConfig::Mode>(j["mode"], path + ".mode",
                                                {{"inverse", LdoConfig::Mode::Inverse},
                                                 {"forward", LdoConfig::Mode::Forward}});
    }
    for (std::size_t i = 0; i < ldo.coefficients.size(); ++i) {
        if (const double* c = std::get_if<double>(&ldo.coefficients[i]); c && !std::isfinite(*c)) {
            invalid(path + ".coefficients[" + std::to_string(i) + "]", "must be finite");
        }
    }
    return ldo;
}

FrequencyDict parse_dict(const Json& j, const std::string& path) {
    if (!j.is_object()) {
        invalid(path, "expected an object of counts");
    }
    FrequencyDict fd;
    std::optional<std::size_t> declared_total;
    for (const auto& item : j.items()) {
        const auto count = static_cast<std::size_t>(integer(item.value(), path + "." + item.key(), 0));
        if (item.key() == "total") {
            declared_total = count;
            continue;
        }
        fd.add(item.key(), count);
    }
    if (declared_total && *declared_total != fd.total) {
        invalid(path + ".total", "does not equal the sum of the counts");
    }
    return fd;
}

ChannelConfig parse_channel(const Json& j, const std::string& path) {
    allow_keys(j, path, {"name", "csvColumn", "alphabet", "operator", "ldo"});
    ChannelConfig c;
    if (!j.contains("name") || !j.contains("alphabet")) {
        invalid(path, "channel needs 'name' and 'alphabet'");
    }
    c.name = text(j["name"], path + ".name");
    if (c.name.empty() || !std::all_of(c.name.begin(), c.name.end(), [](char ch) {
            return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.';
        }) || c.name.front() == '.') {
        invalid(path + ".name", "must be non-empty and use only letters, digits, '_', '-' and '.'");
    }
    c.column = j.contains("csvColumn") ? text(j["csvColumn"], path + ".csvColumn") : c.name;
    c.alphabet = parse_alphabet(j["alphabet"], path + ".alphabet");
    if (j.contains("operator") && j.contains("ldo")) {
        invalid(path, "a channel takes either 'operator' or 'ldo', not both");
    }
    if (j.contains("operator")) {
        c.op = parse_operator(j["operator"], path + ".operator");
    }
    if (j.contains("ldo")) {
        c.ldo = parse_ldo(j["ldo"], path + ".ldo");
    }
    return c;
}

Json dump_window(const IndexWindow& w) { return Json{{"first", w.first}, {"count", w.count}}; }

Json dump_dict(const FrequencyDict& fd) {
    Json out = Json::object();
    for (const auto& [key, count] : fd.counts) {
        out[key] = count;
    }
    return out;
}

}  // namespace

PipelineConfig parse_config(std::string_view json_text) {
    Json j;
    try {
        j = Json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorCode::InvalidConfig, std::string("malformed JSON: ") + e.what());
    }
    allow_keys(j, "config",
               {"timeColumn", "missing", "nanPolicy", "channels", "combine", "band", "pattern", "matchChannels", "histogram",
                "classify"});
    PipelineConfig c;
    if (j.contains("timeColumn")) {
        c.time_column = text(j["timeColumn"], "timeColumn");
    }
    if (j.contains("missing")) {
        c.missing = enumeration<MissingPolicy>(j["missing"], "missing",
                                               {{"nan", MissingPolicy::Nan}, {"drop", MissingPolicy::Drop}});
    }
    if (j.contains("nanPolicy")) {
        c.nan_policy = enumeration<NanPolicy>(j["nanPolicy"], "nanPolicy",
                                              {{"reject", NanPolicy::Reject}, {"gap", NanPolicy::Gap}});
    }
    if (!j.contains("channels") || !j["channels"].is_array() || j["channels"].empty()) {
        invalid("channels", "expected a non-empty array");
    }
    for (std::size_t i = 0; i < j["channels"].size(); ++i) {
        const std::string path = "channels[" + std::to_string(i) + "]";
        ChannelConfig ch = parse_channel(j["channels"][i], path);
        for (const auto& other : c.channels) {
            if (other.name == ch.name) {
                invalid(path + ".name", "duplicate channel '" + ch.name + "'");
            }
        }
        try {
            (void)ch.alphabet.build(c.nan_policy);
        } catch (const Error& e) {
            fail(e.code(), path + ".alphabet: " + e.detail());
        }
        c.channels.push_back(std::move(ch));
    }
    const auto channel_list = [&](const char* field, std::vector<std::string>& out) {
        const Json& names = j[field];
        if (!names.is_array()) {
            invalid(field, "expected an array of channel names");
        }
        for (std::size_t i = 0; i < names.size(); ++i) {
            const std::string at = std::string(field) + "[" + std::to_string(i) + "]";
            const std::string name = text(names[i], at);
            if (std::none_of(c.channels.begin(), c.channels.end(), [&](const auto& ch) { return ch.name == name; })) {
                invalid(at, "unknown channel '" + name + "'");
            }
            if (std::find(out.begin(), out.end(), name) != out.end()) {
                invalid(at, "channel '" + name + "' listed twice");
            }
            out.push_back(name);
        }
    };
    if (j.contains("combine")) {
        channel_list("combine", c.combine);
    }
    if (j.contains("matchChannels")) {
        channel_list("matchChannels", c.match_channels);
    }
    if (j.contains("band")) {
        const Json& b = j["band"];
        allow_keys(b, "band", {"level", "horizon", "noiseSigma"});
        BandConfig band;
        if (b.contains("level")) {
            band.level = number(b["level"], "band.level");
        }
        if (!(band.level > 0.0 && band.level < 1.0)) {
            invalid("band.level", "must lie strictly between 0 and 1");
        }
        if (b.contains("horizon")) {
            band.horizon = static_cast<std::size_t>(integer(b["horizon"], "band.horizon", 0));
        }
        if (b.contains("noiseSigma")) {
            band.noise_sigma = number(b["noiseSigma"], "band.noiseSigma");
            if (!(*band.noise_sigma > 0.0) || !std::isfinite(*band.noise_sigma)) {
                invalid("band.noiseSigma", "must be finite and positive");
            }
        }
        c.band = band;
    }
    if (j.contains("pattern")) {
        c.pattern = text(j["pattern"], "pattern");
    }
    if (j.contains("histogram")) {
        const Json& h = j["histogram"];
        allow_keys(h, "histogram", {"window", "exclude"});
        if (h.contains("window")) {
            allow_keys(h["window"], "histogram.window", {"first", "count"});
            if (!h["window"].contains("first") || !h["window"].contains("count")) {
                invalid("histogram.window", "needs 'first' and 'count'");
            }
            c.histogram.window = IndexWindow{
                static_cast<std::size_t>(integer(h["window"]["first"], "histogram.window.first", 0)),
                static_cast<std::size_t>(integer(h["window"]["count"], "histogram.window.count", 0))};
        }
        if (h.contains("exclude")) {
            c.histogram.exclude = string_set(h["exclude"], "histogram.exclude");
        }
    }
    if (j.contains("classify")) {
        const Json& k = j["classify"];
        allow_keys(k, "classify", {"window", "measure", "exclude", "references"});
        ClassifyConfig cl;
        if (!k.contains("window") || !k.contains("references")) {
            invalid("classify", "needs 'window' and 'references'");
        }
        cl.window = static_cast<std::size_t>(integer(k["window"], "classify.window", 1));
        if (k.contains("measure")) {
            cl.measure = enumeration<Measure>(k["measure"], "classify.measure",
                                              {{"l1", Measure::L1}, {"cosine", Measure::Cosine}});
        }
        if (k.contains("exclude")) {
            cl.exclude = string_set(k["exclude"], "classify.exclude");
        }
        if (!k["references"].is_object() || k["references"].empty()) {
            invalid("classify.references", "expected a non-empty object of histograms");
        }
        for (const auto& item : k["references"].items()) {
            cl.references[item.key()] = parse_dict(item.value(), "classify.references." + item.key());
        }
        if (c.combine.empty()) {
            invalid("classify", "classification needs a non-empty 'combine' list");
        }
        c.classify = std::move(cl);
    }
    return c;
}

std::string serialize_config(const PipelineConfig& c) {
    Json j;
    j["timeColumn"] = c.time_column;
    j["missing"] = c.missing == MissingPolicy::Nan ? "nan" : "drop";
    j["nanPolicy"] = c.nan_policy == NanPolicy::Reject ? "reject" : "gap";
    j["channels"] = Json::array();
    for (const auto& ch : c.channels) {
        Json cj;
        cj["name"] = ch.name;
        cj["csvColumn"] = ch.column;
        Json a;
        if (ch.alphabet.kind == AlphabetConfig::Kind::Usd) {
            a["type"] = "usd";
            a["epsilon"] = ch.alphabet.epsilon;
        } else {
            a["type"] = "intervals";
            a["symbols"] = ch.alphabet.symbols;
            a["boundaries"] = ch.alphabet.boundaries;
            if (ch.alphabet.range) {
                a["range"] = Json::array({ch.alphabet.range->low, ch.alphabet.range->high});
            }
            if (ch.alphabet.catch_all) {
                a["catchAll"] = std::string(1, *ch.alphabet.catch_all);
            }
        }
        cj["alphabet"] = a;
        if (ch.op) {
            cj["operator"] = Json{{"order", ch.op->order},
                                  {"accuracy", ch.op->accuracy},
                                  {"boundary", ch.op->boundary == BoundaryMode::Valid ? "valid" : "one_sided"}};
        }
        if (ch.ldo) {
            Json lj;
            lj["degree"] = ch.ldo->degree;
            lj["coefficients"] = Json::array();
            for (const auto& coeff : ch.ldo->coefficients) {
                if (const double* v = std::get_if<double>(&coeff)) {
                    lj["coefficients"].push_back(*v);
                } else {
                    lj["coefficients"].push_back(std::get<std::vector<double>>(coeff));
                }
            }
            lj["accuracy"] = ch.ldo->accuracy;
            lj["constraints"] = Json::array();
            for (const auto& con : ch.ldo->constraints) {
                lj["constraints"].push_back(Json{{"index", con.index}, {"value", con.value}});
            }
            lj["rankTolerance"] = ch.ldo->rank_tolerance;
            lj["mode"] = ch.ldo->mode == LdoConfig::Mode::Inverse ? "inverse" : "forward";
            cj["ldo"] = lj;
        }
        j["channels"].push_back(cj);
    }
    j["combine"] = c.combine;
    if (c.band) {
        Json b;
        b["level"] = c.band->level;
        b["horizon"] = c.band->horizon;
        if (c.band->noise_sigma) {
            b["noiseSigma"] = *c.band->noise_sigma;
        }
        j["band"] = b;
    }
    if (c.pattern) {
        j["pattern"] = *c.pattern;
    }
    j["matchChannels"] = c.match_channels;
    Json h;
    if (c.histogram.window) {
        h["window"] = dump_window(*c.histogram.window);
    }
    h["exclude"] = c.histogram.exclude;
    j["histogram"] = h;
    if (c.classify) {
        Json k;
        k["window"] = c.classify->window;
        k["measure"] = c.classify->measure == Measure::L1 ? "l1" : "cosine";
        k["exclude"] = c.classify->exclude;
        Json refs = Json::object();
        for (const auto& [label, fd] : c.classify->references) {
            refs[label] = dump_dict(fd);
        }
        k["references"] = refs;
        j["classify"] = k;
    }
    return j.dump(2) + "\n";
}

}  // namespace symts
