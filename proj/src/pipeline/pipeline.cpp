#include "symts/pipeline/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <optional>

#include "symts/error.hpp"
#include "symts/ldo.hpp"
#include "symts/mcla.hpp"
#include "symts/pattern.hpp"
#include "symts/pipeline/format.hpp"
#include "symts/scla.hpp"
#include "symts/streaming.hpp"
#include "symts/student_t.hpp"
#include "symts/uncertainty.hpp"

namespace symts {

std::set<Stage> all_stages() {
    return {Stage::Derive, Stage::Solve, Stage::Symbolize, Stage::Combine, Stage::Histogram, Stage::Classify,
            Stage::Match};
}

namespace {

const char* stage_name(Stage stage) {
    switch (stage) {
        case Stage::Derive:
            return "derive";
        case Stage::Solve:
            return "solve";
        case Stage::Symbolize:
            return "symbolize";
        case Stage::Combine:
            return "combine";
        case Stage::Histogram:
            return "hist";
        case Stage::Classify:
            return "classify";
        case Stage::Match:
            return "match";
    }
    return "?";
}

template <typename F>
auto in_context(const std::string& where, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const Error& e) {
        fail(e.code(), where + ": " + e.detail());
    }
}

std::string channel_context(const std::string& name, Stage stage) {
    return "channel " + name + ", stage " + stage_name(stage);
}

struct ChannelResult {
    std::string name;
    std::vector<double> derived;
    double start = 0.0;
    double step = 1.0;
    std::optional<ConfidenceBand> band;
    std::optional<ConfidenceBand> prediction;
    SymbolStream symbols;
    std::vector<Token> tokens;
    std::vector<Match> matches;
    bool solved = false;
};

ConfidenceBand known_scale_band(const Eigen::VectorXd& y, const Eigen::MatrixXd& lambda_y, double level) {
    const double z = normal_quantile(1.0 - (1.0 - level) / 2.0);
    ConfidenceBand band;
    band.level = level;
    band.center = y;
    band.half_width.resize(y.size());
    for (Eigen::Index j = 0; j < y.size(); ++j) {
        band.half_width(j) = z * std::sqrt(std::max(lambda_y(j, j), 0.0));
    }
    return band;
}

void require_finite(std::span<const double> values, const char* what) {
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!std::isfinite(values[k])) {
            fail(ErrorCode::NonFiniteSample, std::string(what) + " sample " + std::to_string(k) + " is not finite");
        }
    }
}

struct ChannelPlan {
    bool solve = false;
    bool symbolize = false;
    bool match = false;
};

ChannelResult process_channel(const PipelineConfig& config, const ChannelConfig& ch, const ChannelSeries& series,
                              const ChannelPlan& plan, const PipelineOverrides& overrides) {
    ChannelResult r;
    r.name = ch.name;
    const Grid& grid = series.grid;

    const bool inverse = ch.ldo && ch.ldo->mode == LdoConfig::Mode::Inverse;
    in_context(channel_context(ch.name, inverse ? Stage::Solve : Stage::Derive), [&] {
        r.start = grid.start();
        r.step = grid.step();
        if (ch.op) {
            const LocalKernel kernel = extract_local_kernel(ch.op->order, ch.op->accuracy, grid.step());
            r.derived = apply_streaming(kernel, series.values, ch.op->boundary);
            if (ch.op->boundary == BoundaryMode::Valid) {
                r.start += static_cast<double>(kernel.half_width()) * grid.step();
            }
        } else if (ch.ldo) {
            require_finite(series.values, ch.ldo->mode == LdoConfig::Mode::Inverse ? "forcing" : "input");
            const LdoMatrix op = assemble_ldo(ch.ldo->spec(), grid, ch.ldo->accuracy, ch.ldo->rank_tolerance);
            if (ch.ldo->mode == LdoConfig::Mode::Forward) {
                const Eigen::VectorXd g = apply_ldo(op, series.values);
                r.derived.assign(g.data(), g.data() + g.size());
                return;
            }
            const InverseSolution sol = solve_inverse(op, series.values, ch.ldo->constraints);
            r.derived.assign(sol.y.data(), sol.y.data() + sol.y.size());
            r.solved = true;
            if (!plan.solve || !config.band) {
                return;
            }
            const BandConfig& bc = *config.band;
            const double level = overrides.level.value_or(bc.level);
            const auto n = static_cast<Eigen::Index>(op.size());
            const double noise2 = bc.noise_sigma ? *bc.noise_sigma * *bc.noise_sigma : 1.0;
            const Eigen::MatrixXd lambda_g = noise2 * Eigen::MatrixXd::Identity(n, n);
            std::vector<std::size_t> indices;
            for (const auto& c : ch.ldo->constraints) {
                indices.push_back(c.index);
            }
            const Eigen::MatrixXd lambda_y = propagate_inverse(solution_map(op, indices), lambda_g);
            if (bc.noise_sigma) {
                r.band = known_scale_band(sol.y, lambda_y, level);
            } else {
                const ResidualVariance rv = estimate_residual_variance(as_span(sol.residual), op.rank());
                r.band = confidence_band(as_span(sol.y), lambda_y, rv.sigma2, rv.dof, level);
            }
            if (bc.horizon > 0) {
                PredictionOptions opts;
                opts.covariance_scale_known = bc.noise_sigma.has_value();
                opts.rank_tolerance = ch.ldo->rank_tolerance;
                r.prediction = prediction_band(as_span(sol.y), lambda_y, op, bc.horizon, level, opts);
            }
        } else {
            r.derived = series.values;
        }
    });

    if (plan.symbolize || plan.match) {
        in_context(channel_context(ch.name, Stage::Symbolize), [&] {
            const Alphabet alphabet = ch.alphabet.build(config.nan_policy);
            r.symbols = quantize(r.derived, alphabet);
            r.tokens = compress_runs(r.symbols);
        });
    }
    if (plan.match) {
        in_context(channel_context(ch.name, Stage::Match), [&] {
            const std::string text = overrides.pattern.value_or(config.pattern.value_or(""));
            const SymbolPattern pattern = compile_pattern(text, ch.alphabet.build(config.nan_policy));
            r.matches = find_all_tokens(pattern, r.tokens);
        });
    }
    return r;
}

}  // namespace

std::vector<std::string> input_columns(const PipelineConfig& config) {
    std::vector<std::string> columns;
    for (const auto& ch : config.channels) {
        if (std::find(columns.begin(), columns.end(), ch.column) == columns.end()) {
            columns.push_back(ch.column);
        }
    }
    return columns;
}

std::set<Stage> supported_stages(const PipelineConfig& config, const PipelineOverrides& overrides) {
    std::set<Stage> stages = {Stage::Derive, Stage::Symbolize};
    for (const auto& ch : config.channels) {
        if (ch.ldo && ch.ldo->mode == LdoConfig::Mode::Inverse) {
            stages.insert(Stage::Solve);
        }
    }
    if (!config.combine.empty()) {
        stages.insert({Stage::Combine, Stage::Histogram});
    }
    if (config.classify) {
        stages.insert(Stage::Classify);
    }
    if (config.pattern || overrides.pattern) {
        stages.insert(Stage::Match);
    }
    return stages;
}

Bundle run_pipeline(const PipelineConfig& config, const std::vector<ChannelSeries>& inputs,
                    const std::set<Stage>& stages, const PipelineOverrides& overrides) {
    if (overrides.channel) {
        (void)config.channel(*overrides.channel);
    }
    if (overrides.level && !(*overrides.level > 0.0 && *overrides.level < 1.0)) {
        fail(ErrorCode::InvalidConfig, "band level override must lie strictly between 0 and 1");
    }
    const bool wants_match = stages.contains(Stage::Match);
    if (wants_match && !overrides.pattern && !config.pattern) {
        fail(ErrorCode::InvalidConfig, "stage match needs a pattern");
    }
    const bool wants_combined =
        stages.contains(Stage::Combine) || stages.contains(Stage::Histogram) || stages.contains(Stage::Classify);
    if (wants_combined && config.combine.empty()) {
        fail(ErrorCode::InvalidConfig, "stages combine, hist and classify need a non-empty 'combine' list");
    }
    if (stages.contains(Stage::Classify) && !config.classify) {
        fail(ErrorCode::InvalidConfig, "stage classify needs a 'classify' section");
    }

    const auto selected = [&](const std::string& name) { return !overrides.channel || *overrides.channel == name; };
    const auto in_combine = [&](const std::string& name) {
        return wants_combined && std::find(config.combine.begin(), config.combine.end(), name) != config.combine.end();
    };

    std::vector<const ChannelConfig*> work;
    std::vector<ChannelPlan> plans;
    for (const auto& ch : config.channels) {
        if (!selected(ch.name) && !in_combine(ch.name)) {
            continue;
        }
        ChannelPlan plan;
        plan.solve = selected(ch.name) && stages.contains(Stage::Solve);
        plan.symbolize = in_combine(ch.name) || (selected(ch.name) && stages.contains(Stage::Symbolize));
        plan.match = selected(ch.name) && wants_match &&
                     (overrides.channel || config.match_channels.empty() ||
                      std::find(config.match_channels.begin(), config.match_channels.end(), ch.name) !=
                          config.match_channels.end());
        work.push_back(&ch);
        plans.push_back(plan);
    }

    // Channels are independent up to the combine stage.
    std::vector<std::future<ChannelResult>> futures;
    for (std::size_t i = 0; i < work.size(); ++i) {
        const ChannelConfig& ch = *work[i];
        const auto it = std::find_if(inputs.begin(), inputs.end(), [&](const auto& s) { return s.name == ch.column; });
        if (it == inputs.end()) {
            fail(ErrorCode::MissingColumn, "channel " + ch.name + ": no input column '" + ch.column + "'");
        }
        futures.push_back(std::async(std::launch::async, process_channel, std::cref(config), std::cref(ch),
                                     std::cref(*it), plans[i], std::cref(overrides)));
    }
    std::vector<ChannelResult> results;
    std::optional<Error> first_error;
    for (auto& f : futures) {
        try {
            results.push_back(f.get());
        } catch (const Error& e) {
            if (!first_error) {
                first_error = e;
            }
        }
    }
    if (first_error) {
        throw *first_error;
    }

    Bundle bundle;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const ChannelResult& r = results[i];
        if (!selected(r.name)) {
            continue;
        }
        if (stages.contains(Stage::Derive)) {
            bundle[r.name + ".derived.csv"] = series_csv(r.derived, r.start, r.step);
        }
        if (stages.contains(Stage::Solve)) {
            if (!r.solved) {
                if (overrides.channel) {
                    fail(ErrorCode::InvalidConfig,
                         channel_context(r.name, Stage::Solve) + ": channel has no inverse ldo section");
                }
            } else {
                bundle[r.name + ".solution.csv"] = series_csv(r.derived, r.start, r.step);
                if (r.band) {
                    bundle[r.name + ".band.csv"] = band_csv(*r.band);
                }
                if (r.prediction) {
                    bundle[r.name + ".prediction.csv"] = band_csv(*r.prediction, r.derived.size());
                }
            }
        }
        if (stages.contains(Stage::Symbolize)) {
            bundle[r.name + ".tokens.csv"] = tokens_csv(r.tokens);
        }
        if (plans[i].match) {
            bundle[r.name + ".matches.csv"] = matches_csv(r.matches);
        }
    }

    if (!wants_combined) {
        return bundle;
    }
    std::vector<SymbolStream> streams;
    std::vector<Grid> grids;
    for (const auto& name : config.combine) {
        const auto it = std::find_if(results.begin(), results.end(), [&](const auto& r) { return r.name == name; });
        in_context("channel " + name + ", stage combine", [&] {
            grids.emplace_back(it->symbols.size(), it->step, it->start);
        });
        streams.push_back(it->symbols);
    }
    const MultiStream ms = in_context("stage combine", [&] { return align_and_combine(streams, grids, config.combine); });
    if (stages.contains(Stage::Combine)) {
        bundle["combined.csv"] = multistream_csv(ms);
    }
    if (stages.contains(Stage::Histogram)) {
        in_context("stage hist", [&] {
            const FrequencyDict fd = exclude_symbols(histogram(ms, config.histogram.window), config.histogram.exclude);
            bundle["histogram.json"] = histogram_json(fd);
            bundle["frequency.json"] = frequency_json(fd);
        });
    }
    if (stages.contains(Stage::Classify)) {
        in_context("stage classify", [&] {
            const ClassifyConfig& cl = *config.classify;
            std::string out = "window,start,end,label,score\n";
            for (std::size_t k = 0; (k + 1) * cl.window <= ms.size(); ++k) {
                const FrequencyDict fd = histogram(ms, IndexWindow{k * cl.window, cl.window});
                const Classification c = classify_operation(fd, cl.references, cl.measure, cl.exclude);
                out += std::to_string(k) + "," + std::to_string(k * cl.window) + "," +
                       std::to_string((k + 1) * cl.window) + "," + c.label + "," + format_double(c.score) + "\n";
            }
            bundle["classification.csv"] = out;
        });
    }
    return bundle;
}

Bundle run_pipeline_csv(const PipelineConfig& config, std::string_view csv_text, const std::set<Stage>& stages,
                        const PipelineOverrides& overrides) {
    const auto inputs = in_context("stage ingest", [&] {
        return parse_csv(csv_text, config.time_column, input_columns(config), config.missing);
    });
    return run_pipeline(config, inputs, stages, overrides);
}

void write_bundle(const Bundle& bundle, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        fail(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
    }
    for (const auto& [name, content] : bundle) {
        const auto path = dir / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            fail(ErrorCode::Io, "cannot write " + path.string());
        }
    }
}

}  // namespace symts
