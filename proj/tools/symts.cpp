#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "symts/error.hpp"
#include "symts/pipeline/config.hpp"
#include "symts/pipeline/csv_input.hpp"
#include "symts/pipeline/pipeline.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

int exit_code(symts::ErrorCode code) {
    switch (symts::category(code)) {
        case symts::ErrorCategory::Usage:
            return kExitUsage;
        case symts::ErrorCategory::Data:
            return kExitData;
        case symts::ErrorCategory::Numerical:
            return kExitNumerical;
    }
    return kExitData;
}

struct Options {
    std::string config;
    std::string input;
    std::string out = ".";
    std::optional<std::string> channel;
    std::optional<double> level;
    std::optional<std::string> pattern;
};

void add_common(CLI::App* cmd, Options& opts) {
    cmd->add_option("--config", opts.config, "pipeline configuration (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--input", opts.input, "sensor log (CSV with header)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", opts.out, "output directory")->capture_default_str();
    cmd->add_option("--channel", opts.channel, "only emit per-channel outputs for this channel");
    cmd->add_option("--level", opts.level, "band level override, e.g. 0.95");
    cmd->add_option("--pattern", opts.pattern, "match pattern override");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Operator-based derivation, symbolization and pattern search for sensor time series"};
    app.require_subcommand(1);
    Options opts;

    struct Command {
        const char* name;
        const char* help;
        std::set<symts::Stage> stages;
    };
    const std::vector<Command> commands = {
        {"derive", "apply each channel's operator; writes <ch>.derived.csv", {symts::Stage::Derive}},
        {"solve", "solve inverse problems with bands; writes <ch>.solution.csv, .band.csv, .prediction.csv",
         {symts::Stage::Solve}},
        {"symbolize", "quantize and run-length encode; writes <ch>.tokens.csv", {symts::Stage::Symbolize}},
        {"combine", "align the combine channels; writes combined.csv", {symts::Stage::Combine}},
        {"hist", "histogram of combined symbols; writes histogram.json, frequency.json", {symts::Stage::Histogram}},
        {"classify", "label windows by reference histograms; writes classification.csv", {symts::Stage::Classify}},
        {"match", "find pattern matches per channel; writes <ch>.matches.csv", {symts::Stage::Match}},
        {"run", "every stage the configuration supports", {}},
    };
    std::vector<std::pair<CLI::App*, const Command*>> subs;
    for (const auto& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        add_common(sub, opts);
        subs.emplace_back(sub, &c);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        const symts::PipelineConfig config = symts::parse_config(symts::read_text_file(opts.config));
        std::set<symts::Stage> stages;
        for (const auto& [sub, cmd] : subs) {
            if (sub->parsed()) {
                stages = cmd->stages;
            }
        }
        symts::PipelineOverrides overrides{opts.channel, opts.level, opts.pattern};
        if (stages.empty()) {
            stages = symts::supported_stages(config, overrides);
        }
        const symts::Bundle bundle =
            symts::run_pipeline_csv(config, symts::read_text_file(opts.input), stages, overrides);
        symts::write_bundle(bundle, opts.out);
        for (const auto& [name, content] : bundle) {
            std::cout << (std::filesystem::path(opts.out) / name).string() << "\n";
        }
        return 0;
    } catch (const symts::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
