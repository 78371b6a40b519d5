// Command-line front end: losses, tests, fit, scr, print-defaults.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "solvcap/config.hpp"
#include "solvcap/error.hpp"
#include "solvcap/pipeline.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitComputation = 3;

int report_error(std::string_view type, const std::string& message, const std::vector<std::string>& details = {}) {
    nlohmann::ordered_json error{{"type", type}, {"message", message}};
    if (!details.empty()) error["details"] = details;
    nlohmann::ordered_json doc{{"errors", nlohmann::ordered_json::array({error})}};
    std::cerr << doc.dump() << '\n';
    const bool input_problem = type == "parse" || type == "validation" || type == "config" || type == "usage";
    return input_problem ? kExitValidation : kExitComputation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Normalized one-year losses and solvency capital for non-life insurers"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> m;
    std::optional<unsigned> threads;
    std::string which = "all";

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file (defaults when omitted)");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "random seed for simulation and permutations");
        sub->add_option("--m", m, "loss-ratio window in accident years")->check(CLI::PositiveNumber);
        sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    };
    auto* losses = app.add_subcommand("losses", "normalized losses per series and accounting year");
    auto* tests = app.add_subcommand("tests", "Levene and Spearman tests");
    auto* fit = app.add_subcommand("fit", "normal, GP and joint H/MO fits");
    auto* scr = app.add_subcommand("scr", "solvency capital requirements");
    auto* defaults = app.add_subcommand("print-defaults", "print the default config as JSON");
    for (auto* sub : {losses, tests, fit, scr}) common(sub);
    scr->add_option("--which", which, "internal, standard, all or a model name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("usage", e.what());
    }

    try {
        if (defaults->parsed()) {
            std::cout << solvcap::config_to_json(solvcap::PipelineConfig::defaults());
            return 0;
        }
        solvcap::PipelineConfig config =
            config_path.empty() ? solvcap::parse_config("{}", std::filesystem::current_path())
                                : solvcap::load_config(config_path);
        if (seed) config.monte_carlo.seed = *seed;
        if (m) config.m = *m;
        if (threads) config.threads = *threads;
        if (!out_dir.empty()) config.output_dir = out_dir;
        config.validate();

        solvcap::RunOutput output;
        if (losses->parsed()) output = solvcap::cmd_losses(config);
        else if (tests->parsed()) output = solvcap::cmd_tests(config);
        else if (fit->parsed()) output = solvcap::cmd_fit(config);
        else output = solvcap::cmd_scr(config, which);
        solvcap::write_outputs(output, config.output_dir);
        for (const auto& d : output.diagnostics.entries()) std::cerr << "warning [" << d.code << "] " << d.message << '\n';
        return 0;
    } catch (const solvcap::ParseError& e) {
        return report_error("parse", e.what());
    } catch (const solvcap::ValidationError& e) {
        return report_error("validation", e.what(), e.details());
    } catch (const solvcap::ConfigError& e) {
        return report_error("config", e.what());
    } catch (const solvcap::UsageError& e) {
        return report_error("usage", e.what());
    } catch (const solvcap::DomainError& e) {
        return report_error("domain", e.what());
    } catch (const solvcap::EstimationError& e) {
        return report_error("estimation", e.what());
    } catch (const solvcap::ResolutionError& e) {
        return report_error("resolution", e.what());
    } catch (const std::exception& e) {
        return report_error("internal", e.what());
    }
}
