#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "solvcap/config.hpp"
#include "solvcap/diagnostics.hpp"
#include "solvcap/loss.hpp"
#include "solvcap/risk_models.hpp"

namespace solvcap {

// One output file: CSV tables plus a JSON run summary.
struct Document {
    std::string name;
    std::string content;
};

struct RunOutput {
    std::vector<Document> documents;
    Diagnostics diagnostics;

    const Document* find(std::string_view name) const;
};

// Reads the configured report file and builds the loss panel. Throws on the
// first rejected row and when the policy names a series absent from the data.
LossPanel load_panel(const PipelineConfig& config);

// Liability predictions used by the SCR command, keyed by company.
std::map<std::string, LiabilityProfile> scr_profiles(const PipelineConfig& config);
std::map<std::string, std::map<Lob, double>> scr_stdevs(const PipelineConfig& config);

RunOutput cmd_losses(const PipelineConfig& config);
RunOutput cmd_tests(const PipelineConfig& config);
RunOutput cmd_fit(const PipelineConfig& config);
// `which` is "internal", "standard", "all" or the name of a model parameter
// set in the config.
RunOutput cmd_scr(const PipelineConfig& config, const std::string& which);

void write_outputs(const RunOutput& output, const std::filesystem::path& dir);

}  // namespace solvcap
