#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "solvcap/lob.hpp"
#include "solvcap/report.hpp"
#include "solvcap/risk_models.hpp"
#include "solvcap/standard_formula.hpp"

namespace solvcap {

struct LeveneVariant {
    std::string label;
    Lob lob = Lob::IA;
    std::vector<std::string> companies;
};

// Observation left out of a fit; company "*" matches every company.
struct ExcludedObservation {
    std::string company;
    int accounting_year = 0;
};

struct FitCase {
    std::string label;
    std::vector<ExcludedObservation> excluded;
    bool excludes(const std::string& company, int accounting_year) const;
};

struct MonteCarloConfig {
    std::uint64_t seed = 20140601;
    std::size_t n_sims = 1'000'000;
    bool verify = true;  // cross-check convolution quantiles by simulation
};

enum class ProfileSource { config, reports };
enum class StdevSource { config, panel };

struct PipelineConfig {
    std::filesystem::path reports;
    std::filesystem::path output_dir;
    int m = 3;
    unsigned threads = 1;
    HorizonTable horizons;
    DataQualityPolicy policy;

    // Order of the four companies in the joint Home / Motor Other model.
    std::vector<std::string> companies;
    std::map<Lob, std::vector<std::string>> pooling;
    std::vector<LeveneVariant> levene;
    double spearman_level = 0.05;
    std::size_t spearman_permutations = 200'000;
    std::set<SeriesKey> spearman_excluded;
    std::vector<FitCase> fit_cases;

    ProfileSource profile_source = ProfileSource::config;
    std::map<std::string, LiabilityProfile> profiles;
    StdevSource stdev_source = StdevSource::config;
    std::map<std::string, std::map<Lob, double>> sample_stdevs;
    std::map<std::string, ModelParams> models;
    SegmentationMap segmentation;
    RegulatorTable regulator;
    MonteCarloConfig monte_carlo;
    ConvolutionSettings convolution;

    // Settings of the reference study: 2011 liability predictions, sample
    // standard deviations and the two pooled parameter sets.
    static PipelineConfig defaults();
    // Throws ConfigError for values that break a parameter invariant.
    void validate() const;
};

// JSON text; keys left out keep their default. Relative paths resolve
// against `base_dir`. Unknown keys are rejected.
PipelineConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const PipelineConfig& config);

}  // namespace solvcap
