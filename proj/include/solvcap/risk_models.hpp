#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "solvcap/diagnostics.hpp"
#include "solvcap/lob.hpp"

namespace solvcap {

inline constexpr double kScrLevel = 0.995;

struct LobLiability {
    double premium = 0;  // earned premium V for the coming year
    double r0 = 0;
    double p0 = 0;
    double y0() const noexcept { return r0 + p0; }
};

// Opening liability predictions of one company, per LoB.
struct LiabilityProfile {
    std::string company;
    std::array<LobLiability, kLobCount> lobs{};

    LobLiability& operator[](Lob lob) noexcept { return lobs[index_of(lob)]; }
    const LobLiability& operator[](Lob lob) const noexcept { return lobs[index_of(lob)]; }
    double total_y0() const noexcept;
    LiabilityProfile scaled(double factor) const;
};

// Sum over companies, LoB by LoB.
LiabilityProfile aggregate_profiles(const std::vector<LiabilityProfile>& profiles,
                                    const std::string& label = "aggregate");

// Independent zero-mean normal LoBs:
// z_p * sqrt(sum over LoBs of (Y0 * s)^2). Throws ConfigError when a LoB with
// non-zero Y0 has no standard deviation.
double scr_simple_internal(const LiabilityProfile& profile, const std::map<Lob, double>& stdevs,
                           double level = kScrLevel);

struct ModelParams {
    double sigma_h = 0;
    double sigma_mo = 0;
    double rho_1 = 0;
    double sigma_ml = 0;
    std::map<std::string, double> sigma_ml_overrides;  // per company
    double xi_ia = 0;
    double beta_ia = 0;
    double xi_blp = 0;
    double beta_blp = 0;

    double sigma_ml_for(const std::string& company) const;
    // Throws ConfigError on non-positive scales or |rho_1| >= 1.
    void validate() const;
};

// |X| ~ GP(xi, scale) with a fair random sign.
struct SymmetricGpComponent {
    Lob lob = Lob::IA;
    double scale = 0;  // currency
    double xi = 0;
};

// Total loss X = N(0, sigma_normal^2) + sum of independent symmetric GP terms.
struct MixedLossModel {
    double sigma_normal = 0;
    std::vector<SymmetricGpComponent> components;
};

// Gaussian part combines H and MO (correlated through rho_1) with ML; IA and
// BLP become symmetric GP terms with scale Y0 * beta. Terms with zero volume
// are dropped with a warning.
MixedLossModel build_mixed_model(const LiabilityProfile& profile, const ModelParams& params,
                                 Diagnostics* diagnostics = nullptr);

// Upper quantile (p > 0.5) of a symmetric GP variable:
// F^{-1}(p) = G^{-1}(2p - 1) for the GP quantile function G^{-1}.
double symmetric_gp_quantile(double beta, double xi, double p);
double symmetric_gp_cdf(double x, double beta, double xi);
// Infinite for xi >= 1/2.
double symmetric_gp_stddev(double beta, double xi);

enum class QuantileEngine { convolution, monte_carlo };

struct ConvolutionSettings {
    std::size_t grid_points = std::size_t{1} << 16;
    double min_width_sd = 12.0;     // grid spans at least this many standard deviations
    double max_tail_mass = 1e-8;    // probability allowed to fall off the grid
};

struct MonteCarloSettings {
    std::uint64_t seed = 20140601;
    std::size_t n_sims = 1'000'000;
    std::size_t block_size = std::size_t{1} << 15;
    unsigned threads = 1;
};

struct QuantileSettings {
    ConvolutionSettings convolution;
    MonteCarloSettings monte_carlo;
};

struct QuantileResult {
    double value = 0;
    double std_error = 0;  // zero for the convolution engine
    QuantileEngine engine = QuantileEngine::convolution;
};

QuantileResult quantile_total_loss(const MixedLossModel& model, double p, QuantileEngine engine,
                                   const QuantileSettings& settings = {},
                                   Diagnostics* diagnostics = nullptr);

double scr_mixed_model(const LiabilityProfile& profile, const ModelParams& params,
                       const ConvolutionSettings& settings = {},
                       Diagnostics* diagnostics = nullptr);

// Per-LoB standard deviation and 0.995-quantile of the normalized loss
// implied by a parameter set (one ML row per company override).
struct ModelSigmaRow {
    std::string label;
    double sigma = 0;
    double quantile_ratio = 0;  // q_{0.995} / sigma
    double quantile = 0;
};

std::vector<ModelSigmaRow> model_sigma_table(const ModelParams& params);

}  // namespace solvcap
