#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "solvcap/lob.hpp"
#include "solvcap/risk_models.hpp"

namespace solvcap {

// Solvency II lines of business touched by the five Swedish LoBs.
enum class SiiLob { ME, IP, MVL, OM, FPD, TPL };

inline constexpr std::array<SiiLob, 6> kAllSiiLobs{SiiLob::ME,  SiiLob::IP,  SiiLob::MVL,
                                                   SiiLob::OM,  SiiLob::FPD, SiiLob::TPL};
inline constexpr std::array<SiiLob, 2> kHealthLobs{SiiLob::ME, SiiLob::IP};
inline constexpr std::array<SiiLob, 4> kNonLifeLobs{SiiLob::MVL, SiiLob::OM, SiiLob::FPD, SiiLob::TPL};

constexpr std::size_t index_of(SiiLob lob) noexcept { return static_cast<std::size_t>(lob); }
std::string_view to_string(SiiLob lob) noexcept;
std::optional<SiiLob> parse_sii_lob(std::string_view text) noexcept;
bool is_health(SiiLob lob) noexcept;

using Share = std::pair<SiiLob, double>;

struct SegmentationMap {
    std::array<std::vector<Share>, kLobCount> shares;

    // IA -> ME 25% / IP 75%, H -> FPD 90% / TPL 10%, BLP -> FPD 80% / TPL 20%,
    // ML -> MVL, MO -> OM.
    static SegmentationMap defaults();
    const std::vector<Share>& operator[](Lob lob) const { return shares[index_of(lob)]; }
    // Throws ConfigError unless proportions lie in [0,1] and sum to 1 for
    // every mapped LoB.
    void validate() const;
};

struct RegulatorTable {
    std::array<double, 6> sigma_prem{};
    std::array<double, 6> sigma_res{};
    double alpha = 0.5;      // premium/reserve correlation within a LoB
    double rho_me_ip = 0.5;
    // Order of kNonLifeLobs: MVL, OM, FPD, TPL.
    std::array<std::array<double, 4>, 4> nonlife_corr{};

    static RegulatorTable defaults();
    // Correlation between two LoBs; zero across the health/non-life split.
    double correlation(SiiLob a, SiiLob b) const;
    // Throws ConfigError for negative sigmas or a correlation matrix that is
    // not symmetric, unit-diagonal and positive semidefinite.
    void validate() const;
};

struct SolvencyVolumes {
    std::array<double, 6> prem{};
    std::array<double, 6> res{};
};

// V_prem = sum of pi * V, V_res = sum of pi * R0 over the Swedish LoBs.
SolvencyVolumes segment_volumes(const LiabilityProfile& profile, const SegmentationMap& map);

struct LobRisk {
    double volume = 0;
    double sigma = 0;
    bool zero_volume = false;
};

LobRisk sigma_lob(double v_prem, double v_res, double sigma_prem, double sigma_res, double alpha);

double scr_health(const SolvencyVolumes& volumes, const RegulatorTable& table);
double scr_nonlife(const SolvencyVolumes& volumes, const RegulatorTable& table);

struct StandardFormulaResult {
    SolvencyVolumes volumes;
    std::array<LobRisk, 6> lob_risk{};
    double health = 0;
    double nonlife = 0;
    double total = 0;
};

StandardFormulaResult scr_standard(const LiabilityProfile& profile, const SegmentationMap& map,
                                   const RegulatorTable& table);
double scr_standard_total(const LiabilityProfile& profile, const SegmentationMap& map,
                          const RegulatorTable& table);

// Standard-formula standard deviation implied for each Swedish LoB, from
// LoB sigmas computed on the aggregate profile and combined with the LoB's
// segmentation proportions.
std::map<Lob, double> benchmark_sigma_swedish(const LiabilityProfile& aggregate,
                                              const SegmentationMap& map,
                                              const RegulatorTable& table);

inline constexpr double kStandardFormulaQuantileRatio = 3.0;

}  // namespace solvcap
