#include "solvcap/standard_formula.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "solvcap/error.hpp"

namespace solvcap {

namespace {

constexpr std::array<std::string_view, 6> kSiiNames{"ME", "IP", "MVL", "OM", "FPD", "TPL"};

std::size_t nonlife_index(SiiLob lob) { return index_of(lob) - index_of(SiiLob::MVL); }

// sqrt(sum_ij rho_ij a_i a_j) for exposures a_i = sigma_i * V_i.
template <std::size_t N>
double aggregate(const std::array<SiiLob, N>& lobs, const std::array<double, 6>& exposure, const RegulatorTable& table) {
    double total = 0;
    for (SiiLob a : lobs) {
        for (SiiLob b : lobs) total += table.correlation(a, b) * exposure[index_of(a)] * exposure[index_of(b)];
    }
    return std::sqrt(std::max(total, 0.0));
}

std::array<double, 6> exposures(const SolvencyVolumes& volumes, const RegulatorTable& table) {
    std::array<double, 6> out{};
    for (SiiLob lob : kAllSiiLobs) {
        const auto i = index_of(lob);
        const auto risk = sigma_lob(volumes.prem[i], volumes.res[i], table.sigma_prem[i], table.sigma_res[i], table.alpha);
        out[i] = risk.sigma * risk.volume;
    }
    return out;
}

}  // namespace

std::string_view to_string(SiiLob lob) noexcept { return kSiiNames[index_of(lob)]; }

std::optional<SiiLob> parse_sii_lob(std::string_view text) noexcept {
    for (SiiLob lob : kAllSiiLobs) {
        if (kSiiNames[index_of(lob)] == text) return lob;
    }
    return std::nullopt;
}

bool is_health(SiiLob lob) noexcept { return lob == SiiLob::ME || lob == SiiLob::IP; }

SegmentationMap SegmentationMap::defaults() {
    SegmentationMap m;
    m.shares[index_of(Lob::IA)] = {{SiiLob::ME, 0.25}, {SiiLob::IP, 0.75}};
    m.shares[index_of(Lob::H)] = {{SiiLob::FPD, 0.9}, {SiiLob::TPL, 0.1}};
    m.shares[index_of(Lob::BLP)] = {{SiiLob::FPD, 0.8}, {SiiLob::TPL, 0.2}};
    m.shares[index_of(Lob::ML)] = {{SiiLob::MVL, 1.0}};
    m.shares[index_of(Lob::MO)] = {{SiiLob::OM, 1.0}};
    return m;
}

void SegmentationMap::validate() const {
    for (Lob lob : kAllLobs) {
        const auto& list = shares[index_of(lob)];
        if (list.empty()) continue;
        double sum = 0;
        for (const auto& [target, pi] : list) {
            if (!(pi >= 0 && pi <= 1)) {
                throw ConfigError(fmt::format("segmentation {} -> {}: proportion {} outside [0, 1]", to_string(lob),
                                              to_string(target), pi));
            }
            sum += pi;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw ConfigError(fmt::format("segmentation of {}: proportions sum to {}, not 1", to_string(lob), sum));
        }
    }
}

RegulatorTable RegulatorTable::defaults() {
    RegulatorTable t;
    t.sigma_prem = {0.05, 0.085, 0.10, 0.08, 0.08, 0.14};
    t.sigma_res = {0.05, 0.14, 0.09, 0.08, 0.10, 0.11};
    t.alpha = 0.5;
    t.rho_me_ip = 0.5;
    t.nonlife_corr = {{{1.0, 0.5, 0.25, 0.5}, {0.5, 1.0, 0.25, 0.25}, {0.25, 0.25, 1.0, 0.25}, {0.5, 0.25, 0.25, 1.0}}};
    return t;
}

double RegulatorTable::correlation(SiiLob a, SiiLob b) const {
    if (a == b) return 1.0;
    if (is_health(a) != is_health(b)) return 0.0;
    if (is_health(a)) return rho_me_ip;
    return nonlife_corr[nonlife_index(a)][nonlife_index(b)];
}

void RegulatorTable::validate() const {
    for (SiiLob lob : kAllSiiLobs) {
        const auto i = index_of(lob);
        if (!(sigma_prem[i] >= 0) || !(sigma_res[i] >= 0)) {
            throw ConfigError(fmt::format("regulator sigma for {} must be non-negative", to_string(lob)));
        }
    }
    if (!(std::abs(alpha) <= 1)) throw ConfigError(fmt::format("alpha = {} outside [-1, 1]", alpha));
    if (!(std::abs(rho_me_ip) <= 1)) throw ConfigError(fmt::format("rho_ME,IP = {} outside [-1, 1]", rho_me_ip));
    Eigen::Matrix4d c;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            c(i, j) = nonlife_corr[i][j];
            if (i == j && nonlife_corr[i][j] != 1.0) throw ConfigError("non-life correlation diagonal must be 1");
            if (nonlife_corr[i][j] != nonlife_corr[j][i]) throw ConfigError("non-life correlation matrix is not symmetric");
        }
    }
    const double min_eigen = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(c).eigenvalues().minCoeff();
    if (min_eigen < -1e-12) {
        throw ConfigError(fmt::format("non-life correlation matrix is not positive semidefinite (eigenvalue {})", min_eigen));
    }
}

SolvencyVolumes segment_volumes(const LiabilityProfile& profile, const SegmentationMap& map) {
    map.validate();
    SolvencyVolumes v;
    for (Lob lob : kAllLobs) {
        const auto& liab = profile[lob];
        if (map[lob].empty()) {
            if (liab.premium != 0 || liab.r0 != 0) {
                throw ConfigError(fmt::format("{}: LoB {} has volume but no Solvency II segmentation", profile.company,
                                              to_string(lob)));
            }
            continue;
        }
        for (const auto& [target, pi] : map[lob]) {
            v.prem[index_of(target)] += pi * liab.premium;
            v.res[index_of(target)] += pi * liab.r0;
        }
    }
    return v;
}

LobRisk sigma_lob(double v_prem, double v_res, double sigma_prem, double sigma_res, double alpha) {
    LobRisk r;
    r.volume = v_prem + v_res;
    if (r.volume == 0) {
        r.volume = 0;
        r.zero_volume = true;
        return r;
    }
    const double a = sigma_prem * v_prem;
    const double b = sigma_res * v_res;
    r.sigma = std::sqrt(a * a + 2.0 * alpha * a * b + b * b) / r.volume;
    return r;
}

double scr_health(const SolvencyVolumes& volumes, const RegulatorTable& table) {
    return kStandardFormulaQuantileRatio * aggregate(kHealthLobs, exposures(volumes, table), table);
}

double scr_nonlife(const SolvencyVolumes& volumes, const RegulatorTable& table) {
    return kStandardFormulaQuantileRatio * aggregate(kNonLifeLobs, exposures(volumes, table), table);
}

StandardFormulaResult scr_standard(const LiabilityProfile& profile, const SegmentationMap& map,
                                   const RegulatorTable& table) {
    table.validate();
    StandardFormulaResult r;
    r.volumes = segment_volumes(profile, map);
    for (SiiLob lob : kAllSiiLobs) {
        const auto i = index_of(lob);
        r.lob_risk[i] = sigma_lob(r.volumes.prem[i], r.volumes.res[i], table.sigma_prem[i], table.sigma_res[i], table.alpha);
    }
    r.health = scr_health(r.volumes, table);
    r.nonlife = scr_nonlife(r.volumes, table);
    r.total = std::hypot(r.health, r.nonlife);
    return r;
}

double scr_standard_total(const LiabilityProfile& profile, const SegmentationMap& map, const RegulatorTable& table) {
    return scr_standard(profile, map, table).total;
}

std::map<Lob, double> benchmark_sigma_swedish(const LiabilityProfile& aggregate_profile, const SegmentationMap& map,
                                              const RegulatorTable& table) {
    const auto sf = scr_standard(aggregate_profile, map, table);
    std::map<Lob, double> out;
    for (Lob lob : kAllLobs) {
        const auto& list = map[lob];
        if (list.empty()) continue;
        double variance = 0;
        for (const auto& [a, pa] : list) {
            for (const auto& [b, pb] : list) {
                variance += table.correlation(a, b) * pa * pb * sf.lob_risk[index_of(a)].sigma *
                            sf.lob_risk[index_of(b)].sigma;
            }
        }
        out[lob] = std::sqrt(std::max(variance, 0.0));
    }
    return out;
}

}  // namespace solvcap
