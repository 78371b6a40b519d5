#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "solvcap/error.hpp"
#include "solvcap/standard_formula.hpp"

using namespace solvcap;

namespace {

LiabilityProfile make(std::array<std::array<double, 2>, kLobCount> v_r0) {
    LiabilityProfile p;
    p.company = "X";
    for (Lob lob : kAllLobs) p[lob] = {v_r0[index_of(lob)][0], v_r0[index_of(lob)][1], 0.0};
    return p;
}

LiabilityProfile folksam() {
    return make({{{1.49, 5.05}, {2.67, 1.12}, {0.26, 0.14}, {0.98, 4.32}, {1.96, 0.18}}});
}

LiabilityProfile if_profile() {
    return make({{{0.64, 1.07}, {1.63, 0.59}, {1.85, 2.27}, {1.94, 11.07}, {3.50, 0.34}}});
}

LiabilityProfile aggregate() {
    return make({{{1.49 + 0.64 + 1.30 + 2.53, 5.05 + 1.07 + 3.18 + 6.00},
                  {2.67 + 1.63 + 3.51 + 1.49, 1.12 + 0.59 + 1.61 + 0.65},
                  {0.26 + 1.85 + 5.13 + 1.67, 0.14 + 2.27 + 3.71 + 1.26},
                  {0.98 + 1.94 + 2.87 + 1.70, 4.32 + 11.07 + 11.29 + 6.29},
                  {1.96 + 3.50 + 3.62 + 2.11, 0.18 + 0.34 + 0.60 + 0.39}}});
}

double sq(double x) { return x * x; }

}  // namespace

TEST(Segmentation, IllnessOnly) {
    auto p = make({});
    p[Lob::IA] = {4, 8, 0};
    const auto v = segment_volumes(p, SegmentationMap::defaults());
    EXPECT_DOUBLE_EQ(v.prem[index_of(SiiLob::ME)], 1.0);
    EXPECT_DOUBLE_EQ(v.res[index_of(SiiLob::ME)], 2.0);
    EXPECT_DOUBLE_EQ(v.prem[index_of(SiiLob::IP)], 3.0);
    EXPECT_DOUBLE_EQ(v.res[index_of(SiiLob::IP)], 6.0);
}

TEST(Segmentation, FolksamFirePremium) {
    const auto v = segment_volumes(folksam(), SegmentationMap::defaults());
    EXPECT_NEAR(v.prem[index_of(SiiLob::FPD)], 0.9 * 2.67 + 0.8 * 0.26, 1e-15);
    EXPECT_NEAR(v.prem[index_of(SiiLob::FPD)], 2.611, 1e-12);
}

TEST(Segmentation, ZeroProfile) {
    const auto v = segment_volumes(make({}), SegmentationMap::defaults());
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(v.prem[i], 0.0);
        EXPECT_EQ(v.res[i], 0.0);
    }
}

TEST(Segmentation, UnmappedLobWithVolume) {
    auto map = SegmentationMap::defaults();
    map.shares[index_of(Lob::MO)].clear();
    EXPECT_THROW(segment_volumes(folksam(), map), ConfigError);
    auto p = folksam();
    p[Lob::MO] = {};
    EXPECT_NO_THROW(segment_volumes(p, map));
}

TEST(Segmentation, InvalidProportions) {
    auto map = SegmentationMap::defaults();
    map.shares[index_of(Lob::H)] = {{SiiLob::FPD, 0.9}, {SiiLob::TPL, 0.2}};
    EXPECT_THROW(map.validate(), ConfigError);
    map.shares[index_of(Lob::H)] = {{SiiLob::FPD, 1.2}, {SiiLob::TPL, -0.2}};
    EXPECT_THROW(map.validate(), ConfigError);
}

TEST(Segmentation, VolumeConservation) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(0.0, 10.0);
    for (int t = 0; t < 20; ++t) {
        auto p = make({});
        double total = 0;
        for (Lob lob : kAllLobs) {
            p[lob] = {unif(rng), unif(rng), 0};
            total += p[lob].premium + p[lob].r0;
        }
        const auto v = segment_volumes(p, SegmentationMap::defaults());
        double sum = 0;
        for (std::size_t i = 0; i < 6; ++i) sum += v.prem[i] + v.res[i];
        EXPECT_NEAR(sum, total, 1e-12 * total);
    }
}

TEST(SigmaLob, Examples) {
    EXPECT_DOUBLE_EQ(sigma_lob(3, 0, 0.08, 0.1, 0.5).sigma, 0.08);
    const double s = 0.07, vp = 2, vr = 5;
    EXPECT_NEAR(sigma_lob(vp, vr, s, s, 0.5).sigma, s * std::sqrt(vp * vp + vp * vr + vr * vr) / (vp + vr), 1e-16);
    EXPECT_NEAR(sigma_lob(1.49, 3.825, 0.05, 0.05, 0.5).sigma, 0.0447, 0.00005);
    const auto zero = sigma_lob(0, 0, 0.1, 0.1, 0.5);
    EXPECT_TRUE(zero.zero_volume);
    EXPECT_EQ(zero.sigma, 0.0);
    EXPECT_EQ(zero.volume, 0.0);
}

TEST(SigmaLob, BoundedByLargerSigma) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        const double sp = unif(rng), sr = unif(rng), alpha = unif(rng);
        const auto r = sigma_lob(unif(rng) + 0.01, unif(rng), sp, sr, alpha);
        EXPECT_LE(r.sigma, std::max(sp, sr) * (1 + 1e-15));
        EXPECT_GE(r.sigma, std::min(sp, sr) / std::sqrt(2.0) - 1e-15);
    }
}

TEST(Modules, HealthExamples) {
    const auto table = RegulatorTable::defaults();
    SolvencyVolumes v;
    v.prem[index_of(SiiLob::ME)] = 2;
    v.res[index_of(SiiLob::ME)] = 1;
    const double s_me = sigma_lob(2, 1, 0.05, 0.05, 0.5).sigma;
    EXPECT_NEAR(scr_health(v, table), 3 * s_me * 3, 1e-15);

    RegulatorTable equal = table;
    equal.sigma_prem[index_of(SiiLob::ME)] = equal.sigma_prem[index_of(SiiLob::IP)] = 0.1;
    SolvencyVolumes w;
    w.prem[index_of(SiiLob::ME)] = w.prem[index_of(SiiLob::IP)] = 4;
    EXPECT_NEAR(scr_health(w, equal), 3 * 0.1 * 8 * std::sqrt(3.0) / 2, 1e-14);
}

TEST(Modules, NonLifeExamples) {
    const auto table = RegulatorTable::defaults();
    SolvencyVolumes v;
    v.prem[index_of(SiiLob::OM)] = 5;
    EXPECT_NEAR(scr_nonlife(v, table), 3 * 0.08 * 5, 1e-15);

    RegulatorTable ones = table;
    for (auto& row : ones.nonlife_corr) row.fill(1.0);
    v.prem[index_of(SiiLob::TPL)] = 2;
    EXPECT_NEAR(scr_nonlife(v, ones), 3 * (0.08 * 5 + 0.14 * 2), 1e-14);
}

TEST(Modules, NonLifeQuadraticFormOracle) {
    const auto table = RegulatorTable::defaults();
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(0.0, 5.0);
    for (int t = 0; t < 25; ++t) {
        SolvencyVolumes v;
        for (SiiLob lob : kNonLifeLobs) {
            v.prem[index_of(lob)] = unif(rng);
            v.res[index_of(lob)] = unif(rng);
        }
        std::array<double, 4> a{};
        double sum_a = 0;
        for (std::size_t i = 0; i < 4; ++i) {
            const auto k = index_of(kNonLifeLobs[i]);
            const double vp = v.prem[k], vr = v.res[k];
            const double sp = table.sigma_prem[k], sr = table.sigma_res[k];
            a[i] = std::sqrt(sq(sp * vp) + 2 * 0.5 * sp * sr * vp * vr + sq(sr * vr));
            sum_a += a[i];
        }
        double q = 0;
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) q += table.nonlife_corr[i][j] * a[i] * a[j];
        }
        const double got = scr_nonlife(v, table);
        EXPECT_NEAR(got, 3 * std::sqrt(q), 1e-12 * got);
        EXPECT_LE(got, 3 * sum_a);
    }
}

TEST(Total, ReferenceCompanies) {
    const auto map = SegmentationMap::defaults();
    const auto table = RegulatorTable::defaults();
    EXPECT_NEAR(scr_standard_total(folksam(), map, table), 2.84, 0.01);
    EXPECT_NEAR(scr_standard_total(if_profile(), map, table), 4.54, 0.01);
}

TEST(Total, OneModuleZero) {
    const auto map = SegmentationMap::defaults();
    const auto table = RegulatorTable::defaults();
    auto p = folksam();
    p[Lob::IA] = {};
    const auto r = scr_standard(p, map, table);
    EXPECT_EQ(r.health, 0.0);
    EXPECT_DOUBLE_EQ(r.total, r.nonlife);
    EXPECT_EQ(scr_standard_total(make({}), map, table), 0.0);
}

TEST(Total, PositiveHomogeneity) {
    const auto map = SegmentationMap::defaults();
    const auto table = RegulatorTable::defaults();
    const double base = scr_standard_total(folksam(), map, table);
    for (double lambda : {1e-3, 0.4, 7.0, 1e3}) {
        EXPECT_NEAR(scr_standard_total(folksam().scaled(lambda), map, table), lambda * base, 1e-9 * lambda * base);
    }
}

TEST(Benchmark, ReferenceValues) {
    const auto sigma = benchmark_sigma_swedish(aggregate(), SegmentationMap::defaults(), RegulatorTable::defaults());
    EXPECT_NEAR(sigma.at(Lob::IA), 0.092, 0.0005);
    EXPECT_NEAR(sigma.at(Lob::ML), 0.084, 0.0005);
    EXPECT_NEAR(sigma.at(Lob::MO), 0.076, 0.0005);
}

TEST(Benchmark, SingleTarget) {
    auto map = SegmentationMap::defaults();
    map.shares[index_of(Lob::H)] = {{SiiLob::FPD, 1.0}};
    const auto table = RegulatorTable::defaults();
    const auto agg = aggregate();
    const auto sigma = benchmark_sigma_swedish(agg, map, table);
    const auto sf = scr_standard(agg, map, table);
    EXPECT_DOUBLE_EQ(sigma.at(Lob::H), sf.lob_risk[index_of(SiiLob::FPD)].sigma);
}

TEST(RegulatorTableTest, Validation) {
    auto table = RegulatorTable::defaults();
    EXPECT_NO_THROW(table.validate());
    EXPECT_EQ(table.correlation(SiiLob::ME, SiiLob::FPD), 0.0);
    EXPECT_EQ(table.correlation(SiiLob::ME, SiiLob::IP), 0.5);
    EXPECT_EQ(table.correlation(SiiLob::TPL, SiiLob::MVL), 0.5);
    auto asym = table;
    asym.nonlife_corr[0][1] = 0.3;
    EXPECT_THROW(asym.validate(), ConfigError);
    auto indefinite = table;
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) indefinite.nonlife_corr[i][j] = i == j ? 1.0 : -0.9;
    }
    EXPECT_THROW(indefinite.validate(), ConfigError);
    auto negative = table;
    negative.sigma_res[0] = -0.1;
    EXPECT_THROW(negative.validate(), ConfigError);
}

TEST(SiiNames, RoundTrip) {
    for (SiiLob lob : kAllSiiLobs) EXPECT_EQ(parse_sii_lob(to_string(lob)), lob);
    EXPECT_FALSE(parse_sii_lob("XYZ").has_value());
}
