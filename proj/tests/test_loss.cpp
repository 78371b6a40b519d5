#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "solvcap/error.hpp"
#include "solvcap/loss.hpp"
#include "solvcap/synthetic.hpp"
#include "support.hpp"

#include "oracles.hpp"

using namespace solvcap;
using namespace oracles;
using testing_support::make_snapshot;

namespace {

// Opening and closing reports of a k = 3 Home series around n = 2010.
struct HomePair {
    ReportSnapshot s0 = make_snapshot("Acme", Lob::H, 3, 2010);
    ReportSnapshot s1 = make_snapshot("Acme", Lob::H, 3, 2011);
};

// Straight transcription of the loss definitions over raw maps.
double oracle_u(const ReportSnapshot& s0, const ReportSnapshot& s1, int m) {
    const int n = s0.report_year;
    const int k = s0.horizon_k;
    double r0 = 0, r1 = 0;
    for (int i = n - k + 2; i <= n; ++i) {
        r0 += s0.ultimo.at(i) - s0.cum_paid.at(i);
        r1 += s1.ultimo.at(i) - s0.cum_paid.at(i);
    }
    double c = 0, v = 0;
    for (int i = n - m + 1; i <= n; ++i) {
        c += s0.ultimo.at(i);
        v += s0.premiums.at(i);
    }
    const double y0 = r0 + s0.premiums.at(n + 1) * c / v;
    const double y1 = r1 + s1.ultimo.at(n + 1);
    return (y1 - y0) / y0;
}

}  // namespace

TEST(LossR0, HandEvaluation) {
    HomePair p;
    p.s0.ultimo[2009] = 15;
    p.s0.cum_paid[2009] = 10;
    p.s0.ultimo[2010] = 20;
    p.s0.cum_paid[2010] = 5;
    p.s0.ultimo[2008] = 1000;  // accident year n-k+1 is closed and ignored
    EXPECT_DOUBLE_EQ(compute_r0(validate_pair(p.s0, p.s1)), 20.0);
}

TEST(LossR0, ZeroOutstanding) {
    HomePair p;
    for (auto& [year, v] : p.s0.ultimo) v = p.s0.cum_paid[year];
    EXPECT_DOUBLE_EQ(compute_r0(validate_pair(p.s0, p.s1)), 0.0);
}

TEST(LossR0, SingleTermMayBeNegative) {
    auto s0 = make_snapshot("Acme", Lob::H, 2, 2010);
    const auto s1 = make_snapshot("Acme", Lob::H, 2, 2011);
    s0.ultimo[2010] = 7;
    s0.cum_paid[2010] = 7.5;
    EXPECT_DOUBLE_EQ(compute_r0(validate_pair(s0, s1)), -0.5);
}

TEST(LossRatio, Examples) {
    HomePair p;
    EXPECT_DOUBLE_EQ(compute_loss_ratio(validate_pair(p.s0, p.s1), 3), 0.2);  // 6 / 30
    p.s0.ultimo = {{2008, 10}, {2009, 12}, {2010, 14}};
    p.s0.premiums = {{2008, 10}, {2009, 10}, {2010, 10}, {2011, 10}};
    const auto pair = validate_pair(p.s0, p.s1);
    EXPECT_DOUBLE_EQ(compute_loss_ratio(pair, 3), 1.2);
    p.s0.ultimo[2010] = 8;
    EXPECT_DOUBLE_EQ(compute_loss_ratio(validate_pair(p.s0, p.s1), 1), 0.8);
}

TEST(LossRatio, Identity) {
    HomePair p;
    for (auto& [year, v] : p.s0.ultimo) v = p.s0.premiums[year];
    EXPECT_DOUBLE_EQ(compute_loss_ratio(validate_pair(p.s0, p.s1), 3), 1.0);
}

TEST(LossRatio, WindowBeyondHorizon) {
    HomePair p;
    const auto pair = validate_pair(p.s0, p.s1);
    EXPECT_THROW(compute_loss_ratio(pair, 4), ValidationError);
    EXPECT_THROW(compute_loss_ratio(pair, 0), DomainError);
}

TEST(LossP0, Examples) {
    EXPECT_DOUBLE_EQ(premium_liability(100, 1.0), 100.0);
    EXPECT_DOUBLE_EQ(premium_liability(100, 1.2), 120.0);
    Diagnostics diag;
    EXPECT_DOUBLE_EQ(premium_liability(0, 1.2, &diag), 0.0);
    EXPECT_EQ(diag.count("zero_volume"), 1u);

    HomePair p;
    p.s0.ultimo = {{2008, 10}, {2009, 12}, {2010, 14}};
    p.s0.premiums = {{2008, 10}, {2009, 10}, {2010, 10}, {2011, 100}};
    EXPECT_DOUBLE_EQ(compute_p0(validate_pair(p.s0, p.s1), 3), 120.0);
}

TEST(LossR1P1, Examples) {
    HomePair p;
    p.s0.cum_paid[2009] = 10;
    p.s0.cum_paid[2010] = 5;
    p.s1.ultimo[2009] = 16;
    p.s1.ultimo[2010] = 19;
    p.s1.ultimo[2011] = 50;
    p.s1.cum_paid[2009] = 99;  // restated payments in the closing report are not used
    const auto v = compute_r1_p1(validate_pair(p.s0, p.s1));
    EXPECT_DOUBLE_EQ(v.r1, 20.0);
    EXPECT_DOUBLE_EQ(v.p1, 50.0);
}

TEST(LossR1P1, NoRevaluationGivesR0) {
    HomePair p;
    p.s0.ultimo = {{2008, 3}, {2009, 4}, {2010, 5}};
    for (int y = 2008; y <= 2010; ++y) p.s1.ultimo[y] = p.s0.ultimo[y];
    const auto pair = validate_pair(p.s0, p.s1);
    EXPECT_DOUBLE_EQ(compute_r1_p1(pair).r1, compute_r0(pair));
}

TEST(LossU, Examples) {
    EXPECT_DOUBLE_EQ(normalized_loss(10, 10), 0.0);
    EXPECT_DOUBLE_EQ(normalized_loss(10, 12), 0.2);
    EXPECT_DOUBLE_EQ(normalized_loss(10, 7), -0.3);
    EXPECT_THROW(normalized_loss(0, 1), DomainError);
}

TEST(LossU, FullRecordAgainstOracle) {
    HomePair p;
    p.s0.ultimo = {{2008, 30}, {2009, 25}, {2010, 22}};
    p.s0.cum_paid = {{2008, 29}, {2009, 15}, {2010, 6}};
    p.s0.premiums = {{2008, 28}, {2009, 30}, {2010, 31}, {2011, 33}};
    p.s1.ultimo = {{2009, 27}, {2010, 21}, {2011, 24}};
    p.s1.cum_paid = {{2009, 20}, {2010, 14}, {2011, 8}};
    Diagnostics diag;
    const auto rec = compute_loss(validate_pair(p.s0, p.s1), 3, &diag);
    EXPECT_DOUBLE_EQ(rec.r0, 26.0);
    EXPECT_DOUBLE_EQ(rec.loss_ratio, 77.0 / 89.0);
    EXPECT_DOUBLE_EQ(rec.p0, 33.0 * 77.0 / 89.0);
    EXPECT_DOUBLE_EQ(rec.r1, 27.0);
    EXPECT_DOUBLE_EQ(rec.p1, 24.0);
    EXPECT_EQ(rec.y0, rec.r0 + rec.p0);
    EXPECT_EQ(rec.y1, rec.r1 + rec.p1);
    EXPECT_NEAR(rec.u, oracle_u(p.s0, p.s1, 3), 1e-15);
    EXPECT_EQ(rec.accounting_year, 2011);
}

TEST(LossU, ZeroOpeningLiability) {
    HomePair p;
    for (auto& [year, v] : p.s0.ultimo) v = 0;
    for (auto& [year, v] : p.s0.cum_paid) v = 0;
    EXPECT_THROW(compute_loss(validate_pair(p.s0, p.s1), 3), DomainError);
}

TEST(LossU, NegativeOpeningLiabilityWarns) {
    HomePair p;
    p.s0.ultimo = {{2008, 1}, {2009, 1}, {2010, 0.5}};
    p.s0.cum_paid = {{2008, 1}, {2009, 9}, {2010, 9}};
    Diagnostics diag;
    compute_loss(validate_pair(p.s0, p.s1), 3, &diag);
    EXPECT_EQ(diag.count("negative_y0"), 1u);
}

TEST(LossPanelTest, ThirteenReportsDropTwo) {
    FixtureSpec spec;
    spec.companies = {"A"};
    spec.first_report_year = 1999;
    spec.last_report_year = 2011;
    auto all = generate_reports(spec);
    std::vector<ReportSnapshot> one;
    for (const auto& s : all) {
        if (s.lob == Lob::ML) one.push_back(s);
    }
    ASSERT_EQ(one.size(), 13u);
    DataQualityPolicy policy;
    policy.drop_first_accounting_years = 2;
    const auto panel = build_loss_panel(one, 3, policy);
    EXPECT_EQ(panel.records.size(), 10u);
    EXPECT_EQ(panel.excluded.size(), 2u);
    EXPECT_EQ(panel.records.front().accounting_year, 2002);
    EXPECT_EQ(panel.records.back().accounting_year, 2011);
}

TEST(LossPanelTest, EmptyInput) {
    const auto panel = build_loss_panel({}, 3, DataQualityPolicy{});
    EXPECT_TRUE(panel.records.empty());
    EXPECT_TRUE(panel.skipped.empty());
}

TEST(LossPanelTest, ExcludedSeriesRemovedExactly) {
    const auto reports = generate_reports(reference_fixture_spec());
    const auto full = build_loss_panel(reports, 3, DataQualityPolicy{});
    DataQualityPolicy policy;
    policy.excluded_series.insert({"Folksam", Lob::BLP});
    const auto panel = build_loss_panel(reports, 3, policy);
    EXPECT_TRUE(panel.series("Folksam", Lob::BLP).empty());
    std::vector<LossRecord> expected;
    for (const auto& r : full.records) {
        if (!(r.company == "Folksam" && r.lob == Lob::BLP)) expected.push_back(r);
    }
    ASSERT_EQ(panel.records.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        EXPECT_EQ(panel.records[i].series(), expected[i].series());
        EXPECT_EQ(panel.records[i].accounting_year, expected[i].accounting_year);
        EXPECT_EQ(panel.records[i].u, expected[i].u);
    }
    EXPECT_EQ(panel.excluded.size(), 13u);
}

TEST(LossPanelTest, CountAndOracleOnFixture) {
    const auto reports = generate_reports(reference_fixture_spec());
    DataQualityPolicy policy;
    policy.drop_first_accounting_years = 2;
    const auto panel = build_loss_panel(reports, 3, policy);
    EXPECT_EQ(panel.records.size() + panel.excluded.size(), 260u);
    EXPECT_EQ(panel.records.size(), 220u);
    EXPECT_TRUE(panel.skipped.empty());
    for (const auto& rec : panel.records) {
        const ReportSnapshot* s0 = nullptr;
        const ReportSnapshot* s1 = nullptr;
        for (const auto& s : reports) {
            if (s.series() != rec.series()) continue;
            if (s.report_year == rec.accounting_year - 1) s0 = &s;
            if (s.report_year == rec.accounting_year) s1 = &s;
        }
        ASSERT_TRUE(s0 && s1);
        EXPECT_NEAR(rec.u, oracle_u(*s0, *s1, 3), 1e-12 * (1 + std::abs(rec.u)));
    }
}

TEST(LossPanelTest, GapBecomesSkip) {
    std::vector<ReportSnapshot> reports;
    for (int n : {2005, 2006, 2008, 2009}) reports.push_back(make_snapshot("A", Lob::MO, 3, n));
    const auto panel = build_loss_panel(reports, 3, DataQualityPolicy{});
    EXPECT_EQ(panel.records.size(), 2u);
    ASSERT_EQ(panel.skipped.size(), 1u);
    EXPECT_EQ(panel.skipped[0].accounting_year, 2007);
}

TEST(LossPanelTest, ThreadCountDoesNotChangeOutput) {
    const auto reports = generate_reports(reference_fixture_spec());
    DataQualityPolicy policy;
    policy.drop_first_accounting_years = 2;
    std::ostringstream one, four;
    write_loss_panel_csv(one, build_loss_panel(reports, 3, policy, 1));
    write_loss_panel_csv(four, build_loss_panel(reports, 3, policy, 4));
    EXPECT_EQ(one.str(), four.str());
    EXPECT_EQ(one.str().substr(0, kLossCsvHeader.size()), kLossCsvHeader);
}

TEST(LossProperties, ScaleInvariance) {
    const auto reports = generate_reports(reference_fixture_spec());
    for (double lambda : {1e-3, 0.37, 2.5, 1e4}) {
        std::vector<ReportSnapshot> scaled_reports;
        for (const auto& s : reports) scaled_reports.push_back(scaled(s, lambda));
        const auto base = build_loss_panel(reports, 3, DataQualityPolicy{});
        const auto other = build_loss_panel(scaled_reports, 3, DataQualityPolicy{});
        ASSERT_EQ(base.records.size(), other.records.size());
        for (std::size_t i = 0; i < base.records.size(); ++i) {
            const auto& a = base.records[i];
            const auto& b = other.records[i];
            EXPECT_NEAR(b.u, a.u, 1e-12 * std::max(1.0, std::abs(a.u)));
            EXPECT_NEAR(b.y0, lambda * a.y0, 1e-12 * lambda * std::abs(a.y0));
            EXPECT_NEAR(b.r1, lambda * a.r1, 1e-12 * lambda * (std::abs(a.r1) + std::abs(a.y1)));
        }
    }
}

TEST(LossProperties, Decomposition) {
    const auto panel = build_loss_panel(generate_reports(reference_fixture_spec()), 3, DataQualityPolicy{});
    for (const auto& r : panel.records) {
        EXPECT_LE(std::abs(r.y0 - (r.r0 + r.p0)), 4 * std::numeric_limits<double>::epsilon() * std::abs(r.y0));
        EXPECT_LE(std::abs(r.y1 - (r.r1 + r.p1)), 4 * std::numeric_limits<double>::epsilon() * std::abs(r.y1));
    }
}

TEST(LossProperties, WindowOnlyMovesPremiumComponent) {
    const auto reports = generate_reports(reference_fixture_spec());
    const auto base = build_loss_panel(reports, 3, DataQualityPolicy{});
    for (int m : {1, 2}) {
        const auto other = build_loss_panel(reports, m, DataQualityPolicy{});
        ASSERT_EQ(base.records.size(), other.records.size());
        for (std::size_t i = 0; i < base.records.size(); ++i) {
            EXPECT_EQ(base.records[i].r0, other.records[i].r0);
            EXPECT_EQ(base.records[i].r1, other.records[i].r1);
            EXPECT_EQ(base.records[i].p1, other.records[i].p1);
        }
        EXPECT_EQ(other.m, m);
    }
}
