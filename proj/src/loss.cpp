#include "solvcap/loss.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "solvcap/error.hpp"
#include "solvcap/parallel.hpp"

namespace solvcap {

double outstanding_incurred(const ReportSnapshot& s) {
    double total = 0;
    for (int year = s.report_year - s.horizon_k + 2; year <= s.report_year; ++year) {
        total += s.ultimo_prediction(year) - s.paid(year);
    }
    return total;
}

double loss_ratio(const ReportSnapshot& s, int m) {
    if (m < 1) throw DomainError(fmt::format("loss-ratio window m must be positive, got {}", m));
    const int first = s.report_year - m + 1;
    if (first < s.first_accident_year()) {
        throw ValidationError(fmt::format("{}: m = {} exceeds the {} accident years in report {}",
                                          s.series().label(), m, s.horizon_k, s.report_year));
    }
    double ultimo = 0;
    double premium = 0;
    for (int year = first; year <= s.report_year; ++year) {
        ultimo += s.ultimo_prediction(year);
        premium += s.premium(year);
    }
    if (!(premium > 0)) {
        throw DomainError(fmt::format("{}: premium sum {} over {}..{} is not positive", s.series().label(), premium,
                                      first, s.report_year));
    }
    return ultimo / premium;
}

double premium_liability(double next_premium, double ratio, Diagnostics* diagnostics) {
    if (next_premium == 0) warn(diagnostics, "zero_volume", "next-year premium is zero; premium liability is zero");
    return next_premium * ratio;
}

double normalized_loss(double y0, double y1) {
    if (y0 == 0) throw DomainError("opening liability Y0 is zero; normalized loss undefined");
    return (y1 - y0) / y0;
}

double compute_r0(const PairedSnapshots& pair) { return outstanding_incurred(pair.opening()); }

double compute_loss_ratio(const PairedSnapshots& pair, int m) { return loss_ratio(pair.opening(), m); }

double compute_p0(const PairedSnapshots& pair, int m, Diagnostics* diagnostics) {
    return premium_liability(pair.next_premium(), compute_loss_ratio(pair, m), diagnostics);
}

ClosingValuation compute_r1_p1(const PairedSnapshots& pair) {
    const ReportSnapshot& s0 = pair.opening();
    const ReportSnapshot& s1 = pair.closing();
    const int n = s0.report_year;
    ClosingValuation v;
    // Payments are taken at time n so that the subtrahend matches R0.
    for (int year = n - pair.horizon_k() + 2; year <= n; ++year) {
        v.r1 += s1.ultimo_prediction(year) - s0.paid(year);
    }
    v.p1 = s1.ultimo_prediction(n + 1);
    return v;
}

LossRecord compute_loss(const PairedSnapshots& pair, int m, Diagnostics* diagnostics) {
    LossRecord rec;
    rec.company = pair.opening().company;
    rec.lob = pair.opening().lob;
    rec.accounting_year = pair.accounting_year();
    rec.r0 = compute_r0(pair);
    rec.loss_ratio = compute_loss_ratio(pair, m);
    rec.p0 = premium_liability(pair.next_premium(), rec.loss_ratio, diagnostics);
    rec.y0 = rec.r0 + rec.p0;
    const ClosingValuation closing = compute_r1_p1(pair);
    rec.r1 = closing.r1;
    rec.p1 = closing.p1;
    rec.y1 = rec.r1 + rec.p1;
    rec.u = normalized_loss(rec.y0, rec.y1);
    if (rec.y0 < 0) {
        warn(diagnostics, "negative_y0",
             fmt::format("{} {}: negative opening liability {} inverts the loss sign", rec.series().label(),
                         rec.accounting_year, rec.y0));
    }
    return rec;
}

const LossRecord* LossPanel::find(const std::string& company, Lob lob, int accounting_year) const {
    const auto it = std::lower_bound(records.begin(), records.end(), std::tie(company, lob, accounting_year),
                                     [](const LossRecord& r, const auto& key) {
                                         return std::tie(r.company, r.lob, r.accounting_year) < key;
                                     });
    if (it == records.end() || it->company != company || it->lob != lob || it->accounting_year != accounting_year) {
        return nullptr;
    }
    return &*it;
}

std::vector<LossRecord> LossPanel::series(const std::string& company, Lob lob) const {
    std::vector<LossRecord> out;
    for (const auto& r : records) {
        if (r.company == company && r.lob == lob) out.push_back(r);
    }
    return out;
}

std::vector<std::string> LossPanel::companies() const {
    std::set<std::string> names;
    for (const auto& r : records) names.insert(r.company);
    return {names.begin(), names.end()};
}

namespace {

struct SeriesOutcome {
    std::vector<LossRecord> records;
    std::vector<LossRecord> excluded;
    std::vector<SkippedYear> skipped;
    Diagnostics diagnostics;
};

}  // namespace

LossPanel build_loss_panel(std::span<const ReportSnapshot> snapshots, int m, const DataQualityPolicy& policy,
                           unsigned threads) {
    if (m < 1) throw DomainError(fmt::format("loss-ratio window m must be positive, got {}", m));
    std::map<SeriesKey, std::vector<const ReportSnapshot*>> by_series;
    for (const auto& s : snapshots) by_series[s.series()].push_back(&s);
    std::vector<std::pair<SeriesKey, std::vector<const ReportSnapshot*>>> work(by_series.begin(), by_series.end());
    for (auto& [key, list] : work) {
        std::sort(list.begin(), list.end(),
                  [](const ReportSnapshot* a, const ReportSnapshot* b) { return a->report_year < b->report_year; });
    }

    std::vector<SeriesOutcome> outcomes(work.size());
    parallel_for(work.size(), threads, [&](std::size_t index) {
        const auto& [key, list] = work[index];
        SeriesOutcome& out = outcomes[index];
        const int first_report = list.front()->report_year;
        for (std::size_t i = 0; i + 1 < list.size(); ++i) {
            const ReportSnapshot& s0 = *list[i];
            const ReportSnapshot& s1 = *list[i + 1];
            const int accounting_year = s0.report_year + 1;
            if (s1.report_year != accounting_year) {
                out.skipped.push_back({key, accounting_year,
                                       fmt::format("no report for {} (next report is {})", accounting_year,
                                                   s1.report_year)});
                continue;
            }
            try {
                const PairedSnapshots pair = validate_pair(s0, s1, &out.diagnostics);
                LossRecord rec = compute_loss(pair, m, &out.diagnostics);
                if (policy.excludes(key, accounting_year, first_report)) {
                    out.excluded.push_back(std::move(rec));
                } else {
                    out.records.push_back(std::move(rec));
                }
            } catch (const Error& e) {
                out.skipped.push_back({key, accounting_year, e.what()});
            }
        }
    });

    LossPanel panel;
    panel.m = m;
    panel.policy = policy;
    for (auto& out : outcomes) {
        std::move(out.records.begin(), out.records.end(), std::back_inserter(panel.records));
        std::move(out.excluded.begin(), out.excluded.end(), std::back_inserter(panel.excluded));
        std::move(out.skipped.begin(), out.skipped.end(), std::back_inserter(panel.skipped));
        panel.diagnostics.append(out.diagnostics);
    }
    std::stable_sort(panel.records.begin(), panel.records.end(), [](const LossRecord& a, const LossRecord& b) {
        return std::tie(a.company, a.lob, a.accounting_year) < std::tie(b.company, b.lob, b.accounting_year);
    });
    return panel;
}

void write_loss_panel_csv(std::ostream& out, const LossPanel& panel) {
    out << kLossCsvHeader << '\n';
    for (const auto& r : panel.records) {
        out << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", r.company, to_string(r.lob), r.accounting_year, r.r0,
                           r.p0, r.y0, r.r1, r.p1, r.y1, r.loss_ratio, r.u);
    }
}

}  // namespace solvcap
