#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "solvcap/diagnostics.hpp"
#include "solvcap/lob.hpp"

namespace solvcap {

// One company/LoB slice of a yearly report filed at the end of year n.
//
// Accident years n-k+1..n carry cumulative payments C_{i,n-i} and the
// actuarial ultimo prediction. Earned premiums V_i cover at least n-2..n;
// V_{n+1} is usually present as well since it is treated as known at time n.
struct ReportSnapshot {
    std::string company;
    Lob lob = Lob::IA;
    int horizon_k = 0;
    int report_year = 0;
    std::map<int, double> premiums;
    std::map<int, double> cum_paid;
    std::map<int, double> ultimo;

    SeriesKey series() const { return {company, lob}; }
    int first_accident_year() const noexcept { return report_year - horizon_k + 1; }

    double premium(int accident_year) const;
    double paid(int accident_year) const;
    double ultimo_prediction(int accident_year) const;
};

// Throws ValidationError naming (company, lob, year) on the first violated
// invariant. Appends data-quality warnings (ultimo below payments).
void validate_snapshot(const ReportSnapshot& snapshot, Diagnostics* diagnostics = nullptr);

struct ReportSchema {
    HorizonTable horizons;
};

enum class RejectionKind { parse, validation };

struct Rejection {
    std::size_t line = 0;
    RejectionKind kind = RejectionKind::parse;
    std::string reason;
};

struct ParseResult {
    std::vector<ReportSnapshot> snapshots;
    // One entry per rejected data row.
    std::vector<Rejection> rejections;
    Diagnostics diagnostics;
    std::size_t data_rows = 0;
    std::size_t accepted_rows = 0;

    bool ok() const noexcept { return rejections.empty(); }
};

inline constexpr std::string_view kReportCsvHeader =
    "company,lob,report_year,record_type,accident_year,value";

// Long-form report CSV, one value per row. Every data row ends up either in
// exactly one snapshot or in exactly one rejection record. Snapshots are
// ordered by (company, lob, report_year).
ParseResult parse_report_csv(std::istream& in, const ReportSchema& schema);
ParseResult parse_report_file(const std::filesystem::path& path, const ReportSchema& schema);

// Like parse_report_file, but throws on the first rejection (ParseError for
// malformed rows, ValidationError otherwise) and on a missing file.
std::vector<ReportSnapshot> load_reports(const std::filesystem::path& path,
                                         const ReportSchema& schema,
                                         Diagnostics* diagnostics = nullptr);

void write_report_csv(std::ostream& out, std::span<const ReportSnapshot> snapshots);

// Two consecutive reports of one series: opening at n, closing at n+1.
class PairedSnapshots {
public:
    const ReportSnapshot& opening() const noexcept { return opening_; }
    const ReportSnapshot& closing() const noexcept { return closing_; }
    int opening_year() const noexcept { return opening_.report_year; }
    int accounting_year() const noexcept { return opening_.report_year + 1; }
    int horizon_k() const noexcept { return opening_.horizon_k; }
    // V_{n+1}, read from the opening report when available.
    double next_premium() const noexcept { return next_premium_; }
    bool next_premium_from_closing() const noexcept { return next_premium_from_closing_; }

private:
    friend PairedSnapshots validate_pair(const ReportSnapshot&, const ReportSnapshot&, Diagnostics*);
    PairedSnapshots(ReportSnapshot opening, ReportSnapshot closing, double next_premium, bool fallback);

    ReportSnapshot opening_;
    ReportSnapshot closing_;
    double next_premium_;
    bool next_premium_from_closing_;
};

// Checks that s1 is the report following s0 for the same series and that
// every entry needed by the opening and closing valuations is present.
// Throws ValidationError ("pairing" for mismatched series or years).
PairedSnapshots validate_pair(const ReportSnapshot& s0, const ReportSnapshot& s1,
                              Diagnostics* diagnostics = nullptr);

// Data-quality exclusions applied when building loss panels.
struct DataQualityPolicy {
    // Drop the first N accounting years of every series (counted from the
    // first report of that series).
    int drop_first_accounting_years = 0;
    std::map<SeriesKey, std::set<int>> excluded_accounting_years;
    std::set<SeriesKey> excluded_series;

    bool excludes(const SeriesKey& series, int accounting_year, int first_report_year) const;
};

// Throws ValidationError when the policy names a series absent from the data.
void check_policy_references(const DataQualityPolicy& policy,
                             std::span<const ReportSnapshot> snapshots);

}  // namespace solvcap
