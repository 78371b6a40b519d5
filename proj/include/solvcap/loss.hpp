#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "solvcap/diagnostics.hpp"
#include "solvcap/lob.hpp"
#include "solvcap/report.hpp"

namespace solvcap {

// Valuations of one accounting year n+1 for one series and the resulting
// normalized loss. Monetary fields are in the report's currency unit.
struct LossRecord {
    std::string company;
    Lob lob = Lob::IA;
    int accounting_year = 0;
    double r0 = 0;          // opening value of claims already incurred
    double p0 = 0;          // opening value of claims incurred during the year
    double y0 = 0;          // r0 + p0
    double r1 = 0;          // closing revaluation of the r0 cash flow
    double p1 = 0;          // closing ultimo of the new accident year
    double y1 = 0;          // r1 + p1
    double loss_ratio = 0;  // ultimo / premium over the last m accident years
    double u = 0;           // (y1 - y0) / y0

    SeriesKey series() const { return {company, lob}; }
};

// Sum over accident years n-k+2..n of (ultimo - cumulative paid) at time n.
double outstanding_incurred(const ReportSnapshot& snapshot);
// Sum of ultimo over sum of premium for accident years n-m+1..n.
double loss_ratio(const ReportSnapshot& snapshot, int m);
// V * loss ratio; a zero volume yields zero with a warning.
double premium_liability(double next_premium, double loss_ratio, Diagnostics* diagnostics = nullptr);
double normalized_loss(double y0, double y1);

double compute_r0(const PairedSnapshots& pair);
double compute_loss_ratio(const PairedSnapshots& pair, int m);
double compute_p0(const PairedSnapshots& pair, int m, Diagnostics* diagnostics = nullptr);

struct ClosingValuation {
    double r1 = 0;
    double p1 = 0;
};
ClosingValuation compute_r1_p1(const PairedSnapshots& pair);

LossRecord compute_loss(const PairedSnapshots& pair, int m, Diagnostics* diagnostics = nullptr);

struct SkippedYear {
    SeriesKey series;
    int accounting_year = 0;
    std::string reason;
};

struct LossPanel {
    std::vector<LossRecord> records;  // sorted by (company, lob, accounting_year)
    int m = 3;
    DataQualityPolicy policy;
    std::vector<LossRecord> excluded;  // removed by the policy
    std::vector<SkippedYear> skipped;  // pairs that could not be valued
    Diagnostics diagnostics;

    const LossRecord* find(const std::string& company, Lob lob, int accounting_year) const;
    std::vector<LossRecord> series(const std::string& company, Lob lob) const;
    std::vector<std::string> companies() const;
};

// One record per consecutive report pair per series, minus policy exclusions.
// Series are valued on up to `threads` workers; output order does not depend
// on the thread count.
LossPanel build_loss_panel(std::span<const ReportSnapshot> snapshots, int m,
                           const DataQualityPolicy& policy, unsigned threads = 1);

inline constexpr std::string_view kLossCsvHeader =
    "company,lob,accounting_year,R0,P0,Y0,R1,P1,Y1,loss_ratio,U";

void write_loss_panel_csv(std::ostream& out, const LossPanel& panel);

}  // namespace solvcap
