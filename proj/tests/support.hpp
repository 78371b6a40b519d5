#pragma once

#include <map>
#include <string>

#include "solvcap/report.hpp"

namespace testing_support {

// Snapshot with the given horizon whose accident years are n-k+1..n.
// Paid and ultimo default to 1 and 2 per year; premiums cover n-2..n+1.
inline solvcap::ReportSnapshot make_snapshot(std::string company, solvcap::Lob lob, int k, int n) {
    solvcap::ReportSnapshot s;
    s.company = std::move(company);
    s.lob = lob;
    s.horizon_k = k;
    s.report_year = n;
    for (int i = n - k + 1; i <= n; ++i) {
        s.cum_paid[i] = 1.0;
        s.ultimo[i] = 2.0;
    }
    for (int i = n - 2; i <= n + 1; ++i) s.premiums[i] = 10.0;
    return s;
}

}  // namespace testing_support
