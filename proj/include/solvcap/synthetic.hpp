#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "solvcap/lob.hpp"
#include "solvcap/report.hpp"

namespace solvcap {

// Knobs for a synthetic report history. Values are generated in a
// reproducible way from `seed` and are rounded to `decimals` places so that
// a written fixture reads back exactly.
struct FixtureSpec {
    std::vector<std::string> companies{"Folksam", "If", "LF", "Trygg-Hansa"};
    int first_report_year = 1998;
    int last_report_year = 2011;
    std::uint64_t seed = 20140601;
    HorizonTable horizons;
    // Earned premium of the last report year per series; missing series get 1.
    std::map<SeriesKey, double> final_premium;
    int decimals = 6;
};

// One snapshot per (company, LoB, report year), premiums n-2..n+1.
std::vector<ReportSnapshot> generate_reports(const FixtureSpec& spec);

// Spec with final premiums taken from the 2011 earned premiums of the four
// companies in the reference study.
FixtureSpec reference_fixture_spec();

}  // namespace solvcap
