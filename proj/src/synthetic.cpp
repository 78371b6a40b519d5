#include "solvcap/synthetic.hpp"

#include <array>
#include <cmath>
#include <random>

#include "solvcap/error.hpp"
#include "solvcap/parallel.hpp"

namespace solvcap {

namespace {

struct LobShape {
    double revision_sd;   // log-revision of an ultimo prediction per report
    double payment_lag;   // share of the ultimate still unpaid after each year
};

LobShape shape(Lob lob) {
    switch (lob) {
        case Lob::IA: return {0.08, 0.6};
        case Lob::H: return {0.06, 0.3};
        case Lob::BLP: return {0.10, 0.6};
        case Lob::ML: return {0.03, 0.75};
        case Lob::MO: return {0.06, 0.3};
    }
    return {0.05, 0.5};
}

}  // namespace

std::vector<ReportSnapshot> generate_reports(const FixtureSpec& spec) {
    if (spec.last_report_year < spec.first_report_year) throw ConfigError("fixture: last report year before first");
    const double unit = std::pow(10.0, spec.decimals);
    auto round = [unit](double v) { return std::round(v * unit) / unit; };

    std::vector<ReportSnapshot> out;
    std::uint64_t stream = 0;
    for (const auto& company : spec.companies) {
        for (Lob lob : kAllLobs) {
            auto rng = substream(spec.seed, stream++);
            std::normal_distribution<double> gauss(0.0, 1.0);
            const int k = spec.horizons[lob];
            const auto sh = shape(lob);
            const int first_ay = spec.first_report_year - k + 1;
            const int last_ay = spec.last_report_year + 1;

            const auto found = spec.final_premium.find({company, lob});
            const double base = found == spec.final_premium.end() ? 1.0 : found->second;
            const double ratio = 0.7 + 0.05 * gauss(rng);

            std::map<int, double> premium;
            std::map<int, double> ultimate;
            std::map<int, double> log_error;
            for (int i = first_ay; i <= last_ay; ++i) {
                premium[i] = base * std::pow(1.03, i - spec.last_report_year) * std::exp(0.02 * gauss(rng));
                ultimate[i] = ratio * premium[i] * std::exp(0.1 * gauss(rng));
                log_error[i] = sh.revision_sd * gauss(rng);
            }

            for (int n = spec.first_report_year; n <= spec.last_report_year; ++n) {
                ReportSnapshot s;
                s.company = company;
                s.lob = lob;
                s.horizon_k = k;
                s.report_year = n;
                for (int i = n - 2; i <= n + 1; ++i) s.premiums[i] = round(premium[i]);
                for (int i = n - k + 1; i <= n; ++i) {
                    const int dev = n - i;
                    if (n > spec.first_report_year) {
                        log_error[i] += sh.revision_sd * std::pow(sh.payment_lag, dev) * gauss(rng);
                    }
                    const double ultimo = ultimate[i] * std::exp(log_error[i]);
                    s.ultimo[i] = round(ultimo);
                    s.cum_paid[i] = round(ultimo * (1.0 - std::pow(sh.payment_lag, dev + 1)));
                }
                out.push_back(std::move(s));
            }
        }
    }
    return out;
}

FixtureSpec reference_fixture_spec() {
    FixtureSpec spec;
    const std::map<std::string, std::array<double, kLobCount>> premiums{
        {"Folksam", {1.49, 2.67, 0.26, 0.98, 1.96}},
        {"If", {0.64, 1.63, 1.85, 1.94, 3.50}},
        {"LF", {1.30, 3.51, 5.13, 2.87, 3.62}},
        {"Trygg-Hansa", {2.53, 1.49, 1.67, 1.70, 2.11}},
    };
    for (const auto& [company, values] : premiums) {
        for (Lob lob : kAllLobs) spec.final_premium[{company, lob}] = values[index_of(lob)];
    }
    return spec;
}

}  // namespace solvcap
