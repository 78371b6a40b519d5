// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "solvcap/config.hpp"
#include "solvcap/distributions.hpp"
#include "solvcap/fitting.hpp"
#include "solvcap/hypothesis.hpp"
#include "solvcap/loss.hpp"
#include "solvcap/risk_models.hpp"
#include "solvcap/standard_formula.hpp"
#include "solvcap/structured_mvn.hpp"
#include "solvcap/synthetic.hpp"

namespace fs = std::filesystem;
using namespace solvcap;

namespace {

// Tolerances.
constexpr double kScrAbsTol = 0.01;        // billion SEK
constexpr double kMixedRelTol = 0.01;
constexpr double kEngineSe = 3.0;
constexpr std::size_t kEngineSims = 1'000'000;
constexpr double kSigmaSfTol = 0.0005;
constexpr double kModelColumnTol = 0.005;
constexpr double kNormalQuantileTol = 1e-4;
constexpr double kChi2Tol = 0.0005;
constexpr double kCriticalTol = 0.01;
constexpr double kLeveneTol = 1e-12;
constexpr double kMvnRecoveryTol = 0.02;
constexpr double kGradientTol = 1e-4;
constexpr double kGpRecoveryTol = 0.02;
constexpr double kScaleTol = 1e-12;
constexpr double kHomogeneityTol = 1e-9;

const std::vector<std::string> kCompanies{"Folksam", "If", "LF", "Trygg-Hansa"};

struct Verdict {
    bool ok = true;
    std::vector<std::string> notes;

    void check(bool condition, std::string note) {
        if (!condition) ok = false;
        notes.push_back((condition ? "" : "!") + std::move(note));
    }
};

int failures = 0;

void print(std::string_view id, std::string_view title, const Verdict& v) {
    if (!v.ok) ++failures;
    std::string notes;
    for (const auto& n : v.notes) notes += (notes.empty() ? "" : "; ") + n;
    std::cout << fmt::format("{} {} {}: {}", id, v.ok ? "PASS" : "FAIL", title, notes) << std::endl;
}

bool near(double got, double want, double tol) { return std::abs(got - want) <= tol; }

std::vector<LiabilityProfile> profiles(const PipelineConfig& c) {
    std::vector<LiabilityProfile> out;
    for (const auto& name : kCompanies) out.push_back(c.profiles.at(name));
    return out;
}

Verdict ac1(const PipelineConfig& c) {
    const std::vector<double> want{1.92, 1.47, 3.77, 4.87};
    Verdict v;
    const auto ps = profiles(c);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const double got = scr_simple_internal(ps[i], c.sample_stdevs.at(kCompanies[i]));
        v.check(near(got, want[i], kScrAbsTol), fmt::format("{} {:.4f} vs {}", kCompanies[i], got, want[i]));
    }
    return v;
}

Verdict ac2(const PipelineConfig& c) {
    const std::map<std::string, std::vector<double>> want{{"model1", {2.69, 2.99, 5.63, 3.93}},
                                                          {"model2", {2.65, 2.69, 5.48, 3.92}}};
    Verdict v;
    QuantileSettings qs;
    qs.monte_carlo.n_sims = kEngineSims;
    qs.monte_carlo.threads = 4;
    double worst_z = 0;
    const auto ps = profiles(c);
    for (const auto& [name, targets] : want) {
        for (std::size_t i = 0; i < ps.size(); ++i) {
            const double got = scr_mixed_model(ps[i], c.models.at(name));
            v.check(std::abs(got - targets[i]) <= kMixedRelTol * targets[i],
                    fmt::format("{} {} {:.4f} vs {}", name, kCompanies[i], got, targets[i]));
            const auto model = build_mixed_model(ps[i], c.models.at(name));
            const auto mc = quantile_total_loss(model, kScrLevel, QuantileEngine::monte_carlo, qs);
            const double z = (mc.value - got) / mc.std_error;
            worst_z = std::max(worst_z, std::abs(z));
        }
    }
    v.check(worst_z <= kEngineSe, fmt::format("max engine gap {:.2f} SE", worst_z));
    return v;
}

Verdict ac3(const PipelineConfig& c) {
    const std::vector<double> want{2.84, 4.54, 6.02, 3.73};
    const std::vector<double> liability{15.73, 21.74, 31.81, 20.66};
    Verdict v;
    const auto ps = profiles(c);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const double got = scr_standard_total(ps[i], c.segmentation, c.regulator);
        v.check(near(got, want[i], kScrAbsTol), fmt::format("{} {:.4f} vs {}", kCompanies[i], got, want[i]));
        const double y0 = ps[i].total_y0();
        v.check(near(y0, liability[i], kScrAbsTol), fmt::format("Y0 {:.2f}", y0));
    }
    return v;
}

Verdict ac4(const PipelineConfig& c) {
    const std::map<Lob, double> sf{{Lob::IA, 0.092}, {Lob::H, 0.072}, {Lob::BLP, 0.070}, {Lob::ML, 0.084}, {Lob::MO, 0.076}};
    Verdict v;
    const auto got = benchmark_sigma_swedish(aggregate_profiles(profiles(c)), c.segmentation, c.regulator);
    for (const auto& [lob, want] : sf) {
        v.check(near(got.at(lob), want, kSigmaSfTol), fmt::format("SF {} {:.4f} vs {}", to_string(lob), got.at(lob), want));
    }
    v.check(kStandardFormulaQuantileRatio == 3.0, "SF q/sigma 3");

    // label -> (sigma, q/sigma) for each model column
    const std::map<std::string, std::map<std::string, std::pair<double, double>>> model{
        {"model1",
         {{"IA", {0.12, 3.26}}, {"H", {0.099, 2.58}}, {"BLP", {0.23, 3.26}}, {"ML", {0.050, 2.58}},
          {"ML:Trygg-Hansa", {0.12, 2.58}}, {"MO", {0.12, 2.58}}}},
        {"model2",
         {{"IA", {0.12, 3.26}}, {"H", {0.10, 2.58}}, {"BLP", {0.23, 3.26}}, {"ML", {0.025, 2.58}},
          {"ML:Trygg-Hansa", {0.12, 2.58}}, {"MO", {0.096, 2.58}}}},
    };
    double worst = 0;
    std::string worst_label;
    for (const auto& [name, rows] : model) {
        for (const auto& row : model_sigma_table(c.models.at(name))) {
            const auto& [sigma, ratio] = rows.at(row.label);
            for (double gap : {std::abs(row.sigma - sigma), std::abs(row.quantile_ratio - ratio)}) {
                if (gap > worst) {
                    worst = gap;
                    worst_label = name + " " + row.label;
                }
            }
        }
    }
    v.check(worst <= kModelColumnTol, fmt::format("model columns max gap {:.4f} ({})", worst, worst_label));
    return v;
}

Verdict ac5() {
    Verdict v;
    const double z = normal_quantile(0.995);
    v.check(near(z, 2.5758, kNormalQuantileTol), fmt::format("z_0.995 {:.6f}", z));
    const double p = chi2_sf(2.73, 1);
    v.check(near(p, 0.099, kChi2Tol), fmt::format("P(chi2_1 > 2.73) {:.6f} vs 0.099", p));
    return v;
}

Verdict ac6() {
    Verdict v;
    const double t = spearman_critical_value(11, 0.05, 200'000, kDefaultSeed, 4);
    v.check(near(t, 0.62, kCriticalTol), fmt::format("n=11 critical |rho| {:.4f}", t));
    return v;
}

Verdict ac7(const PipelineConfig& c) {
    Verdict v;

    std::mt19937_64 rng(7);
    double worst = 0;
    for (int k = 0; k < 50; ++k) {
        const int g = 2 + k % 4;
        const int n = 5 + k % 9;
        const auto groups = oracles::random_groups(rng, g, n);
        const double w = levene_test(groups).w;
        worst = std::max(worst, std::abs(w - oracles::oracle_w(groups, true)) / std::max(1.0, std::abs(w)));
    }
    v.check(worst <= kLeveneTol, fmt::format("Levene oracle {:.1e}", worst));

    const StructuredCovParams truth{0.1, 0.12, 0.7, 0.5, 0.35, 0.35};
    const auto data = oracles::simulate(truth, 10'000, 4);
    const auto fit = fit_structured_mvn(data, {.rho1_equals_rho2 = true});
    double gap = 0;
    const auto got = fit.params.as_array();
    const auto want = truth.as_array();
    for (int k = 0; k < 6; ++k) gap = std::max(gap, std::abs(got[k] - want[k]));
    v.check(gap <= kMvnRecoveryTol, fmt::format("MVN recovery {:.4f}", gap));

    const auto free_fit = fit_structured_mvn(data, {});
    const auto grad = oracles::numeric_gradient(free_fit.params, data);
    double g = 0;
    for (double x : grad) g = std::max(g, std::abs(x) / static_cast<double>(data.size()));
    v.check(g <= kGradientTol, fmt::format("FD gradient at optimum {:.1e}", g));

    const auto gp = fit_gp(oracles::simulate_gp(0.2, 1.0, 100'000, 2014), false);
    const double gp_gap = std::max(std::abs(gp.params.xi - 0.2), std::abs(gp.params.beta - 1.0));
    v.check(gp_gap <= kGpRecoveryTol, fmt::format("GP recovery {:.4f}", gp_gap));

    const auto reports = generate_reports(reference_fixture_spec());
    const auto base = build_loss_panel(reports, 3, DataQualityPolicy{});
    double scale_gap = 0;
    for (double lambda : {1e-3, 2.5, 1e4}) {
        std::vector<ReportSnapshot> scaled;
        for (const auto& s : reports) scaled.push_back(oracles::scaled(s, lambda));
        const auto other = build_loss_panel(scaled, 3, DataQualityPolicy{});
        for (std::size_t i = 0; i < base.records.size(); ++i) {
            scale_gap = std::max(scale_gap, std::abs(other.records[i].u - base.records[i].u) /
                                                std::max(1.0, std::abs(base.records[i].u)));
        }
    }
    v.check(scale_gap <= kScaleTol, fmt::format("U scale invariance {:.1e}", scale_gap));

    double hom = 0;
    const auto& p = c.profiles.at("Folksam");
    const auto& s = c.sample_stdevs.at("Folksam");
    const auto& m1 = c.models.at("model1");
    const double simple = scr_simple_internal(p, s);
    const double mixed = scr_mixed_model(p, m1);
    const double standard = scr_standard_total(p, c.segmentation, c.regulator);
    for (double lambda : {0.001, 3.0, 1000.0}) {
        const auto q = p.scaled(lambda);
        hom = std::max({hom, std::abs(scr_simple_internal(q, s) / (lambda * simple) - 1),
                        std::abs(scr_mixed_model(q, m1) / (lambda * mixed) - 1),
                        std::abs(scr_standard_total(q, c.segmentation, c.regulator) / (lambda * standard) - 1)});
    }
    v.check(hom <= kHomogeneityTol, fmt::format("SCR homogeneity {:.1e}", hom));
    return v;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Verdict ac8() {
    Verdict v;
    const fs::path dir = fs::temp_directory_path() / ("solvcap_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "reports.csv", std::ios::binary);
        write_report_csv(out, generate_reports(reference_fixture_spec()));
        std::ofstream cfg(dir / "config.json");
        cfg << R"({"reports": "reports.csv"})";
    }
    std::size_t compared = 0;
    std::vector<std::string> differing;
    for (const std::string command : {"losses", "tests", "fit", "scr"}) {
        std::vector<fs::path> outs;
        for (const auto& [tag, threads] : {std::pair{"a", 1}, std::pair{"b", 1}, std::pair{"c", 4}}) {
            const fs::path out = dir / (command + "_" + tag);
            const std::string cmd = fmt::format("{} {} --config {} --threads {} --out {} 2>/dev/null", SOLVCAP_CLI,
                                                command, (dir / "config.json").string(), threads, out.string());
            const int raw = std::system(cmd.c_str());
            if (!WIFEXITED(raw) || WEXITSTATUS(raw) != 0) differing.push_back(command + " exit");
            outs.push_back(out);
        }
        if (!fs::exists(outs[0])) continue;
        for (const auto& entry : fs::directory_iterator(outs[0])) {
            const auto ref = slurp(entry.path());
            for (std::size_t k = 1; k < outs.size(); ++k) {
                if (slurp(outs[k] / entry.path().filename()) != ref) differing.push_back(entry.path().filename().string());
            }
            ++compared;
        }
    }
    fs::remove_all(dir);
    v.check(compared > 0 && differing.empty(),
            fmt::format("{} documents compared over 3 runs, {} differ", compared, differing.size()));
    return v;
}

}  // namespace

int main() {
    const PipelineConfig c = PipelineConfig::defaults();
    auto guarded = [](auto&& fn) {
        try {
            return fn();
        } catch (const std::exception& e) {
            Verdict v;
            v.check(false, std::string("error: ") + e.what());
            return v;
        }
    };
    print("AC1", "internal-model SCR", guarded([&] { return ac1(c); }));
    print("AC2", "mixed-model SCR", guarded([&] { return ac2(c); }));
    print("AC3", "standard-formula SCR", guarded([&] { return ac3(c); }));
    print("AC4", "benchmark sigma", guarded([&] { return ac4(c); }));
    print("AC5", "distribution functions", guarded([] { return ac5(); }));
    print("AC6", "Spearman critical value", guarded([] { return ac6(); }));
    print("AC7", "property suites", guarded([&] { return ac7(c); }));
    print("AC8", "determinism", guarded([] { return ac8(); }));
    return failures == 0 ? 0 : 1;
}
