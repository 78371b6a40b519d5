#include "solvcap/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "solvcap/error.hpp"
#include "solvcap/fitting.hpp"
#include "solvcap/hypothesis.hpp"
#include "solvcap/report.hpp"
#include "solvcap/standard_formula.hpp"
#include "solvcap/structured_mvn.hpp"

namespace solvcap {

namespace {

using ojson = nlohmann::ordered_json;

// Accumulates a CSV table and counts its data rows.
class Table {
public:
    explicit Table(std::string_view header) { text_ << header << '\n'; }

    template <typename... Args>
    void row(fmt::format_string<Args...> format, Args&&... args) {
        text_ << fmt::format(format, std::forward<Args>(args)...) << '\n';
        ++rows_;
    }

    std::string str() const { return text_.str(); }
    std::size_t rows() const { return rows_; }

private:
    std::ostringstream text_;
    std::size_t rows_ = 0;
};

class RunBuilder {
public:
    explicit RunBuilder(std::string command) : command_(std::move(command)) {}

    void add(std::string name, const Table& table) {
        index_.push_back({{"name", name}, {"rows", table.rows()}});
        out_.documents.push_back({std::move(name), table.str()});
    }
    ojson& summary() { return summary_; }
    void merge(const ojson& fields) {
        for (auto it = fields.begin(); it != fields.end(); ++it) summary_[it.key()] = it.value();
    }
    Diagnostics& diagnostics() { return out_.diagnostics; }

    RunOutput finish() {
        ojson s;
        s["command"] = command_;
        for (const auto& [key, value] : summary_.items()) s[key] = value;
        s["documents"] = index_;
        ojson diags = ojson::array();
        for (const auto& d : out_.diagnostics.entries()) diags.push_back({{"code", d.code}, {"message", d.message}});
        s["diagnostics"] = diags;
        out_.documents.push_back({"summary.json", s.dump(2) + "\n"});
        return std::move(out_);
    }

private:
    std::string command_;
    ojson summary_ = ojson::object();
    ojson index_ = ojson::array();
    RunOutput out_;
};

std::string join(const std::vector<std::string>& items, char sep = ';') {
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) out += sep;
        out += item;
    }
    return out;
}

// U by accounting year for one series.
std::map<int, double> series_u(const LossPanel& panel, const std::string& company, Lob lob) {
    std::map<int, double> out;
    for (const auto& r : panel.records) {
        if (r.company == company && r.lob == lob) out[r.accounting_year] = r.u;
    }
    return out;
}

std::vector<double> values(const std::map<int, double>& series) {
    std::vector<double> out;
    for (const auto& [year, u] : series) out.push_back(u);
    return out;
}

// Restricts every series to the accounting years they all share.
std::vector<std::vector<double>> aligned(const std::vector<std::map<int, double>>& series, std::set<int>* years_out = nullptr) {
    std::set<int> years;
    if (!series.empty()) {
        for (const auto& [year, u] : series.front()) years.insert(year);
    }
    for (const auto& s : series) {
        std::erase_if(years, [&](int y) { return !s.contains(y); });
    }
    std::vector<std::vector<double>> out;
    for (const auto& s : series) {
        std::vector<double> v;
        for (int y : years) v.push_back(s.at(y));
        out.push_back(std::move(v));
    }
    if (years_out != nullptr) *years_out = years;
    return out;
}

std::map<int, double> require_series(const LossPanel& panel, const std::string& company, Lob lob,
                                     std::string_view context) {
    auto s = series_u(panel, company, lob);
    if (s.empty()) {
        throw ValidationError(fmt::format("{}: no losses for {}/{}", context, company, to_string(lob)));
    }
    return s;
}

ojson panel_summary(const PipelineConfig& config, const LossPanel& panel) {
    ojson s;
    s["reports"] = config.reports.generic_string();
    s["m"] = config.m;
    s["loss_records"] = panel.records.size();
    s["excluded_records"] = panel.excluded.size();
    ojson skipped = ojson::array();
    for (const auto& k : panel.skipped) {
        skipped.push_back({{"series", k.series.label()}, {"accounting_year", k.accounting_year}, {"reason", k.reason}});
    }
    s["skipped"] = skipped;
    return s;
}

std::string constraints_label(const MvnConstraints& c) {
    if (c.rho1_zero) return "M0";
    if (c.rho1_equals_rho2) return "M1";
    return "free";
}

}  // namespace

const Document* RunOutput::find(std::string_view name) const {
    for (const auto& d : documents) {
        if (d.name == name) return &d;
    }
    return nullptr;
}

LossPanel load_panel(const PipelineConfig& config) {
    Diagnostics diagnostics;
    const auto snapshots = load_reports(config.reports, ReportSchema{config.horizons}, &diagnostics);
    check_policy_references(config.policy, snapshots);
    LossPanel panel = build_loss_panel(snapshots, config.m, config.policy, config.threads);
    Diagnostics all = diagnostics;
    all.append(panel.diagnostics);
    panel.diagnostics = std::move(all);
    return panel;
}

std::map<std::string, LiabilityProfile> scr_profiles(const PipelineConfig& config) {
    if (config.profile_source == ProfileSource::config) return config.profiles;

    const auto snapshots = load_reports(config.reports, ReportSchema{config.horizons});
    std::map<SeriesKey, const ReportSnapshot*> latest;
    for (const auto& s : snapshots) {
        auto& slot = latest[s.series()];
        if (slot == nullptr || slot->report_year < s.report_year) slot = &s;
    }
    std::map<std::string, LiabilityProfile> out;
    for (const auto& [key, s] : latest) {
        auto& profile = out[key.company];
        profile.company = key.company;
        auto& l = profile[key.lob];
        const int n = s->report_year;
        if (!s->premiums.contains(n + 1)) {
            throw ValidationError(fmt::format("{}: report {} has no premium for {}", key.label(), n, n + 1));
        }
        l.premium = s->premium(n + 1);
        l.r0 = outstanding_incurred(*s);
        l.p0 = premium_liability(l.premium, loss_ratio(*s, config.m));
    }
    return out;
}

std::map<std::string, std::map<Lob, double>> scr_stdevs(const PipelineConfig& config) {
    if (config.stdev_source == StdevSource::config) return config.sample_stdevs;
    const LossPanel panel = load_panel(config);
    std::map<std::string, std::map<Lob, double>> out;
    for (const auto& company : panel.companies()) {
        for (Lob lob : kAllLobs) {
            const auto s = series_u(panel, company, lob);
            if (s.size() >= 2) out[company][lob] = fit_zero_mean_normal(values(s)).sigma;
        }
    }
    return out;
}

RunOutput cmd_losses(const PipelineConfig& config) {
    RunBuilder run("losses");
    const LossPanel panel = load_panel(config);
    run.diagnostics().append(panel.diagnostics);

    Table losses(kLossCsvHeader);
    for (const auto& r : panel.records) {
        losses.row("{},{},{},{},{},{},{},{},{},{},{}", r.company, to_string(r.lob), r.accounting_year, r.r0, r.p0, r.y0,
                   r.r1, r.p1, r.y1, r.loss_ratio, r.u);
    }
    run.add("losses.csv", losses);
    run.merge(panel_summary(config, panel));
    return run.finish();
}

RunOutput cmd_tests(const PipelineConfig& config) {
    RunBuilder run("tests");
    const LossPanel panel = load_panel(config);
    run.diagnostics().append(panel.diagnostics);
    const std::uint64_t seed = config.monte_carlo.seed;

    Table levene("label,lob,companies,groups,n_per_group,W,df1,df2,p_value");
    for (const auto& v : config.levene) {
        std::vector<std::map<int, double>> series;
        for (const auto& c : v.companies) series.push_back(require_series(panel, c, v.lob, "levene " + v.label));
        const auto groups = aligned(series);
        const auto r = levene_test(groups);
        levene.row("{},{},{},{},{},{},{},{},{}", v.label, to_string(v.lob), join(v.companies), groups.size(),
                   groups.front().size(), r.w, r.df1, r.df2, r.p_value);
    }
    run.add("levene.csv", levene);

    std::map<int, double> critical;
    auto critical_for = [&](int n) {
        auto it = critical.find(n);
        if (it == critical.end()) {
            it = critical
                     .emplace(n, spearman_critical_value(n, config.spearman_level, config.spearman_permutations, seed,
                                                         config.threads))
                     .first;
        }
        return it->second;
    };
    auto included = [&](const std::string& company, Lob lob) {
        return !config.spearman_excluded.contains(SeriesKey{company, lob});
    };
    auto correlate = [&](Table& table, const std::string& group, const std::string& a, const std::string& b,
                         const std::map<int, double>& x, const std::map<int, double>& y) {
        const auto pair = aligned({x, y});
        const auto n = pair[0].size();
        if (n < 3) {
            warn(&run.diagnostics(), "short_overlap", fmt::format("{}: {} and {} share only {} years", group, a, b, n));
            return;
        }
        const auto r = spearman_rho(pair[0], pair[1]);
        const double t = critical_for(static_cast<int>(n));
        table.row("{},{},{},{},{},{},{}", group, a, b, n, r.rho, t, std::abs(r.rho) >= t ? 1 : 0);
    };

    Table by_company("lob,company_a,company_b,n,rho,critical_value,significant");
    for (Lob lob : kAllLobs) {
        for (std::size_t i = 0; i < config.companies.size(); ++i) {
            for (std::size_t j = i + 1; j < config.companies.size(); ++j) {
                const auto& a = config.companies[i];
                const auto& b = config.companies[j];
                if (!included(a, lob) || !included(b, lob)) continue;
                const auto x = series_u(panel, a, lob);
                const auto y = series_u(panel, b, lob);
                if (x.empty() || y.empty()) continue;
                correlate(by_company, std::string(to_string(lob)), a, b, x, y);
            }
        }
    }
    run.add("spearman_companies.csv", by_company);

    Table by_lob("company,lob_a,lob_b,n,rho,critical_value,significant");
    for (const auto& company : config.companies) {
        for (std::size_t i = 0; i < kLobCount; ++i) {
            for (std::size_t j = i + 1; j < kLobCount; ++j) {
                const Lob a = kAllLobs[i];
                const Lob b = kAllLobs[j];
                if (!included(company, a) || !included(company, b)) continue;
                const auto x = series_u(panel, company, a);
                const auto y = series_u(panel, company, b);
                if (x.empty() || y.empty()) continue;
                correlate(by_lob, company, std::string(to_string(a)), std::string(to_string(b)), x, y);
            }
        }
    }
    run.add("spearman_lobs.csv", by_lob);

    Table crit("n,level,permutations,seed,critical_value");
    for (const auto& [n, t] : critical) crit.row("{},{},{},{},{}", n, config.spearman_level, config.spearman_permutations, seed, t);
    run.add("spearman_critical.csv", crit);

    run.merge(panel_summary(config, panel));
    run.summary()["seed"] = seed;
    return run.finish();
}

RunOutput cmd_fit(const PipelineConfig& config) {
    RunBuilder run("fit");
    const LossPanel panel = load_panel(config);
    run.diagnostics().append(panel.diagnostics);

    Table normal("company,lob,n,first_year,last_year,sigma");
    for (const auto& company : panel.companies()) {
        for (Lob lob : kAllLobs) {
            const auto s = series_u(panel, company, lob);
            if (s.size() < 2) continue;
            const auto fit = fit_zero_mean_normal(values(s));
            normal.row("{},{},{},{},{},{}", company, to_string(lob), fit.n_obs, s.begin()->first, s.rbegin()->first,
                       fit.sigma);
        }
    }
    run.add("normal_fits.csv", normal);

    Table pooled("lob,companies,model,n,sigma,xi,beta,loglik,levene_p");
    for (const auto& [lob, companies] : config.pooling) {
        std::vector<std::map<int, double>> series;
        std::vector<std::vector<double>> samples;
        for (const auto& c : companies) {
            series.push_back(require_series(panel, c, lob, fmt::format("pooling {}", to_string(lob))));
            samples.push_back(values(series.back()));
        }
        std::optional<LeveneResult> test;
        const auto groups = aligned(series);
        if (groups.size() >= 2 && groups.front().size() >= 2) test = levene_test(groups);
        const std::string levene_p = test ? fmt::format("{}", test->p_value) : std::string();
        const std::string names = join(companies);

        const auto fit = fit_pooled_normal(samples, test ? &*test : nullptr, &run.diagnostics());
        pooled.row("{},{},normal,{},{},,,,{}", to_string(lob), names, fit.n_obs, fit.sigma, levene_p);
        if (lob != Lob::IA && lob != Lob::BLP) continue;
        const auto positive = positive_values(samples);
        for (const bool fix : {false, true}) {
            const auto gp = fit_gp(positive, fix, &run.diagnostics());
            if (gp.params.xi < -1 + 1e-6) {
                warn(&run.diagnostics(), "gp_boundary",
                     fmt::format("{}: GP shape estimate sits on the xi = -1 boundary", to_string(lob)));
            }
            pooled.row("{},{},{},{},,{},{},{},{}", to_string(lob), names, fix ? "gp_xi0" : "gp", gp.n_obs, gp.params.xi,
                       gp.params.beta, gp.loglik, levene_p);
        }
    }
    run.add("pooled_fits.csv", pooled);

    Table mvn("case,model,free_parameters,n_obs,first_year,last_year,sigma_H,sigma_MO,rho_H,rho_MO,rho_1,rho_2,loglik,"
              "starts_tried,starts_converged,iterations,gradient_norm");
    Table lrt("case,full,reduced,D,df,p_value,needs_refit");
    for (const auto& fc : config.fit_cases) {
        std::vector<std::map<int, double>> series;
        for (Lob lob : {Lob::H, Lob::MO}) {
            for (const auto& c : config.companies) series.push_back(require_series(panel, c, lob, "joint model"));
        }
        std::set<int> years;
        const auto columns = aligned(series, &years);
        std::vector<Observation8> data;
        std::vector<int> used;
        std::size_t row = 0;
        for (int year : years) {
            const bool dropped = std::any_of(config.companies.begin(), config.companies.end(),
                                             [&](const std::string& c) { return fc.excludes(c, year); });
            if (!dropped) {
                Observation8 obs;
                for (int d = 0; d < kMvnDim; ++d) obs[d] = columns[d][row];
                data.push_back(obs);
                used.push_back(year);
            }
            ++row;
        }
        if (data.empty()) throw ValidationError(fmt::format("fit case {}: no complete H/MO years", fc.label));

        std::map<std::string, StructuredFit> fits;
        for (const MvnConstraints c : {MvnConstraints{}, MvnConstraints{true, false}, MvnConstraints{true, true}}) {
            const auto fit = fit_structured_mvn(data, c);
            const auto& p = fit.params;
            mvn.row("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}", fc.label, constraints_label(c),
                    c.free_parameters(), fit.n_obs, used.front(), used.back(), p.sigma_h, p.sigma_mo, p.rho_h, p.rho_mo,
                    p.rho_1, p.rho_2, fit.loglik, fit.starts_tried, fit.starts_converged, fit.iterations,
                    fit.gradient_norm);
            fits.emplace(constraints_label(c), fit);
        }
        for (const auto& [full, reduced] : {std::pair{"free", "M1"}, std::pair{"M1", "M0"}}) {
            const auto r = lr_test(fits.at(full), fits.at(reduced));
            if (r.needs_refit) {
                warn(&run.diagnostics(), "lrt_negative",
                     fmt::format("{}: {} fitted below {} by more than the tolerance", fc.label, full, reduced));
            }
            lrt.row("{},{},{},{},{},{},{}", fc.label, full, reduced, r.d, r.df, r.p_value, r.needs_refit ? 1 : 0);
        }
    }
    run.add("mvn_fits.csv", mvn);
    run.add("lrt.csv", lrt);

    run.merge(panel_summary(config, panel));
    return run.finish();
}

RunOutput cmd_scr(const PipelineConfig& config, const std::string& which) {
    const bool all = which == "all";
    const bool want_internal = all || which == "internal";
    const bool want_standard = all || which == "standard";
    std::vector<std::string> models;
    if (all) {
        for (const auto& [name, params] : config.models) models.push_back(name);
    } else if (config.models.contains(which)) {
        models.push_back(which);
    } else if (!want_internal && !want_standard) {
        throw UsageError(fmt::format("unknown --which '{}'", which));
    }

    RunBuilder run("scr");
    const auto profiles = scr_profiles(config);
    std::vector<LiabilityProfile> ordered;
    for (const auto& company : config.companies) {
        const auto it = profiles.find(company);
        if (it == profiles.end()) throw ValidationError(fmt::format("no liability profile for {}", company));
        ordered.push_back(it->second);
    }

    Table scr("company,measure,value");
    for (const auto& p : ordered) scr.row("{},predicted_liability,{}", p.company, p.total_y0());

    if (want_internal) {
        const auto stdevs = scr_stdevs(config);
        for (const auto& p : ordered) {
            const auto it = stdevs.find(p.company);
            if (it == stdevs.end()) throw ConfigError(fmt::format("no standard deviations for {}", p.company));
            scr.row("{},internal,{}", p.company, scr_simple_internal(p, it->second));
        }
    }

    Table mc("company,model,convolution,monte_carlo,std_error,z");
    QuantileSettings qs;
    qs.convolution = config.convolution;
    qs.monte_carlo.seed = config.monte_carlo.seed;
    qs.monte_carlo.n_sims = config.monte_carlo.n_sims;
    qs.monte_carlo.threads = config.threads;
    for (const auto& name : models) {
        const auto& params = config.models.at(name);
        for (const auto& p : ordered) {
            const auto model = build_mixed_model(p, params, &run.diagnostics());
            const auto conv = quantile_total_loss(model, kScrLevel, QuantileEngine::convolution, qs, &run.diagnostics());
            scr.row("{},{},{}", p.company, name, conv.value);
            if (!config.monte_carlo.verify) continue;
            const auto sim = quantile_total_loss(model, kScrLevel, QuantileEngine::monte_carlo, qs, &run.diagnostics());
            const double z = sim.std_error > 0 ? (sim.value - conv.value) / sim.std_error : 0.0;
            if (std::abs(z) > 3) {
                warn(&run.diagnostics(), "engine_disagreement",
                     fmt::format("{} {}: simulation differs from convolution by {:.2f} standard errors", p.company,
                                 name, z));
            }
            mc.row("{},{},{},{},{},{}", p.company, name, conv.value, sim.value, sim.std_error, z);
        }
    }

    Table sf("company,sii_lob,v_prem,v_res,volume,sigma");
    Table benchmark("source,lob,sigma,quantile_ratio,quantile");
    if (want_standard) {
        for (const auto& p : ordered) {
            const auto r = scr_standard(p, config.segmentation, config.regulator);
            for (SiiLob lob : kAllSiiLobs) {
                const auto i = index_of(lob);
                sf.row("{},{},{},{},{},{}", p.company, to_string(lob), r.volumes.prem[i], r.volumes.res[i],
                       r.lob_risk[i].volume, r.lob_risk[i].sigma);
            }
            scr.row("{},standard_health,{}", p.company, r.health);
            scr.row("{},standard_nonlife,{}", p.company, r.nonlife);
            scr.row("{},standard,{}", p.company, r.total);
        }
        const auto aggregate = aggregate_profiles(ordered);
        for (const auto& [lob, sigma] : benchmark_sigma_swedish(aggregate, config.segmentation, config.regulator)) {
            benchmark.row("standard_formula,{},{},{},{}", to_string(lob), sigma, kStandardFormulaQuantileRatio,
                          kStandardFormulaQuantileRatio * sigma);
        }
    }
    for (const auto& name : models) {
        for (const auto& row : model_sigma_table(config.models.at(name))) {
            benchmark.row("{},{},{},{},{}", name, row.label, row.sigma, row.quantile_ratio, row.quantile);
        }
    }

    run.add("scr.csv", scr);
    if (want_standard) run.add("standard_formula.csv", sf);
    if (benchmark.rows() > 0) run.add("benchmark_sigma.csv", benchmark);
    if (!models.empty() && config.monte_carlo.verify) run.add("mc_check.csv", mc);
    run.summary()["which"] = which;
    run.summary()["seed"] = config.monte_carlo.seed;
    run.summary()["n_sims"] = config.monte_carlo.n_sims;
    return run.finish();
}

void write_outputs(const RunOutput& output, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
    for (const auto& doc : output.documents) {
        const auto path = dir / doc.name;
        std::ofstream out(path, std::ios::binary);
        out << doc.content;
        if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
    }
}

}  // namespace solvcap
