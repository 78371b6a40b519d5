#include "solvcap/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "solvcap/error.hpp"
#include "solvcap/structured_mvn.hpp"

namespace solvcap {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

const std::vector<std::string> kStudyCompanies{"Folksam", "If", "LF", "Trygg-Hansa"};

void check_keys(const json& object, std::string_view where, std::initializer_list<std::string_view> allowed) {
    if (!object.is_object()) throw ConfigError(fmt::format("{}: expected an object", where));
    for (const auto& [key, value] : object.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError(fmt::format("{}: unknown key '{}'", where, key));
        }
    }
}

template <typename T>
T get(const json& value, std::string_view where) {
    try {
        return value.get<T>();
    } catch (const json::exception&) {
        throw ConfigError(fmt::format("{}: wrong value type", where));
    }
}

Lob lob_from(const std::string& text, std::string_view where) {
    const auto lob = parse_lob(text);
    if (!lob) throw ConfigError(fmt::format("{}: unknown LoB '{}'", where, text));
    return *lob;
}

SiiLob sii_from(const std::string& text, std::string_view where) {
    const auto lob = parse_sii_lob(text);
    if (!lob) throw ConfigError(fmt::format("{}: unknown Solvency II LoB '{}'", where, text));
    return *lob;
}

// "Company/LOB"
SeriesKey series_from(const std::string& text, std::string_view where) {
    const auto slash = text.rfind('/');
    if (slash == std::string::npos || slash == 0) {
        throw ConfigError(fmt::format("{}: expected 'company/LOB', got '{}'", where, text));
    }
    return {text.substr(0, slash), lob_from(text.substr(slash + 1), where)};
}

std::filesystem::path resolve(const std::string& text, const std::filesystem::path& base) {
    std::filesystem::path p(text);
    if (p.is_relative() && !base.empty()) p = base / p;
    return p.lexically_normal();
}

ModelParams model_from(const json& j, const ModelParams& fallback, const std::string& where) {
    check_keys(j, where,
               {"sigma_H", "sigma_MO", "rho_1", "sigma_ML", "sigma_ML_overrides", "xi_IA", "beta_IA", "xi_BLP",
                "beta_BLP"});
    ModelParams m = fallback;
    auto num = [&](const char* key, double& out) {
        if (j.contains(key)) out = get<double>(j[key], where + "." + key);
    };
    num("sigma_H", m.sigma_h);
    num("sigma_MO", m.sigma_mo);
    num("rho_1", m.rho_1);
    num("sigma_ML", m.sigma_ml);
    num("xi_IA", m.xi_ia);
    num("beta_IA", m.beta_ia);
    num("xi_BLP", m.xi_blp);
    num("beta_BLP", m.beta_blp);
    if (j.contains("sigma_ML_overrides")) {
        m.sigma_ml_overrides = get<std::map<std::string, double>>(j["sigma_ML_overrides"], where + ".sigma_ML_overrides");
    }
    return m;
}

ojson model_to(const ModelParams& m) {
    ojson j;
    j["sigma_H"] = m.sigma_h;
    j["sigma_MO"] = m.sigma_mo;
    j["rho_1"] = m.rho_1;
    j["sigma_ML"] = m.sigma_ml;
    j["sigma_ML_overrides"] = m.sigma_ml_overrides;
    j["xi_IA"] = m.xi_ia;
    j["beta_IA"] = m.beta_ia;
    j["xi_BLP"] = m.xi_blp;
    j["beta_BLP"] = m.beta_blp;
    return j;
}

std::vector<std::string> without(const std::string& company) {
    std::vector<std::string> out;
    for (const auto& c : kStudyCompanies) {
        if (c != company) out.push_back(c);
    }
    return out;
}

std::string pair_key(SiiLob a, SiiLob b) { return fmt::format("{}/{}", to_string(a), to_string(b)); }

}  // namespace

bool FitCase::excludes(const std::string& company, int accounting_year) const {
    for (const auto& e : excluded) {
        if ((e.company == "*" || e.company == company) && e.accounting_year == accounting_year) return true;
    }
    return false;
}

PipelineConfig PipelineConfig::defaults() {
    PipelineConfig c;
    c.reports = "reports_fixture.csv";
    c.output_dir = "out";
    c.policy.drop_first_accounting_years = 2;
    c.companies = kStudyCompanies;
    c.pooling[Lob::IA] = kStudyCompanies;
    c.pooling[Lob::BLP] = without("Folksam");
    c.pooling[Lob::ML] = without("Trygg-Hansa");
    c.levene = {
        {"IA", Lob::IA, kStudyCompanies},
        {"H", Lob::H, kStudyCompanies},
        {"BLP without Folksam", Lob::BLP, without("Folksam")},
        {"ML", Lob::ML, kStudyCompanies},
        {"ML without Trygg-Hansa", Lob::ML, without("Trygg-Hansa")},
        {"MO", Lob::MO, kStudyCompanies},
    };
    c.spearman_excluded = {{"Folksam", Lob::BLP}};
    c.fit_cases = {{"all", {}}, {"without_2001", {{"Folksam", 2001}}}};

    const std::map<std::string, std::array<std::array<double, 3>, kLobCount>> table7{
        {"Folksam", {{{1.49, 5.05, 1.11}, {2.67, 1.12, 1.76}, {0.26, 0.14, 0.18}, {0.98, 4.32, 0.74}, {1.96, 0.18, 1.13}}}},
        {"If", {{{0.64, 1.07, 0.42}, {1.63, 0.59, 1.10}, {1.85, 2.27, 1.02}, {1.94, 11.07, 1.67}, {3.50, 0.34, 2.19}}}},
        {"LF", {{{1.30, 3.18, 1.08}, {3.51, 1.61, 2.51}, {5.13, 3.71, 3.22}, {2.87, 11.29, 2.16}, {3.62, 0.60, 2.45}}}},
        {"Trygg-Hansa",
         {{{2.53, 6.00, 1.51}, {1.49, 0.65, 1.08}, {1.67, 1.26, 1.05}, {1.70, 6.29, 0.99}, {2.11, 0.39, 1.44}}}},
    };
    for (const auto& [company, rows] : table7) {
        LiabilityProfile p;
        p.company = company;
        for (Lob lob : kAllLobs) {
            const auto& r = rows[index_of(lob)];
            p[lob] = {r[0], r[1], r[2]};
        }
        c.profiles[company] = p;
    }

    const std::map<std::string, std::array<double, kLobCount>> table2{
        {"Folksam", {0.040, 0.082, 1.5, 0.077, 0.17}},
        {"If", {0.15, 0.10, 0.10, 0.026, 0.069}},
        {"LF", {0.090, 0.092, 0.18, 0.028, 0.12}},
        {"Trygg-Hansa", {0.21, 0.12, 0.22, 0.12, 0.11}},
    };
    for (const auto& [company, values] : table2) {
        for (Lob lob : kAllLobs) c.sample_stdevs[company][lob] = values[index_of(lob)];
    }

    ModelParams m1;
    m1.sigma_h = 0.099;
    m1.sigma_mo = 0.12;
    m1.rho_1 = 0.35;
    m1.sigma_ml = 0.050;
    m1.sigma_ml_overrides["Trygg-Hansa"] = 0.12;
    m1.beta_ia = 0.088;
    m1.beta_blp = 0.16;
    ModelParams m2 = m1;
    m2.sigma_h = 0.10;
    m2.sigma_mo = 0.096;
    m2.rho_1 = 0.64;
    m2.sigma_ml = 0.025;
    c.models["model1"] = m1;
    c.models["model2"] = m2;

    c.segmentation = SegmentationMap::defaults();
    c.regulator = RegulatorTable::defaults();
    return c;
}

void PipelineConfig::validate() const {
    if (m < 1) throw ConfigError(fmt::format("m must be positive, got {}", m));
    if (companies.size() != static_cast<std::size_t>(kMvnCompanies)) {
        throw ConfigError(fmt::format("companies must list exactly {} names for the joint model", kMvnCompanies));
    }
    if (!(spearman_level > 0 && spearman_level <= 1)) throw ConfigError("spearman.level must lie in (0, 1]");
    if (spearman_permutations == 0) throw ConfigError("spearman.permutations must be positive");
    if (monte_carlo.n_sims < 2) throw ConfigError("monte_carlo.n_sims must be at least 2");
    if (convolution.grid_points < 3 || !(convolution.max_tail_mass > 0) || !(convolution.min_width_sd > 0)) {
        throw ConfigError("convolution settings out of range");
    }
    for (const auto& [name, params] : models) params.validate();
    segmentation.validate();
    regulator.validate();
    for (const auto& [company, profile] : profiles) {
        for (Lob lob : kAllLobs) {
            const auto& l = profile[lob];
            if (!std::isfinite(l.premium) || !std::isfinite(l.r0) || !std::isfinite(l.p0)) {
                throw ConfigError(fmt::format("profile {}: non-finite value for {}", company, to_string(lob)));
            }
        }
    }
    for (const auto& [company, stdevs] : sample_stdevs) {
        for (const auto& [lob, s] : stdevs) {
            if (!(s >= 0)) throw ConfigError(fmt::format("sample stdev {}/{} must be non-negative", company, to_string(lob)));
        }
    }
}

PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
    }
    check_keys(j, "config",
               {"reports", "output_dir", "m", "threads", "horizons", "policy", "companies", "pooling", "levene",
                "spearman", "fit_cases", "profile_source", "profiles", "stdev_source", "sample_stdevs", "models",
                "segmentation", "regulator", "monte_carlo", "convolution"});
    PipelineConfig c = PipelineConfig::defaults();
    c.reports = resolve(c.reports.string(), base_dir);
    c.output_dir = resolve(c.output_dir.string(), base_dir);

    if (j.contains("reports")) c.reports = resolve(get<std::string>(j["reports"], "reports"), base_dir);
    if (j.contains("output_dir")) c.output_dir = resolve(get<std::string>(j["output_dir"], "output_dir"), base_dir);
    if (j.contains("m")) c.m = get<int>(j["m"], "m");
    if (j.contains("threads")) c.threads = get<unsigned>(j["threads"], "threads");
    if (j.contains("horizons")) {
        for (const auto& [key, value] : get<std::map<std::string, int>>(j["horizons"], "horizons")) {
            c.horizons.set(lob_from(key, "horizons"), value);
        }
    }
    if (j.contains("policy")) {
        const auto& p = j["policy"];
        check_keys(p, "policy", {"drop_first_accounting_years", "excluded_series", "excluded_accounting_years"});
        if (p.contains("drop_first_accounting_years")) {
            c.policy.drop_first_accounting_years = get<int>(p["drop_first_accounting_years"], "policy.drop_first_accounting_years");
        }
        if (p.contains("excluded_series")) {
            c.policy.excluded_series.clear();
            for (const auto& s : get<std::vector<std::string>>(p["excluded_series"], "policy.excluded_series")) {
                c.policy.excluded_series.insert(series_from(s, "policy.excluded_series"));
            }
        }
        if (p.contains("excluded_accounting_years")) {
            c.policy.excluded_accounting_years.clear();
            for (const auto& [key, years] :
                 get<std::map<std::string, std::vector<int>>>(p["excluded_accounting_years"], "policy.excluded_accounting_years")) {
                auto& set = c.policy.excluded_accounting_years[series_from(key, "policy.excluded_accounting_years")];
                set.insert(years.begin(), years.end());
            }
        }
    }
    if (j.contains("companies")) c.companies = get<std::vector<std::string>>(j["companies"], "companies");
    if (j.contains("pooling")) {
        c.pooling.clear();
        for (const auto& [key, list] : get<std::map<std::string, std::vector<std::string>>>(j["pooling"], "pooling")) {
            c.pooling[lob_from(key, "pooling")] = list;
        }
    }
    if (j.contains("levene")) {
        c.levene.clear();
        if (!j["levene"].is_array()) throw ConfigError("levene: expected an array");
        for (const auto& v : j["levene"]) {
            check_keys(v, "levene[]", {"label", "lob", "companies"});
            LeveneVariant lv;
            lv.lob = lob_from(get<std::string>(v.at("lob"), "levene[].lob"), "levene[].lob");
            lv.label = v.contains("label") ? get<std::string>(v["label"], "levene[].label") : std::string(to_string(lv.lob));
            lv.companies = get<std::vector<std::string>>(v.at("companies"), "levene[].companies");
            c.levene.push_back(std::move(lv));
        }
    }
    if (j.contains("spearman")) {
        const auto& s = j["spearman"];
        check_keys(s, "spearman", {"level", "permutations", "excluded_series"});
        if (s.contains("level")) c.spearman_level = get<double>(s["level"], "spearman.level");
        if (s.contains("permutations")) c.spearman_permutations = get<std::size_t>(s["permutations"], "spearman.permutations");
        if (s.contains("excluded_series")) {
            c.spearman_excluded.clear();
            for (const auto& e : get<std::vector<std::string>>(s["excluded_series"], "spearman.excluded_series")) {
                c.spearman_excluded.insert(series_from(e, "spearman.excluded_series"));
            }
        }
    }
    if (j.contains("fit_cases")) {
        c.fit_cases.clear();
        if (!j["fit_cases"].is_array()) throw ConfigError("fit_cases: expected an array");
        for (const auto& v : j["fit_cases"]) {
            check_keys(v, "fit_cases[]", {"label", "excluded"});
            FitCase fc;
            fc.label = get<std::string>(v.at("label"), "fit_cases[].label");
            if (v.contains("excluded")) {
                for (const auto& e : v["excluded"]) {
                    check_keys(e, "fit_cases[].excluded[]", {"company", "accounting_year"});
                    fc.excluded.push_back({get<std::string>(e.at("company"), "fit_cases[].excluded[].company"),
                                           get<int>(e.at("accounting_year"), "fit_cases[].excluded[].accounting_year")});
                }
            }
            c.fit_cases.push_back(std::move(fc));
        }
    }
    if (j.contains("profile_source")) {
        const auto s = get<std::string>(j["profile_source"], "profile_source");
        if (s == "config") c.profile_source = ProfileSource::config;
        else if (s == "reports") c.profile_source = ProfileSource::reports;
        else throw ConfigError(fmt::format("profile_source: expected 'config' or 'reports', got '{}'", s));
    }
    if (j.contains("profiles")) {
        c.profiles.clear();
        if (!j["profiles"].is_object()) throw ConfigError("profiles: expected an object");
        for (const auto& [company, rows] : j["profiles"].items()) {
            const std::string where = "profiles." + company;
            if (!rows.is_object()) throw ConfigError(where + ": expected an object");
            LiabilityProfile p;
            p.company = company;
            for (const auto& [lob, row] : rows.items()) {
                check_keys(row, where + "." + lob, {"V", "R0", "P0"});
                auto& l = p[lob_from(lob, where)];
                if (row.contains("V")) l.premium = get<double>(row["V"], where);
                if (row.contains("R0")) l.r0 = get<double>(row["R0"], where);
                if (row.contains("P0")) l.p0 = get<double>(row["P0"], where);
            }
            c.profiles[company] = p;
        }
    }
    if (j.contains("stdev_source")) {
        const auto s = get<std::string>(j["stdev_source"], "stdev_source");
        if (s == "config") c.stdev_source = StdevSource::config;
        else if (s == "panel") c.stdev_source = StdevSource::panel;
        else throw ConfigError(fmt::format("stdev_source: expected 'config' or 'panel', got '{}'", s));
    }
    if (j.contains("sample_stdevs")) {
        c.sample_stdevs.clear();
        for (const auto& [company, values] :
             get<std::map<std::string, std::map<std::string, double>>>(j["sample_stdevs"], "sample_stdevs")) {
            for (const auto& [lob, s] : values) c.sample_stdevs[company][lob_from(lob, "sample_stdevs")] = s;
        }
    }
    if (j.contains("models")) {
        if (!j["models"].is_object()) throw ConfigError("models: expected an object");
        for (const auto& [name, value] : j["models"].items()) {
            const auto it = c.models.find(name);
            c.models[name] = model_from(value, it == c.models.end() ? ModelParams{} : it->second, "models." + name);
        }
    }
    if (j.contains("segmentation")) {
        for (const auto& [lob, shares] :
             get<std::map<std::string, std::map<std::string, double>>>(j["segmentation"], "segmentation")) {
            auto& list = c.segmentation.shares[index_of(lob_from(lob, "segmentation"))];
            list.clear();
            for (const auto& [target, pi] : shares) list.emplace_back(sii_from(target, "segmentation"), pi);
            std::sort(list.begin(), list.end());
        }
    }
    if (j.contains("regulator")) {
        const auto& r = j["regulator"];
        check_keys(r, "regulator", {"sigma_prem", "sigma_res", "alpha", "rho_ME_IP", "nonlife_corr"});
        for (const char* key : {"sigma_prem", "sigma_res"}) {
            if (!r.contains(key)) continue;
            auto& target = std::string_view(key) == "sigma_prem" ? c.regulator.sigma_prem : c.regulator.sigma_res;
            for (const auto& [lob, s] : get<std::map<std::string, double>>(r[key], fmt::format("regulator.{}", key))) {
                target[index_of(sii_from(lob, "regulator"))] = s;
            }
        }
        if (r.contains("alpha")) c.regulator.alpha = get<double>(r["alpha"], "regulator.alpha");
        if (r.contains("rho_ME_IP")) c.regulator.rho_me_ip = get<double>(r["rho_ME_IP"], "regulator.rho_ME_IP");
        if (r.contains("nonlife_corr")) {
            for (const auto& [key, rho] : get<std::map<std::string, double>>(r["nonlife_corr"], "regulator.nonlife_corr")) {
                const auto slash = key.find('/');
                if (slash == std::string::npos) throw ConfigError(fmt::format("regulator.nonlife_corr: bad pair '{}'", key));
                const SiiLob a = sii_from(key.substr(0, slash), "regulator.nonlife_corr");
                const SiiLob b = sii_from(key.substr(slash + 1), "regulator.nonlife_corr");
                if (is_health(a) || is_health(b) || a == b) {
                    throw ConfigError(fmt::format("regulator.nonlife_corr: '{}' is not a pair of distinct non-life LoBs", key));
                }
                const auto i = index_of(a) - index_of(SiiLob::MVL);
                const auto k = index_of(b) - index_of(SiiLob::MVL);
                c.regulator.nonlife_corr[i][k] = rho;
                c.regulator.nonlife_corr[k][i] = rho;
            }
        }
    }
    if (j.contains("monte_carlo")) {
        const auto& mc = j["monte_carlo"];
        check_keys(mc, "monte_carlo", {"seed", "n_sims", "verify"});
        if (mc.contains("seed")) c.monte_carlo.seed = get<std::uint64_t>(mc["seed"], "monte_carlo.seed");
        if (mc.contains("n_sims")) c.monte_carlo.n_sims = get<std::size_t>(mc["n_sims"], "monte_carlo.n_sims");
        if (mc.contains("verify")) c.monte_carlo.verify = get<bool>(mc["verify"], "monte_carlo.verify");
    }
    if (j.contains("convolution")) {
        const auto& cv = j["convolution"];
        check_keys(cv, "convolution", {"grid_points", "min_width_sd", "max_tail_mass"});
        if (cv.contains("grid_points")) c.convolution.grid_points = get<std::size_t>(cv["grid_points"], "convolution.grid_points");
        if (cv.contains("min_width_sd")) c.convolution.min_width_sd = get<double>(cv["min_width_sd"], "convolution.min_width_sd");
        if (cv.contains("max_tail_mass")) c.convolution.max_tail_mass = get<double>(cv["max_tail_mass"], "convolution.max_tail_mass");
    }
    c.validate();
    return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.parent_path());
}

std::string config_to_json(const PipelineConfig& c) {
    ojson j;
    j["reports"] = c.reports.generic_string();
    j["output_dir"] = c.output_dir.generic_string();
    j["m"] = c.m;
    j["threads"] = c.threads;
    ojson horizons;
    for (Lob lob : kAllLobs) horizons[std::string(to_string(lob))] = c.horizons[lob];
    j["horizons"] = horizons;

    ojson policy;
    policy["drop_first_accounting_years"] = c.policy.drop_first_accounting_years;
    policy["excluded_series"] = ojson::array();
    for (const auto& s : c.policy.excluded_series) policy["excluded_series"].push_back(s.label());
    policy["excluded_accounting_years"] = ojson::object();
    for (const auto& [s, years] : c.policy.excluded_accounting_years) {
        policy["excluded_accounting_years"][s.label()] = std::vector<int>(years.begin(), years.end());
    }
    j["policy"] = policy;
    j["companies"] = c.companies;

    ojson pooling;
    for (const auto& [lob, list] : c.pooling) pooling[std::string(to_string(lob))] = list;
    j["pooling"] = pooling;
    j["levene"] = ojson::array();
    for (const auto& v : c.levene) {
        j["levene"].push_back({{"label", v.label}, {"lob", std::string(to_string(v.lob))}, {"companies", v.companies}});
    }
    ojson spearman;
    spearman["level"] = c.spearman_level;
    spearman["permutations"] = c.spearman_permutations;
    spearman["excluded_series"] = ojson::array();
    for (const auto& s : c.spearman_excluded) spearman["excluded_series"].push_back(s.label());
    j["spearman"] = spearman;
    j["fit_cases"] = ojson::array();
    for (const auto& fc : c.fit_cases) {
        ojson excluded = ojson::array();
        for (const auto& e : fc.excluded) excluded.push_back({{"company", e.company}, {"accounting_year", e.accounting_year}});
        j["fit_cases"].push_back({{"label", fc.label}, {"excluded", excluded}});
    }

    j["profile_source"] = c.profile_source == ProfileSource::config ? "config" : "reports";
    ojson profiles = ojson::object();
    for (const auto& [company, p] : c.profiles) {
        ojson rows;
        for (Lob lob : kAllLobs) rows[std::string(to_string(lob))] = {{"V", p[lob].premium}, {"R0", p[lob].r0}, {"P0", p[lob].p0}};
        profiles[company] = rows;
    }
    j["profiles"] = profiles;
    j["stdev_source"] = c.stdev_source == StdevSource::config ? "config" : "panel";
    ojson stdevs = ojson::object();
    for (const auto& [company, values] : c.sample_stdevs) {
        ojson row;
        for (const auto& [lob, s] : values) row[std::string(to_string(lob))] = s;
        stdevs[company] = row;
    }
    j["sample_stdevs"] = stdevs;
    ojson models = ojson::object();
    for (const auto& [name, m] : c.models) models[name] = model_to(m);
    j["models"] = models;

    ojson segmentation;
    for (Lob lob : kAllLobs) {
        ojson shares = ojson::object();
        for (const auto& [target, pi] : c.segmentation[lob]) shares[std::string(to_string(target))] = pi;
        segmentation[std::string(to_string(lob))] = shares;
    }
    j["segmentation"] = segmentation;
    ojson regulator;
    ojson prem, res;
    for (SiiLob lob : kAllSiiLobs) {
        prem[std::string(to_string(lob))] = c.regulator.sigma_prem[index_of(lob)];
        res[std::string(to_string(lob))] = c.regulator.sigma_res[index_of(lob)];
    }
    regulator["sigma_prem"] = prem;
    regulator["sigma_res"] = res;
    regulator["alpha"] = c.regulator.alpha;
    regulator["rho_ME_IP"] = c.regulator.rho_me_ip;
    ojson corr;
    for (std::size_t a = 0; a < kNonLifeLobs.size(); ++a) {
        for (std::size_t b = a + 1; b < kNonLifeLobs.size(); ++b) {
            corr[pair_key(kNonLifeLobs[a], kNonLifeLobs[b])] = c.regulator.nonlife_corr[a][b];
        }
    }
    regulator["nonlife_corr"] = corr;
    j["regulator"] = regulator;
    j["monte_carlo"] = {{"seed", c.monte_carlo.seed}, {"n_sims", c.monte_carlo.n_sims}, {"verify", c.monte_carlo.verify}};
    j["convolution"] = {{"grid_points", c.convolution.grid_points},
                        {"min_width_sd", c.convolution.min_width_sd},
                        {"max_tail_mass", c.convolution.max_tail_mass}};
    return j.dump(2) + "\n";
}

}  // namespace solvcap
