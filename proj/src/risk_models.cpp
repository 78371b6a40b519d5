#include "solvcap/risk_models.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numeric>

#include <fftw3.h>
#include <fmt/format.h>

#include "solvcap/distributions.hpp"
#include "solvcap/error.hpp"
#include "solvcap/parallel.hpp"

namespace solvcap {

double LiabilityProfile::total_y0() const noexcept {
    double total = 0;
    for (const auto& l : lobs) total += l.y0();
    return total;
}

LiabilityProfile LiabilityProfile::scaled(double factor) const {
    LiabilityProfile out = *this;
    for (auto& l : out.lobs) {
        l.premium *= factor;
        l.r0 *= factor;
        l.p0 *= factor;
    }
    return out;
}

LiabilityProfile aggregate_profiles(const std::vector<LiabilityProfile>& profiles, const std::string& label) {
    LiabilityProfile total;
    total.company = label;
    for (const auto& p : profiles) {
        for (Lob lob : kAllLobs) {
            total[lob].premium += p[lob].premium;
            total[lob].r0 += p[lob].r0;
            total[lob].p0 += p[lob].p0;
        }
    }
    return total;
}

double scr_simple_internal(const LiabilityProfile& profile, const std::map<Lob, double>& stdevs, double level) {
    double variance = 0;
    for (Lob lob : kAllLobs) {
        const double y0 = profile[lob].y0();
        if (y0 == 0) continue;
        const auto it = stdevs.find(lob);
        if (it == stdevs.end()) {
            throw ConfigError(fmt::format("{}: no standard deviation for LoB {}", profile.company, to_string(lob)));
        }
        if (!(it->second >= 0)) {
            throw ConfigError(fmt::format("{}: negative standard deviation for LoB {}", profile.company, to_string(lob)));
        }
        variance += (y0 * it->second) * (y0 * it->second);
    }
    return normal_quantile(level) * std::sqrt(variance);
}

double ModelParams::sigma_ml_for(const std::string& company) const {
    const auto it = sigma_ml_overrides.find(company);
    return it == sigma_ml_overrides.end() ? sigma_ml : it->second;
}

void ModelParams::validate() const {
    auto nonneg = [](double v, std::string_view name) {
        if (!(v >= 0) || !std::isfinite(v)) throw ConfigError(fmt::format("model parameter {} must be >= 0, got {}", name, v));
    };
    nonneg(sigma_h, "sigma_H");
    nonneg(sigma_mo, "sigma_MO");
    nonneg(sigma_ml, "sigma_ML");
    for (const auto& [company, s] : sigma_ml_overrides) nonneg(s, "sigma_ML override for " + company);
    if (!(beta_ia > 0) || !(beta_blp > 0)) throw ConfigError("model parameters beta_IA and beta_BLP must be positive");
    if (!std::isfinite(xi_ia) || !std::isfinite(xi_blp)) throw ConfigError("GP shapes must be finite");
    if (!(std::abs(rho_1) < 1)) throw ConfigError(fmt::format("rho_1 = {} must lie in (-1, 1)", rho_1));
}

MixedLossModel build_mixed_model(const LiabilityProfile& profile, const ModelParams& params,
                                 Diagnostics* diagnostics) {
    params.validate();
    const double h = profile[Lob::H].y0() * params.sigma_h;
    const double mo = profile[Lob::MO].y0() * params.sigma_mo;
    const double ml = profile[Lob::ML].y0() * params.sigma_ml_for(profile.company);
    const double variance = h * h + mo * mo + 2.0 * h * mo * params.rho_1 + ml * ml;
    if (variance < -1e-12 * (h * h + mo * mo + ml * ml)) {
        throw Error("internal: negative variance in the Gaussian component");
    }
    MixedLossModel model;
    model.sigma_normal = std::sqrt(std::max(variance, 0.0));
    for (const auto& [lob, beta, xi] : {std::tuple{Lob::IA, params.beta_ia, params.xi_ia},
                                        std::tuple{Lob::BLP, params.beta_blp, params.xi_blp}}) {
        const double scale = std::abs(profile[lob].y0()) * beta;
        if (scale == 0) {
            warn(diagnostics, "degenerate_component",
                 fmt::format("{}: {} has zero liability; its GP component is dropped", profile.company, to_string(lob)));
            continue;
        }
        model.components.push_back({lob, scale, xi});
    }
    return model;
}

namespace {

void check_gp(double beta, double xi) {
    if (!(beta > 0) || !std::isfinite(beta)) throw DomainError(fmt::format("GP scale {} must be positive", beta));
    if (!std::isfinite(xi)) throw DomainError("GP shape must be finite");
}

// P(Z > x) for Z ~ GP(xi, beta), x >= 0.
double gp_sf(double x, double beta, double xi) {
    if (x <= 0) return 1.0;
    if (xi == 0) return std::exp(-x / beta);
    const double t = 1.0 + xi * x / beta;
    if (t <= 0) return 0.0;
    return std::exp(-std::log(t) / xi);
}

// P(X > x) for X = B Z with a fair sign B.
double symmetric_gp_sf(double x, double beta, double xi) {
    return x >= 0 ? 0.5 * gp_sf(x, beta, xi) : 1.0 - 0.5 * gp_sf(-x, beta, xi);
}

double normal_sf_scaled(double x, double sigma) { return 0.5 * std::erfc(x / (sigma * std::sqrt(2.0))); }

struct Component {
    bool gaussian = false;
    double scale = 0;
    double xi = 0;

    double sf(double x) const { return gaussian ? normal_sf_scaled(x, scale) : symmetric_gp_sf(x, scale, xi); }
    double variance() const {
        if (gaussian) return scale * scale;
        const double sd = symmetric_gp_stddev(scale, xi);
        return sd * sd;
    }
    // Point beyond which each tail holds `tail` probability.
    double tail_point(double tail) const {
        if (gaussian) return -normal_quantile(tail) * scale;
        return symmetric_gp_quantile(scale, xi, 1.0 - tail);
    }
    // P(a < X <= b) computed on the side that avoids cancellation.
    double mass(double a, double b) const {
        if (a >= 0) return sf(a) - sf(b);
        if (b <= 0) return sf(-b) - sf(-a);
        return 1.0 - sf(b) - sf(-a);
    }
};

std::vector<Component> active_components(const MixedLossModel& model) {
    if (!(model.sigma_normal >= 0) || !std::isfinite(model.sigma_normal)) {
        throw DomainError("mixed model: Gaussian standard deviation must be finite and non-negative");
    }
    std::vector<Component> out;
    if (model.sigma_normal > 0) out.push_back({true, model.sigma_normal, 0});
    for (const auto& c : model.components) {
        if (c.scale == 0) continue;
        check_gp(c.scale, c.xi);
        out.push_back({false, c.scale, c.xi});
    }
    return out;
}

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

double convolution_quantile(const std::vector<Component>& parts, double p, const ConvolutionSettings& settings) {
    const std::size_t count = parts.size();
    const double per_tail = settings.max_tail_mass / (2.0 * static_cast<double>(count));
    double variance = 0;
    double half_width = 0;
    for (const auto& c : parts) {
        variance += c.variance();
        half_width = std::max(half_width, c.tail_point(per_tail));
    }
    if (std::isfinite(variance)) half_width = std::max(half_width, 0.5 * settings.min_width_sd * std::sqrt(variance));

    double lost = 0;
    for (const auto& c : parts) lost += 2.0 * c.sf(half_width);
    if (!std::isfinite(half_width) || lost > settings.max_tail_mass) {
        throw ResolutionError(fmt::format("convolution grid [-{0}, {0}] leaves tail mass {1:.3g} > {2:.3g}",
                                          half_width, lost, settings.max_tail_mass));
    }

    const std::size_t n = std::max<std::size_t>(settings.grid_points, 3) | 1;  // odd: a cell centred on 0
    const double h = 2.0 * half_width / static_cast<double>(n);
    const double mid = static_cast<double>(n - 1) / 2.0;
    const std::size_t out_len = count * (n - 1) + 1;
    std::size_t fft_len = 1;
    while (fft_len < out_len) fft_len <<= 1;
    const std::size_t spec_len = fft_len / 2 + 1;

    auto* real = fftw_alloc_real(fft_len);
    auto* spec = fftw_alloc_complex(spec_len);
    std::vector<std::complex<double>> product(spec_len, {1.0, 0.0});
    fftw_plan forward;
    fftw_plan backward;
    {
        std::lock_guard lock(fftw_planner_mutex());
        forward = fftw_plan_dft_r2c_1d(static_cast<int>(fft_len), real, spec, FFTW_ESTIMATE);
        backward = fftw_plan_dft_c2r_1d(static_cast<int>(fft_len), spec, real, FFTW_ESTIMATE);
    }
    for (const auto& c : parts) {
        std::fill(real, real + fft_len, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            const double centre = (static_cast<double>(k) - mid) * h;
            real[k] = c.mass(centre - 0.5 * h, centre + 0.5 * h);
        }
        fftw_execute(forward);
        for (std::size_t k = 0; k < spec_len; ++k) product[k] *= std::complex<double>(spec[k][0], spec[k][1]);
    }
    for (std::size_t k = 0; k < spec_len; ++k) {
        spec[k][0] = product[k].real();
        spec[k][1] = product[k].imag();
    }
    fftw_execute(backward);
    std::vector<double> mass(real, real + out_len);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
    }
    fftw_free(real);
    fftw_free(spec);

    const double norm = 1.0 / static_cast<double>(fft_len);
    const double out_mid = static_cast<double>(out_len - 1) / 2.0;
    // Start from the probability that fell off the left edge of the grid.
    double cumulative = 0.5 * lost;
    double previous_edge = (-out_mid - 0.5) * h;
    double previous_cdf = cumulative;
    for (std::size_t j = 0; j < out_len; ++j) {
        cumulative += std::max(mass[j] * norm, 0.0);
        const double edge = (static_cast<double>(j) - out_mid + 0.5) * h;
        if (cumulative >= p) {
            const double span = cumulative - previous_cdf;
            const double frac = span > 0 ? (p - previous_cdf) / span : 1.0;
            return previous_edge + frac * (edge - previous_edge);
        }
        previous_edge = edge;
        previous_cdf = cumulative;
    }
    throw ResolutionError(fmt::format("quantile {} lies beyond the convolution grid", p));
}

QuantileResult monte_carlo_quantile(const std::vector<Component>& parts, double p, const MonteCarloSettings& settings,
                                    Diagnostics* diagnostics) {
    if (settings.n_sims < 2) throw DomainError("Monte Carlo quantile needs at least 2 simulations");
    if (settings.n_sims < 10'000) {
        warn(diagnostics, "few_simulations", fmt::format("only {} Monte Carlo simulations", settings.n_sims));
    }
    const std::size_t block = std::max<std::size_t>(settings.block_size, 1);
    const std::size_t blocks = (settings.n_sims + block - 1) / block;
    std::vector<double> draws(settings.n_sims);
    parallel_for(blocks, settings.threads, [&](std::size_t b) {
        auto rng = substream(settings.seed, b);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        const std::size_t begin = b * block;
        const std::size_t end = std::min(begin + block, settings.n_sims);
        for (std::size_t i = begin; i < end; ++i) {
            double x = 0;
            for (const auto& c : parts) {
                if (c.gaussian) {
                    x += c.scale * normal(rng);
                    continue;
                }
                const double tail = 1.0 - uniform(rng);  // in (0, 1]
                const double z = c.xi == 0 ? -c.scale * std::log(tail) : c.scale / c.xi * (std::pow(tail, -c.xi) - 1.0);
                x += uniform(rng) < 0.5 ? -z : z;
            }
            draws[i] = x;
        }
    });
    std::sort(draws.begin(), draws.end());
    const double n = static_cast<double>(draws.size());
    auto order_stat = [&](double rank) {
        const auto idx = static_cast<std::size_t>(std::clamp(std::ceil(rank), 1.0, n)) - 1;
        return draws[idx];
    };
    QuantileResult r;
    r.engine = QuantileEngine::monte_carlo;
    r.value = order_stat(n * p);
    // Distribution-free interval from binomial order statistics.
    const double z = normal_quantile(0.975);
    const double spread = z * std::sqrt(n * p * (1.0 - p));
    r.std_error = (order_stat(n * p + spread) - order_stat(n * p - spread)) / (2.0 * z);
    return r;
}

}  // namespace

double symmetric_gp_quantile(double beta, double xi, double p) {
    check_gp(beta, xi);
    if (!(p > 0.5 && p < 1.0)) throw DomainError(fmt::format("symmetric GP quantile needs p in (0.5, 1), got {}", p));
    const double tail = 2.0 * (1.0 - p);
    if (xi == 0) return -beta * std::log(tail);
    return beta / xi * (std::pow(tail, -xi) - 1.0);
}

double symmetric_gp_cdf(double x, double beta, double xi) {
    check_gp(beta, xi);
    return 1.0 - symmetric_gp_sf(x, beta, xi);
}

double symmetric_gp_stddev(double beta, double xi) {
    check_gp(beta, xi);
    if (xi >= 0.5) return std::numeric_limits<double>::infinity();
    return beta * std::sqrt(2.0 / ((1.0 - xi) * (1.0 - 2.0 * xi)));
}

QuantileResult quantile_total_loss(const MixedLossModel& model, double p, QuantileEngine engine,
                                   const QuantileSettings& settings, Diagnostics* diagnostics) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError(fmt::format("quantile level {} outside (0, 1)", p));
    const auto parts = active_components(model);
    QuantileResult r;
    r.engine = engine;
    if (engine == QuantileEngine::monte_carlo) {
        if (parts.empty()) return r;
        return monte_carlo_quantile(parts, p, settings.monte_carlo, diagnostics);
    }
    if (parts.empty()) return r;
    if (parts.size() == 1 && parts.front().gaussian) {
        r.value = normal_quantile(p) * parts.front().scale;
    } else if (parts.size() == 1 && p > 0.5) {
        r.value = symmetric_gp_quantile(parts.front().scale, parts.front().xi, p);
    } else {
        r.value = convolution_quantile(parts, p, settings.convolution);
    }
    return r;
}

double scr_mixed_model(const LiabilityProfile& profile, const ModelParams& params, const ConvolutionSettings& settings,
                       Diagnostics* diagnostics) {
    QuantileSettings qs;
    qs.convolution = settings;
    return quantile_total_loss(build_mixed_model(profile, params, diagnostics), kScrLevel, QuantileEngine::convolution,
                               qs, diagnostics)
        .value;
}

std::vector<ModelSigmaRow> model_sigma_table(const ModelParams& params) {
    params.validate();
    const double z = normal_quantile(kScrLevel);
    auto normal_row = [&](std::string label, double sigma) { return ModelSigmaRow{std::move(label), sigma, z, z * sigma}; };
    auto gp_row = [&](std::string label, double beta, double xi) {
        const double sigma = symmetric_gp_stddev(beta, xi);
        const double q = symmetric_gp_quantile(beta, xi, kScrLevel);
        return ModelSigmaRow{std::move(label), sigma, q / sigma, q};
    };
    std::vector<ModelSigmaRow> rows;
    rows.push_back(gp_row("IA", params.beta_ia, params.xi_ia));
    rows.push_back(normal_row("H", params.sigma_h));
    rows.push_back(gp_row("BLP", params.beta_blp, params.xi_blp));
    rows.push_back(normal_row("ML", params.sigma_ml));
    for (const auto& [company, sigma] : params.sigma_ml_overrides) rows.push_back(normal_row("ML:" + company, sigma));
    rows.push_back(normal_row("MO", params.sigma_mo));
    return rows;
}

}  // namespace solvcap
