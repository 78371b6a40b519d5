#include "solvcap/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include "solvcap/error.hpp"

namespace solvcap {

namespace {

double zero_mean_sigma(double sum_squares, std::size_t n, VarianceDivisor divisor) {
    const double d = divisor == VarianceDivisor::n ? static_cast<double>(n) : static_cast<double>(n - 1);
    return std::sqrt(sum_squares / d);
}

}  // namespace

NormalFit fit_zero_mean_normal(std::span<const double> sample, VarianceDivisor divisor) {
    if (sample.size() < 2) throw DomainError(fmt::format("zero-mean normal fit needs n >= 2, got {}", sample.size()));
    double ss = 0;
    for (double u : sample) {
        if (!std::isfinite(u)) throw DomainError("zero-mean normal fit: non-finite observation");
        ss += u * u;
    }
    if (ss == 0) throw DomainError("zero-mean normal fit: all observations are zero");
    return {zero_mean_sigma(ss, sample.size(), divisor), sample.size()};
}

NormalFit fit_pooled_normal(std::span<const std::vector<double>> samples, const LeveneResult* pooling_test,
                            Diagnostics* diagnostics, VarianceDivisor divisor) {
    if (samples.empty()) throw DomainError("pooled normal fit: no samples");
    if (pooling_test != nullptr && pooling_test->p_value < 0.05) {
        warn(diagnostics, "pooling_rejected",
             fmt::format("pooling samples whose variance-equality test has p = {:.4g}", pooling_test->p_value));
    }
    std::vector<double> pooled;
    for (const auto& s : samples) {
        (void)fit_zero_mean_normal(s, divisor);  // each sample must be non-degenerate
        pooled.insert(pooled.end(), s.begin(), s.end());
    }
    return fit_zero_mean_normal(pooled, divisor);
}

double gp_loglik(const GpParams& params, std::span<const double> sample) {
    if (!(params.beta > 0)) throw DomainError("gp_loglik: beta must be positive");
    const double n = static_cast<double>(sample.size());
    double ll = -n * std::log(params.beta);
    if (params.xi == 0) {
        for (double x : sample) ll -= x / params.beta;
        return ll;
    }
    for (double x : sample) {
        const double t = 1.0 + params.xi * x / params.beta;
        if (!(t > 0)) return -std::numeric_limits<double>::infinity();
        ll -= (1.0 + 1.0 / params.xi) * std::log(t);
    }
    return ll;
}

GpFit fit_gp(std::span<const double> sample, bool fix_xi_zero, Diagnostics* diagnostics) {
    const std::size_t n = sample.size();
    if (n < 2) throw DomainError(fmt::format("fit_gp needs at least 2 observations, got {}", n));
    for (double x : sample) {
        if (!(x > 0) || !std::isfinite(x)) throw DomainError(fmt::format("fit_gp: observation {} is not positive", x));
    }
    if (n < 5) warn(diagnostics, "small_sample", fmt::format("GP fit on only {} observations", n));

    const double nd = static_cast<double>(n);
    const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / nd;
    if (fix_xi_zero) {
        GpFit fit{{0.0, mean}, 0.0, n};
        fit.loglik = gp_loglik(fit.params, sample);
        return fit;
    }

    const double x_max = *std::max_element(sample.begin(), sample.end());
    const double exponential_ll = -nd * std::log(mean) - nd;

    // theta = (exp(s) - 1) / x_max sweeps (-1/x_max, inf) as s runs over R.
    auto theta_of = [&](double s) { return std::expm1(s) / x_max; };
    auto xi_of = [&](double theta) {
        double acc = 0;
        for (double x : sample) acc += std::log1p(theta * x);
        return acc / nd;
    };
    auto profile = [&](double s) {
        const double theta = theta_of(s);
        if (std::abs(theta) * x_max < 1e-12) return exponential_ll;
        const double xi = xi_of(theta);
        if (xi < -1.0 || !std::isfinite(xi)) return -std::numeric_limits<double>::infinity();
        return -nd * std::log(xi / theta) - nd * xi - nd;
    };

    constexpr int kGrid = 601;
    constexpr double kLow = -30.0;
    constexpr double kHigh = 16.0;
    const double step = (kHigh - kLow) / (kGrid - 1);
    int best = -1;
    double best_ll = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGrid; ++i) {
        const double ll = profile(kLow + step * i);
        if (ll > best_ll) {
            best_ll = ll;
            best = i;
        }
    }
    if (best < 0) throw EstimationError("fit_gp: profile likelihood is not finite anywhere");

    const double lo = kLow + step * std::max(best - 1, 0);
    const double hi = kLow + step * std::min(best + 1, kGrid - 1);
    const auto [s_opt, neg_ll] = boost::math::tools::brent_find_minima(
        [&](double s) { return -profile(s); }, lo, hi, std::numeric_limits<double>::digits / 2);

    GpFit fit;
    fit.n_obs = n;
    const double theta = theta_of(s_opt);
    if (-neg_ll < best_ll || std::abs(theta) * x_max < 1e-12) {
        const double s_best = kLow + step * best;
        const double t = theta_of(s_best);
        if (std::abs(t) * x_max < 1e-12) {
            fit.params = {0.0, mean};
        } else {
            const double xi = xi_of(t);
            fit.params = {xi, xi / t};
        }
    } else {
        const double xi = xi_of(theta);
        fit.params = {xi, xi / theta};
    }
    fit.loglik = gp_loglik(fit.params, sample);
    return fit;
}

std::vector<double> positive_values(std::span<const std::vector<double>> samples) {
    std::vector<double> out;
    for (const auto& s : samples) {
        std::copy_if(s.begin(), s.end(), std::back_inserter(out), [](double x) { return x > 0; });
    }
    return out;
}

}  // namespace solvcap
