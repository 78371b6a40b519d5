#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "solvcap/diagnostics.hpp"
#include "solvcap/hypothesis.hpp"

namespace solvcap {

// Divisor for the zero-mean variance estimate. `n` is the maximum likelihood
// estimate and the default.
enum class VarianceDivisor { n, n_minus_one };

struct NormalFit {
    double sigma = 0;
    std::size_t n_obs = 0;
};

NormalFit fit_zero_mean_normal(std::span<const double> sample,
                               VarianceDivisor divisor = VarianceDivisor::n);

// Zero-mean fit of the concatenated samples. Warns when `pooling_test` is
// supplied and rejects equal variances at the 5% level.
NormalFit fit_pooled_normal(std::span<const std::vector<double>> samples,
                            const LeveneResult* pooling_test = nullptr,
                            Diagnostics* diagnostics = nullptr,
                            VarianceDivisor divisor = VarianceDivisor::n);

// Generalized Pareto law with shape xi and scale beta:
// F(x) = 1 - (1 + xi x / beta)^(-1/xi), or 1 - exp(-x / beta) for xi = 0.
struct GpParams {
    double xi = 0;
    double beta = 1;
};

struct GpFit {
    GpParams params;
    double loglik = 0;
    std::size_t n_obs = 0;
};

double gp_loglik(const GpParams& params, std::span<const double> sample);

// Maximum likelihood fit to a sample of positive values. With fix_xi_zero the
// exponential MLE (sample mean) is returned. Otherwise the likelihood is
// profiled over theta = xi / beta, for which xi has the closed form
// mean(log(1 + theta x)); the search keeps xi >= -1 and honours the support.
GpFit fit_gp(std::span<const double> sample, bool fix_xi_zero,
             Diagnostics* diagnostics = nullptr);

// Strictly positive entries of the concatenated samples.
std::vector<double> positive_values(std::span<const std::vector<double>> samples);

}  // namespace solvcap
