#include "solvcap/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "solvcap/distributions.hpp"
#include "solvcap/error.hpp"
#include "solvcap/parallel.hpp"

namespace solvcap {

double median(std::span<const double> sample) {
    if (sample.empty()) throw DomainError("median of an empty sample");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    return n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

LeveneResult levene_test(std::span<const std::vector<double>> groups, LeveneCenter center) {
    const std::size_t g = groups.size();
    if (g < 2) throw DomainError(fmt::format("levene_test needs at least 2 groups, got {}", g));
    const std::size_t n = groups.front().size();
    for (const auto& group : groups) {
        if (group.size() != n) {
            throw UsageError(fmt::format("levene_test requires equal group sizes ({} vs {})", group.size(), n));
        }
    }
    if (n < 2) throw DomainError("levene_test needs at least 2 observations per group");

    std::vector<std::vector<double>> z(g);
    std::vector<double> group_means(g);
    for (std::size_t i = 0; i < g; ++i) {
        const auto& u = groups[i];
        const double c = center == LeveneCenter::median
                             ? median(u)
                             : std::accumulate(u.begin(), u.end(), 0.0) / static_cast<double>(n);
        z[i].resize(n);
        std::transform(u.begin(), u.end(), z[i].begin(), [c](double x) { return std::abs(x - c); });
        group_means[i] = std::accumulate(z[i].begin(), z[i].end(), 0.0) / static_cast<double>(n);
    }
    const double grand_mean =
        std::accumulate(group_means.begin(), group_means.end(), 0.0) / static_cast<double>(g);

    double between = 0;
    double within = 0;
    for (std::size_t i = 0; i < g; ++i) {
        between += (group_means[i] - grand_mean) * (group_means[i] - grand_mean);
        for (double zij : z[i]) within += (zij - group_means[i]) * (zij - group_means[i]);
    }
    if (!(within > 0)) {
        throw DomainError("levene_test: absolute deviations are constant within every group; statistic is degenerate");
    }

    const double gd = static_cast<double>(g);
    const double nd = static_cast<double>(n);
    LeveneResult result;
    result.df1 = static_cast<int>(g - 1);
    result.df2 = static_cast<int>(g * (n - 1));
    result.w = gd * (nd - 1) / (gd - 1) * nd * between / within;
    result.p_value = f_sf(result.w, result.df1, result.df2);
    return result;
}

std::vector<double> average_ranks(std::span<const double> sample) {
    const std::size_t n = sample.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sample[a] < sample[b]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && sample[order[j + 1]] == sample[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
        i = j + 1;
    }
    return ranks;
}

CorrelationResult spearman_rho(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DomainError("spearman_rho: samples differ in length");
    if (x.size() < 2) throw DomainError("spearman_rho: need at least 2 observations");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double mean = (static_cast<double>(x.size()) + 1.0) / 2.0;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double dx = rx[i] - mean;
        const double dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0 || syy == 0) throw DomainError("spearman_rho: constant sample");
    return {std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0), x.size()};
}

double spearman_from_linear(double rho_linear) {
    if (!(rho_linear >= -1.0 && rho_linear <= 1.0)) {
        throw DomainError(fmt::format("spearman_from_linear: correlation {} outside [-1, 1]", rho_linear));
    }
    return 6.0 / M_PI * std::asin(rho_linear / 2.0);
}

double spearman_critical_value(int n, double level, std::size_t n_permutations, std::uint64_t seed,
                               unsigned threads) {
    if (n < 3) throw DomainError(fmt::format("spearman_critical_value: n = {} below 3", n));
    if (!(level > 0.0 && level <= 1.0)) {
        throw DomainError(fmt::format("spearman_critical_value: level {} outside (0, 1]", level));
    }
    if (n_permutations == 0) throw DomainError("spearman_critical_value: no permutations requested");

    // With integer D = sum of squared rank differences,
    // |rho| = |n(n^2-1) - 6D| / (n(n^2-1)); sampling the integer numerator
    // keeps ties between permutations exact.
    const std::int64_t nn = n;
    const std::int64_t denom = nn * (nn * nn - 1);
    constexpr std::size_t kBlock = 4096;
    const std::size_t blocks = (n_permutations + kBlock - 1) / kBlock;
    std::vector<std::int64_t> numerators(n_permutations);

    parallel_for(blocks, threads, [&](std::size_t block) {
        auto rng = substream(seed, block);
        std::vector<int> perm(static_cast<std::size_t>(n));
        const std::size_t begin = block * kBlock;
        const std::size_t end = std::min(begin + kBlock, n_permutations);
        for (std::size_t s = begin; s < end; ++s) {
            std::iota(perm.begin(), perm.end(), 0);
            for (std::size_t i = perm.size() - 1; i > 0; --i) {
                std::uniform_int_distribution<std::size_t> pick(0, i);
                std::swap(perm[i], perm[pick(rng)]);
            }
            std::int64_t d2 = 0;
            for (std::size_t i = 0; i < perm.size(); ++i) {
                const std::int64_t d = perm[i] - static_cast<std::int64_t>(i);
                d2 += d * d;
            }
            numerators[s] = std::abs(denom - 6 * d2);
        }
    });

    std::sort(numerators.begin(), numerators.end(), std::greater<>());
    const double allowed = level * static_cast<double>(n_permutations);
    double threshold = std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    while (i < numerators.size()) {
        std::size_t j = i;
        while (j < numerators.size() && numerators[j] == numerators[i]) ++j;
        // j draws have |rho| >= numerators[i] / denom.
        if (static_cast<double>(j) > allowed) break;
        threshold = static_cast<double>(numerators[i]) / static_cast<double>(denom);
        i = j;
    }
    if (i == numerators.size()) threshold = 0.0;
    return threshold;
}

}  // namespace solvcap
