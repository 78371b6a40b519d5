#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace solvcap {

enum class LeveneCenter { median, mean };

struct LeveneResult {
    double w = 0;
    int df1 = 0;  // g - 1
    int df2 = 0;  // g (n - 1)
    double p_value = 1;
};

// Test for equality of variances across g groups of a common size n, using
// absolute deviations from the group centers (median by default, which is
// the Brown-Forsythe form). p_value = P(F_{df1,df2} > W).
LeveneResult levene_test(std::span<const std::vector<double>> groups,
                         LeveneCenter center = LeveneCenter::median);

// Even-length samples average the two central order statistics.
double median(std::span<const double> sample);

// Ranks 1..n, tied values sharing their average rank.
std::vector<double> average_ranks(std::span<const double> sample);

struct CorrelationResult {
    double rho = 0;
    std::size_t n_obs = 0;
};

CorrelationResult spearman_rho(std::span<const double> x, std::span<const double> y);

// Spearman's rho of a bivariate normal with linear correlation rho_linear.
double spearman_from_linear(double rho_linear);

inline constexpr std::size_t kDefaultPermutations = 200'000;
inline constexpr std::uint64_t kDefaultSeed = 20140601;

// Monte Carlo critical value of |rho| under independence: the smallest t
// with P(|rho| >= t) <= level, estimated from random permutations of n
// ranks. Deterministic in (n, n_permutations, seed) for any thread count.
double spearman_critical_value(int n, double level,
                               std::size_t n_permutations = kDefaultPermutations,
                               std::uint64_t seed = kDefaultSeed, unsigned threads = 1);

}  // namespace solvcap
