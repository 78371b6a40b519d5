#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include <Eigen/Core>

namespace solvcap {

// Joint zero-mean normal model for the Home and Motor Other losses of four
// companies. Observation layout: H for companies 0..3, then MO for 0..3.
inline constexpr int kMvnCompanies = 4;
inline constexpr int kMvnDim = 2 * kMvnCompanies;

using Observation8 = std::array<double, kMvnDim>;
using Matrix8 = Eigen::Matrix<double, kMvnDim, kMvnDim>;

struct StructuredCovParams {
    double sigma_h = 0;
    double sigma_mo = 0;
    double rho_h = 0;   // H of one company with H of another
    double rho_mo = 0;  // MO of one company with MO of another
    double rho_1 = 0;   // H and MO of the same company
    double rho_2 = 0;   // H of one company with MO of another

    std::array<double, 6> as_array() const {
        return {sigma_h, sigma_mo, rho_h, rho_mo, rho_1, rho_2};
    }
    static StructuredCovParams from_array(const std::array<double, 6>& v) {
        return {v[0], v[1], v[2], v[3], v[4], v[5]};
    }
};

// Block covariance with equicorrelated 4x4 diagonal blocks and a cross block
// holding rho_1 on the diagonal and rho_2 elsewhere. Throws DomainError when
// a parameter is out of range or the Cholesky factorization fails.
Matrix8 assemble_sigma(const StructuredCovParams& params);

double loglik_structured(const StructuredCovParams& params, std::span<const Observation8> data);

// Analytic gradient of loglik_structured with respect to
// (sigma_h, sigma_mo, rho_h, rho_mo, rho_1, rho_2).
std::array<double, 6> loglik_structured_gradient(const StructuredCovParams& params,
                                                 std::span<const Observation8> data);

struct MvnConstraints {
    bool rho1_equals_rho2 = false;
    bool rho1_zero = false;

    int free_parameters() const noexcept;
    bool operator==(const MvnConstraints&) const = default;
};

struct MvnFitOptions {
    int n_starts = 8;
    // Start points appended after the built-in ones (already constrained
    // values are overwritten to satisfy the constraints).
    std::span<const StructuredCovParams> extra_starts{};
    double relative_tolerance = 1e-10;
    int max_iterations = 1000;
};

struct StructuredFit {
    StructuredCovParams params;
    double loglik = 0;
    MvnConstraints constraints;
    std::size_t n_obs = 0;
    std::uint64_t data_fingerprint = 0;
    int starts_tried = 0;
    int starts_converged = 0;
    int iterations = 0;          // of the winning start
    double gradient_norm = 0;    // max |d loglik / d theta| / n at the optimum
};

// Multi-start quasi-Newton maximum likelihood. Throws EstimationError when no
// start converges and DomainError for fewer than 3 observations.
StructuredFit fit_structured_mvn(std::span<const Observation8> data, MvnConstraints constraints,
                                 const MvnFitOptions& options = {});

struct LrtResult {
    double d = 0;
    double p_value = 1;
    double loglik_full = 0;
    double loglik_reduced = 0;
    int df = 1;
    // D fell below zero by more than the optimizer tolerance; the full model
    // should be refitted from the reduced optimum.
    bool needs_refit = false;
};

LrtResult lr_test(double loglik_full, double loglik_reduced, int df = 1);

// Requires `reduced` to be a one-parameter restriction of `full` fitted to
// the same data; throws UsageError otherwise.
LrtResult lr_test(const StructuredFit& full, const StructuredFit& reduced);

}  // namespace solvcap
