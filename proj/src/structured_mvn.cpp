#include "solvcap/structured_mvn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Cholesky>
#include <fmt/format.h>

#include "optimize.hpp"
#include "solvcap/distributions.hpp"
#include "solvcap/error.hpp"
#include "solvcap/parallel.hpp"

namespace solvcap {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kEquicorrLower = -1.0 / (kMvnCompanies - 1);

bool is_h(int i) { return i < kMvnCompanies; }
int company(int i) { return i % kMvnCompanies; }

double entry(const StructuredCovParams& p, int i, int j) {
    const double si = is_h(i) ? p.sigma_h : p.sigma_mo;
    const double sj = is_h(j) ? p.sigma_h : p.sigma_mo;
    if (is_h(i) == is_h(j)) {
        if (i == j) return si * si;
        return si * sj * (is_h(i) ? p.rho_h : p.rho_mo);
    }
    return si * sj * (company(i) == company(j) ? p.rho_1 : p.rho_2);
}

// d entry(i, j) / d parameter k, k indexing as_array().
double entry_derivative(const StructuredCovParams& p, int k, int i, int j) {
    const bool hi = is_h(i);
    const bool hj = is_h(j);
    if (hi == hj) {
        const double s = hi ? p.sigma_h : p.sigma_mo;
        const double rho = i == j ? 1.0 : (hi ? p.rho_h : p.rho_mo);
        if ((k == 0 && hi) || (k == 1 && !hi)) return 2.0 * s * rho;
        if (i != j && ((k == 2 && hi) || (k == 3 && !hi))) return s * s;
        return 0.0;
    }
    const bool same = company(i) == company(j);
    const double rho = same ? p.rho_1 : p.rho_2;
    if (k == 0) return p.sigma_mo * rho;
    if (k == 1) return p.sigma_h * rho;
    if ((k == 4 && same) || (k == 5 && !same)) return p.sigma_h * p.sigma_mo;
    return 0.0;
}

Matrix8 build(const StructuredCovParams& p) {
    Matrix8 m;
    for (int i = 0; i < kMvnDim; ++i) {
        for (int j = 0; j < kMvnDim; ++j) m(i, j) = entry(p, i, j);
    }
    return m;
}

// Column at which the Cholesky recursion meets a non-positive pivot, if any.
std::optional<int> cholesky_failure(const Matrix8& a) {
    Matrix8 l = Matrix8::Zero();
    for (int j = 0; j < kMvnDim; ++j) {
        double d = a(j, j);
        for (int t = 0; t < j; ++t) d -= l(j, t) * l(j, t);
        if (!(d > 1e-14 * a(j, j))) return j;
        l(j, j) = std::sqrt(d);
        for (int i = j + 1; i < kMvnDim; ++i) {
            double v = a(i, j);
            for (int t = 0; t < j; ++t) v -= l(i, t) * l(j, t);
            l(i, j) = v / l(j, j);
        }
    }
    return std::nullopt;
}

void check_ranges(const StructuredCovParams& p) {
    auto bad = [](double v) { return !std::isfinite(v); };
    if (bad(p.sigma_h) || bad(p.sigma_mo) || !(p.sigma_h > 0) || !(p.sigma_mo > 0)) {
        throw DomainError(fmt::format("structured covariance: standard deviations ({}, {}) must be positive",
                                      p.sigma_h, p.sigma_mo));
    }
    for (double rho : {p.rho_h, p.rho_mo, p.rho_1, p.rho_2}) {
        if (bad(rho) || rho < -1.0 || rho > 1.0) {
            throw DomainError(fmt::format("structured covariance: correlation {} outside [-1, 1]", rho));
        }
    }
}

struct SufficientStats {
    Matrix8 scatter = Matrix8::Zero();  // sum of x x^T
    std::size_t n = 0;
};

SufficientStats summarize(std::span<const Observation8> data) {
    SufficientStats s;
    s.n = data.size();
    for (const auto& obs : data) {
        for (int i = 0; i < kMvnDim; ++i) {
            if (!std::isfinite(obs[i])) throw DomainError("structured MVN: non-finite observation entry");
            for (int j = 0; j < kMvnDim; ++j) s.scatter(i, j) += obs[i] * obs[j];
        }
    }
    return s;
}

// Log-likelihood and optional natural-parameter gradient; nullopt when the
// covariance is not positive definite.
std::optional<double> evaluate(const StructuredCovParams& p, const SufficientStats& stats,
                               std::array<double, 6>* gradient) {
    const Matrix8 sigma = build(p);
    if (cholesky_failure(sigma)) return std::nullopt;
    const Eigen::LLT<Matrix8> llt(sigma);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const Matrix8 inv = llt.solve(Matrix8::Identity());
    const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    const double n = static_cast<double>(stats.n);
    const double ll = -0.5 * n * (kMvnDim * kLog2Pi + log_det) - 0.5 * (inv.cwiseProduct(stats.scatter)).sum();
    if (gradient != nullptr) {
        const Matrix8 g = inv * stats.scatter * inv - n * inv;
        for (int k = 0; k < 6; ++k) {
            double acc = 0;
            for (int i = 0; i < kMvnDim; ++i) {
                for (int j = 0; j < kMvnDim; ++j) acc += g(i, j) * entry_derivative(p, k, i, j);
            }
            (*gradient)[k] = 0.5 * acc;
        }
    }
    return ll;
}

std::uint64_t fingerprint(std::span<const Observation8> data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& obs : data) {
        for (double v : obs) {
            std::uint64_t bits;
            std::memcpy(&bits, &v, sizeof bits);
            for (int b = 0; b < 8; ++b) {
                h ^= (bits >> (8 * b)) & 0xffU;
                h *= 0x100000001b3ULL;
            }
        }
    }
    return h;
}

// Unconstrained coordinates: log sigmas, scaled logits for the intra-LoB
// equicorrelations, atanh for the cross-LoB correlations.
class Parameterization {
public:
    explicit Parameterization(MvnConstraints c) : c_(c) {}

    int size() const { return c_.free_parameters(); }

    StructuredCovParams constrain(StructuredCovParams p) const {
        if (c_.rho1_zero) p.rho_1 = 0;
        if (c_.rho1_equals_rho2) p.rho_2 = p.rho_1;
        return p;
    }

    Eigen::VectorXd to_free(const StructuredCovParams& p) const {
        Eigen::VectorXd u(size());
        u[0] = std::log(p.sigma_h);
        u[1] = std::log(p.sigma_mo);
        u[2] = logit_equi(p.rho_h);
        u[3] = logit_equi(p.rho_mo);
        int idx = 4;
        if (!c_.rho1_zero) u[idx++] = std::atanh(p.rho_1);
        if (!c_.rho1_equals_rho2) u[idx++] = std::atanh(p.rho_2);
        return u;
    }

    StructuredCovParams from_free(const Eigen::VectorXd& u) const {
        StructuredCovParams p;
        p.sigma_h = std::exp(u[0]);
        p.sigma_mo = std::exp(u[1]);
        p.rho_h = expit_equi(u[2]);
        p.rho_mo = expit_equi(u[3]);
        int idx = 4;
        if (!c_.rho1_zero) p.rho_1 = std::tanh(u[idx++]);
        if (!c_.rho1_equals_rho2) p.rho_2 = std::tanh(u[idx++]);
        return constrain(p);
    }

    // Chain rule from the natural gradient to the free coordinates.
    Eigen::VectorXd free_gradient(const Eigen::VectorXd& u, const std::array<double, 6>& g) const {
        const StructuredCovParams p = from_free(u);
        Eigen::VectorXd out(size());
        out[0] = g[0] * p.sigma_h;
        out[1] = g[1] * p.sigma_mo;
        out[2] = g[2] * equi_slope(u[2]);
        out[3] = g[3] * equi_slope(u[3]);
        int idx = 4;
        if (!c_.rho1_zero) {
            const double shared = c_.rho1_equals_rho2 ? g[4] + g[5] : g[4];
            out[idx] = shared * (1.0 - p.rho_1 * p.rho_1);
            ++idx;
        }
        if (!c_.rho1_equals_rho2) {
            out[idx] = g[5] * (1.0 - p.rho_2 * p.rho_2);
        }
        return out;
    }

    // Gradient along the free natural parameters (sigma, rho), for reporting.
    std::vector<double> natural_free_gradient(const std::array<double, 6>& g) const {
        std::vector<double> out{g[0], g[1], g[2], g[3]};
        if (!c_.rho1_zero) out.push_back(c_.rho1_equals_rho2 ? g[4] + g[5] : g[4]);
        if (!c_.rho1_equals_rho2) out.push_back(g[5]);
        return out;
    }

private:
    static constexpr double kSpan = 1.0 - kEquicorrLower;
    static double logit_equi(double rho) {
        const double t = (rho - kEquicorrLower) / kSpan;
        return std::log(t / (1.0 - t));
    }
    static double expit_equi(double u) { return kEquicorrLower + kSpan / (1.0 + std::exp(-u)); }
    static double equi_slope(double u) {
        const double s = 1.0 / (1.0 + std::exp(-u));
        return kSpan * s * (1.0 - s);
    }

    MvnConstraints c_;
};

StructuredCovParams moment_start(const SufficientStats& s) {
    const double n = static_cast<double>(s.n);
    double vh = 0, vmo = 0;
    for (int i = 0; i < kMvnCompanies; ++i) {
        vh += s.scatter(i, i);
        vmo += s.scatter(i + kMvnCompanies, i + kMvnCompanies);
    }
    StructuredCovParams p;
    p.sigma_h = std::sqrt(vh / (n * kMvnCompanies));
    p.sigma_mo = std::sqrt(vmo / (n * kMvnCompanies));
    auto corr = [&](int i, int j) { return s.scatter(i, j) / std::sqrt(s.scatter(i, i) * s.scatter(j, j)); };
    double ch = 0, cmo = 0, c1 = 0, c2 = 0;
    int nh = 0, n1 = 0, n2 = 0;
    for (int i = 0; i < kMvnCompanies; ++i) {
        for (int j = 0; j < kMvnCompanies; ++j) {
            if (i < j) {
                ch += corr(i, j);
                cmo += corr(i + kMvnCompanies, j + kMvnCompanies);
                ++nh;
            }
            if (i == j) {
                c1 += corr(i, j + kMvnCompanies);
                ++n1;
            } else {
                c2 += corr(i, j + kMvnCompanies);
                ++n2;
            }
        }
    }
    p.rho_h = std::clamp(ch / nh, -0.25, 0.95);
    p.rho_mo = std::clamp(cmo / nh, -0.25, 0.95);
    p.rho_1 = std::clamp(c1 / n1, -0.9, 0.9);
    p.rho_2 = std::clamp(c2 / n2, -0.9, 0.9);
    return p;
}

std::vector<StructuredCovParams> start_points(const SufficientStats& s, const Parameterization& param,
                                              const MvnFitOptions& options) {
    static constexpr std::array<std::array<double, 4>, 6> kCorrelations{{{0.5, 0.5, 0.3, 0.3},
                                                                        {0.8, 0.3, 0.5, 0.2},
                                                                        {0.3, 0.8, -0.3, -0.1},
                                                                        {0.2, 0.2, 0.6, 0.1},
                                                                        {0.6, 0.6, -0.4, -0.2},
                                                                        {0.9, 0.9, 0.2, 0.2}}};
    static constexpr std::array<double, 3> kScale{1.0, 0.7, 1.4};

    const StructuredCovParams base = moment_start(s);
    std::vector<StructuredCovParams> raw;
    raw.push_back(base);
    raw.push_back({base.sigma_h, base.sigma_mo, 0.0, 0.0, 0.0, 0.0});
    for (std::size_t k = 0; k < kCorrelations.size(); ++k) {
        const auto& c = kCorrelations[k];
        const double f = kScale[k % kScale.size()];
        raw.push_back({base.sigma_h * f, base.sigma_mo / f, c[0], c[1], c[2], c[3]});
    }
    for (int k = static_cast<int>(raw.size()); k < options.n_starts; ++k) {
        auto rng = substream(0x5eed, static_cast<std::uint64_t>(k));
        std::uniform_real_distribution<double> equi(-0.2, 0.95);
        std::uniform_real_distribution<double> cross(-0.8, 0.8);
        std::uniform_real_distribution<double> scale(0.5, 2.0);
        raw.push_back({base.sigma_h * scale(rng), base.sigma_mo * scale(rng), equi(rng), equi(rng), cross(rng),
                       cross(rng)});
    }
    raw.resize(std::min<std::size_t>(raw.size(), static_cast<std::size_t>(std::max(options.n_starts, 1))));
    raw.insert(raw.end(), options.extra_starts.begin(), options.extra_starts.end());

    std::vector<StructuredCovParams> starts;
    for (StructuredCovParams p : raw) {
        p = param.constrain(p);
        // Pull correlations toward zero until the start is positive definite.
        for (int shrink = 0; shrink < 60 && cholesky_failure(build(p)); ++shrink) {
            p.rho_h *= 0.5;
            p.rho_mo *= 0.5;
            p.rho_1 *= 0.5;
            p.rho_2 *= 0.5;
        }
        p.rho_h = std::clamp(p.rho_h, kEquicorrLower + 1e-6, 1.0 - 1e-6);
        p.rho_mo = std::clamp(p.rho_mo, kEquicorrLower + 1e-6, 1.0 - 1e-6);
        p.rho_1 = std::clamp(p.rho_1, -1.0 + 1e-6, 1.0 - 1e-6);
        p.rho_2 = std::clamp(p.rho_2, -1.0 + 1e-6, 1.0 - 1e-6);
        starts.push_back(param.constrain(p));
    }
    return starts;
}

}  // namespace

int MvnConstraints::free_parameters() const noexcept {
    return 4 + (rho1_zero ? 0 : 1) + (rho1_equals_rho2 ? 0 : 1);
}

Matrix8 assemble_sigma(const StructuredCovParams& params) {
    check_ranges(params);
    const Matrix8 sigma = build(params);
    if (const auto column = cholesky_failure(sigma)) {
        throw DomainError(fmt::format("structured covariance is not positive definite: Cholesky pivot {} is not positive",
                                      *column));
    }
    return sigma;
}

double loglik_structured(const StructuredCovParams& params, std::span<const Observation8> data) {
    (void)assemble_sigma(params);
    const auto ll = evaluate(params, summarize(data), nullptr);
    if (!ll) throw DomainError("structured covariance factorization failed");
    return *ll;
}

std::array<double, 6> loglik_structured_gradient(const StructuredCovParams& params,
                                                 std::span<const Observation8> data) {
    (void)assemble_sigma(params);
    std::array<double, 6> g{};
    if (!evaluate(params, summarize(data), &g)) throw DomainError("structured covariance factorization failed");
    return g;
}

StructuredFit fit_structured_mvn(std::span<const Observation8> data, MvnConstraints constraints,
                                 const MvnFitOptions& options) {
    if (data.size() < 3) {
        throw DomainError(fmt::format("structured MVN fit needs at least 3 observations, got {}", data.size()));
    }
    const SufficientStats stats = summarize(data);
    const Parameterization param(constraints);
    const double n = static_cast<double>(stats.n);

    auto objective = [&](const Eigen::VectorXd& u, Eigen::VectorXd& grad) {
        for (Eigen::Index i = 0; i < u.size(); ++i) {
            if (!std::isfinite(u[i]) || std::abs(u[i]) > 50) return std::numeric_limits<double>::infinity();
        }
        std::array<double, 6> g{};
        const auto ll = evaluate(param.from_free(u), stats, &g);
        if (!ll) return std::numeric_limits<double>::infinity();
        grad = -param.free_gradient(u, g) / n;
        return -*ll / n;
    };

    detail::BfgsOptions bfgs;
    bfgs.relative_tolerance = options.relative_tolerance;
    bfgs.max_iterations = options.max_iterations;

    const auto starts = start_points(stats, param, options);
    std::optional<StructuredFit> best;
    int converged = 0;
    double worst_gradient = 0;
    for (const auto& start : starts) {
        const auto run = detail::minimize_bfgs(objective, param.to_free(start), bfgs);
        if (!run.converged || !std::isfinite(run.value)) {
            worst_gradient = std::max(worst_gradient, run.gradient_inf);
            continue;
        }
        ++converged;
        StructuredFit fit;
        fit.params = param.from_free(run.x);
        std::array<double, 6> g{};
        fit.loglik = *evaluate(fit.params, stats, &g);
        fit.iterations = run.iterations;
        double gmax = 0;
        for (double v : param.natural_free_gradient(g)) gmax = std::max(gmax, std::abs(v) / n);
        fit.gradient_norm = gmax;
        const bool better =
            !best || fit.loglik > best->loglik + 1e-12 * std::abs(best->loglik) ||
            (std::abs(fit.loglik - best->loglik) <= 1e-12 * std::abs(best->loglik) &&
             fit.params.as_array() < best->params.as_array());
        if (better) best = fit;
    }
    if (!best) {
        throw EstimationError(fmt::format("structured MVN fit did not converge from any of {} starts "
                                          "(largest final gradient {:.3g})",
                                          starts.size(), worst_gradient));
    }
    best->constraints = constraints;
    best->n_obs = stats.n;
    best->data_fingerprint = fingerprint(data);
    best->starts_tried = static_cast<int>(starts.size());
    best->starts_converged = converged;
    return *best;
}

LrtResult lr_test(double loglik_full, double loglik_reduced, int df) {
    if (df < 1) throw UsageError("likelihood-ratio test needs a positive degree-of-freedom difference");
    LrtResult r;
    r.loglik_full = loglik_full;
    r.loglik_reduced = loglik_reduced;
    r.df = df;
    r.d = 2.0 * (loglik_full - loglik_reduced);
    const double tolerance = 1e-6 * std::max(1.0, std::abs(loglik_full));
    r.needs_refit = r.d < -tolerance;
    r.p_value = chi2_sf(std::max(r.d, 0.0), df);
    return r;
}

LrtResult lr_test(const StructuredFit& full, const StructuredFit& reduced) {
    const MvnConstraints& a = full.constraints;
    const MvnConstraints& b = reduced.constraints;
    const bool restricts = (!a.rho1_equals_rho2 || b.rho1_equals_rho2) && (!a.rho1_zero || b.rho1_zero);
    if (!restricts || a.free_parameters() - b.free_parameters() != 1) {
        throw UsageError("likelihood-ratio test: reduced model is not a one-parameter restriction of the full model");
    }
    if (full.n_obs != reduced.n_obs || full.data_fingerprint != reduced.data_fingerprint) {
        throw UsageError("likelihood-ratio test: models were fitted to different data");
    }
    return lr_test(full.loglik, reduced.loglik, 1);
}

}  // namespace solvcap
