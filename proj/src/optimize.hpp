#pragma once

#include <cmath>
#include <limits>

#include <Eigen/Core>

namespace solvcap::detail {

struct BfgsOptions {
    double relative_tolerance = 1e-10;
    double gradient_tolerance = 1e-9;
    int max_iterations = 1000;
};

struct BfgsResult {
    Eigen::VectorXd x;
    double value = 0;
    double gradient_inf = 0;
    int iterations = 0;
    bool converged = false;
};

// Quasi-Newton minimization with Armijo backtracking. `fn(x, grad)` returns
// the objective and fills the gradient; +inf marks an infeasible point.
template <typename Fn>
BfgsResult minimize_bfgs(Fn&& fn, Eigen::VectorXd x, const BfgsOptions& options) {
    const Eigen::Index dim = x.size();
    Eigen::VectorXd grad(dim);
    double f = fn(x, grad);
    BfgsResult result;
    if (!std::isfinite(f)) {
        result.x = x;
        result.value = f;
        return result;
    }
    Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Identity(dim, dim);
    Eigen::VectorXd trial(dim);
    Eigen::VectorXd trial_grad(dim);
    int stalls = 0;
    int it = 0;
    for (; it < options.max_iterations; ++it) {
        if (grad.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
            result.converged = true;
            break;
        }
        Eigen::VectorXd direction = -inv_hessian * grad;
        double slope = grad.dot(direction);
        if (!(slope < 0)) {
            inv_hessian.setIdentity();
            direction = -grad;
            slope = -grad.squaredNorm();
        }
        double step = 1.0;
        double f_trial = std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int backtrack = 0; backtrack < 60; ++backtrack, step *= 0.5) {
            trial = x + step * direction;
            f_trial = fn(trial, trial_grad);
            if (std::isfinite(f_trial) && f_trial <= f + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (inv_hessian.isIdentity()) break;
            inv_hessian.setIdentity();
            continue;
        }
        const Eigen::VectorXd s = trial - x;
        const Eigen::VectorXd y = trial_grad - grad;
        const double improvement = f - f_trial;
        x = trial;
        grad = trial_grad;
        const double previous = f;
        f = f_trial;
        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(dim, dim);
            inv_hessian = (eye - rho * s * y.transpose()) * inv_hessian * (eye - rho * y * s.transpose()) +
                          rho * s * s.transpose();
        }
        if (improvement <= options.relative_tolerance * std::max(1.0, std::abs(previous))) {
            if (++stalls >= 3) {
                ++it;
                break;
            }
        } else {
            stalls = 0;
        }
    }
    result.x = x;
    result.value = f;
    result.gradient_inf = grad.lpNorm<Eigen::Infinity>();
    result.iterations = it;
    result.converged = result.converged || result.gradient_inf < 1e-6;
    return result;
}

}  // namespace solvcap::detail
