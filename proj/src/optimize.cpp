#include "rerisk/optimize.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace rerisk {

MinimizeResult minimize_bfgs(const Objective& f, Eigen::VectorXd x0, const MinimizeOptions& options) {
    const Eigen::Index n = x0.size();
    MinimizeResult out;
    out.x = std::move(x0);
    out.gradient.resize(n);
    out.value = f(out.x, &out.gradient);
    if (!std::isfinite(out.value)) return out;

    Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd grad_new(n);
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        out.iterations = iter + 1;
        if (out.gradient.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
            out.converged = true;
            break;
        }
        Eigen::VectorXd direction = -inv_hessian * out.gradient;
        double slope = out.gradient.dot(direction);
        if (!(slope < 0.0)) {
            inv_hessian.setIdentity();
            direction = -out.gradient;
            slope = -out.gradient.squaredNorm();
        }

        double step = 1.0;
        double f_new = std::numeric_limits<double>::infinity();
        Eigen::VectorXd x_new;
        bool accepted = false;
        for (int k = 0; k < 60; ++k) {
            x_new = out.x + step * direction;
            f_new = f(x_new, &grad_new);
            if (std::isfinite(f_new) && f_new <= out.value + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        const Eigen::VectorXd s = x_new - out.x;
        const Eigen::VectorXd y = grad_new - out.gradient;
        const double sy = s.dot(y);
        const double f_old = out.value;
        out.x = x_new;
        out.value = f_new;
        out.gradient = grad_new;

        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (iter == 0) inv_hessian *= sy / y.squaredNorm();
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
            inv_hessian = (eye - rho * s * y.transpose()) * inv_hessian * (eye - rho * y * s.transpose()) +
                          rho * s * s.transpose();
        }
        if (std::fabs(f_old - f_new) <= options.value_tolerance * std::max(1.0, std::fabs(f_new))) {
            out.converged = true;
            break;
        }
    }
    return out;
}

MinimizeResult polish_newton(const Objective& f, Eigen::VectorXd x, int max_steps, double gradient_tolerance) {
    const Eigen::Index n = x.size();
    MinimizeResult best;
    best.x = std::move(x);
    best.gradient.resize(n);
    best.value = f(best.x, &best.gradient);

    Eigen::VectorXd g_plus(n);
    Eigen::VectorXd g_minus(n);
    for (int iter = 0; iter < max_steps; ++iter) {
        best.iterations = iter;
        if (best.gradient.lpNorm<Eigen::Infinity>() < gradient_tolerance) {
            best.converged = true;
            return best;
        }
        Eigen::MatrixXd hessian(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const double h = 1e-6 * std::max(1.0, std::fabs(best.x[j]));
            Eigen::VectorXd xp = best.x;
            Eigen::VectorXd xm = best.x;
            xp[j] += h;
            xm[j] -= h;
            f(xp, &g_plus);
            f(xm, &g_minus);
            hessian.col(j) = (g_plus - g_minus) / (2.0 * h);
        }
        hessian = 0.5 * (hessian + hessian.transpose()).eval();
        Eigen::LDLT<Eigen::MatrixXd> ldlt(hessian);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) break;
        Eigen::VectorXd step = -ldlt.solve(best.gradient);

        bool improved = false;
        Eigen::VectorXd grad(n);
        for (int k = 0; k < 30; ++k) {
            Eigen::VectorXd candidate = best.x + step;
            const double value = f(candidate, &grad);
            // Near the optimum f is flat to rounding, so allow a last-digit rise.
            if (std::isfinite(value) && value <= best.value + 1e-12 * std::max(1.0, std::fabs(best.value))) {
                best.x = candidate;
                best.value = value;
                best.gradient = grad;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved) break;
    }
    best.converged = best.gradient.lpNorm<Eigen::Infinity>() < gradient_tolerance;
    return best;
}

Eigen::VectorXd numeric_gradient(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
                                 double step) {
    Eigen::VectorXd g(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        Eigen::VectorXd xp = x;
        Eigen::VectorXd xm = x;
        xp[j] += step;
        xm[j] -= step;
        g[j] = (f(xp) - f(xm)) / (2.0 * step);
    }
    return g;
}

}  // namespace rerisk
