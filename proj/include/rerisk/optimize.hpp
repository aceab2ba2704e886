#pragma once

#include <Eigen/Core>

#include <functional>

namespace rerisk {

/// Objective returning f(x); when `grad` is non-null it must also be filled.
/// Returning +inf marks x as infeasible and makes the line search back off.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct MinimizeOptions {
    int max_iterations = 1000;
    double gradient_tolerance = 1e-9;  ///< on the infinity norm
    double value_tolerance = 1e-15;    ///< relative change in f between iterations
};

struct MinimizeResult {
    Eigen::VectorXd x;
    double value = 0.0;
    Eigen::VectorXd gradient;
    int iterations = 0;
    bool converged = false;
};

/// Quasi-Newton (BFGS) minimisation with a backtracking Armijo line search.
MinimizeResult minimize_bfgs(const Objective& f, Eigen::VectorXd x0, const MinimizeOptions& options = {});

/// Newton iterations using a finite-difference Hessian of the analytic
/// gradient. Used to tighten a BFGS solution until the gradient is tiny.
/// Steps that do not decrease f are halved; the best point is returned.
MinimizeResult polish_newton(const Objective& f, Eigen::VectorXd x, int max_steps = 20,
                             double gradient_tolerance = 1e-10);

/// Central-difference gradient, used by tests to check analytic gradients.
Eigen::VectorXd numeric_gradient(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
                                 double step = 1e-5);

}  // namespace rerisk
