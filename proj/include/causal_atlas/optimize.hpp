#pragma once

#include <functional>

#include "causal_atlas/cancel.hpp"
#include "causal_atlas/types.hpp"

namespace causal_atlas {

/// Returns f(x) and writes the gradient into `grad`.
using Objective = std::function<double(const VectorXd& x, VectorXd& grad)>;

struct BoundedLbfgsOptions {
    int memory = 10;
    int max_iter = 1000;
    double pg_tol = 1e-6;   // infinity norm of the projected gradient
    double f_tol = 1e-12;   // relative decrease between iterations
};

struct BoundedLbfgsResult {
    VectorXd x;
    double f = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Limited-memory quasi-Newton minimization under box constraints
/// lower <= x <= upper. Directions come from the two-loop recursion over the
/// free variables; steps are projected onto the box and backtracked until the
/// Armijo condition holds along the projected path.
BoundedLbfgsResult minimize_bounded(const Objective& fun, VectorXd x0, const VectorXd& lower, const VectorXd& upper,
                                    const BoundedLbfgsOptions& options = {},
                                    const CancelToken& cancel = CancelToken::none());

/// Central finite-difference gradient, used by tests and debugging.
VectorXd numeric_gradient(const Objective& fun, const VectorXd& x, double step = 1e-6);

}  // namespace causal_atlas
