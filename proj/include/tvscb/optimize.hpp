#pragma once

#include <functional>

#include "tvscb/loss.hpp"

namespace tvscb {

/// Smooth objective on a box. `f(x, order)` must return the value and, when
/// asked, the gradient and Hessian at x (x is always inside the box).
struct BoxProblem {
    std::function<LossEval(const VectorXd&, Order)> f;
    VectorXd lower;
    VectorXd upper;

    VectorXd project(const VectorXd& x) const { return x.cwiseMax(lower).cwiseMin(upper); }
};

struct OptOptions {
    double grad_tol = 1e-8;     ///< inf-norm of the projected gradient
    double simplex_tol = 1e-8;  ///< Nelder-Mead simplex diameter
    int max_iter = 500;
    int max_nm_evals = 20000;
};

struct OptResult {
    VectorXd x;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Projected Newton with an eigenvalue-modified Hessian on the free variables
/// and an Armijo backtracking search along the projection arc.
OptResult projected_newton(const BoxProblem& prob, const VectorXd& x0, const OptOptions& opt = {});

/// Nelder-Mead on the box (trial points are projected). Converged when the
/// simplex diameter drops below simplex_tol.
OptResult nelder_mead_box(const BoxProblem& prob, const VectorXd& x0, const VectorXd& step,
                          const OptOptions& opt = {});

}  // namespace tvscb
