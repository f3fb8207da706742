#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace solarfc {

struct NelderMeadResult {
    Eigen::VectorXd x;
    double fval = 0.0;
    int evaluations = 0;
    bool converged = false;
};

/// Derivative-free simplex minimization. Deterministic given the start point.
/// Stops when the simplex diameter falls below `diameter_tol` or after
/// `max_evals` objective evaluations.
NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, double initial_step = 0.5,
    double diameter_tol = 1e-6, int max_evals = 2000);

}  // namespace solarfc
