#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "solarfc/gpr.hpp"

namespace solarfc {

struct MetricSet {
    double rmse_mw = 0.0;
    double mae_mw = 0.0;
    double mse_mw2 = 0.0;
    double rmse_pct = 0.0;
    double mae_pct = 0.0;
    std::size_t n_points = 0;
};

MetricSet metrics(const std::vector<double>& actual,
                  const std::vector<double>& predicted, double base_mw);

/// Deterministic shuffled k-fold partition of 0..n-1. The first n%k folds
/// get the extra element.
std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k,
                                                  std::uint64_t seed);

struct FoldFailure {
    std::size_t fold = 0;
    std::string message;
};

struct CvResult {
    std::vector<MetricSet> per_fold;
    MetricSet mean;
    std::vector<std::vector<std::size_t>> fold_assignments;
    std::vector<FoldFailure> failures;
};

CvResult cross_validate(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const FitOptions& gpr_opts, double base_mw,
                        std::size_t k, std::uint64_t seed);

struct ErrorDistribution {
    double eps_bar = 0.0;
    double sigma_eps = 0.0;
    std::size_t n = 0;
};

ErrorDistribution fit_normal(const std::vector<double>& errors);

struct ConfidenceInterval {
    double level = 0.95;
    double z_star = 1.96;
    // standard-error interval: eps_bar +- z* sigma/sqrt(n)
    double lo_mw = 0.0;
    double hi_mw = 0.0;
    // population-spread variant: eps_bar +- z* sigma
    double pop_lo_mw = 0.0;
    double pop_hi_mw = 0.0;
};

/// Supported levels: 0.90, 0.95, 0.99 with fixed z* {1.645, 1.960, 2.576}.
ConfidenceInterval confidence_interval(const ErrorDistribution& dist,
                                       double level);

double z_star_for_level(double level);

}  // namespace solarfc
