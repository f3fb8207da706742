#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace solarfc {

/// Kernel hyperparameters in log10 scale. theta_l is length-1 (isotropic,
/// default) or length-q (ARD).
struct KernelHyperparams {
    Eigen::VectorXd theta_l = Eigen::VectorXd::Zero(1);
    double theta_f = 0.0;
    double sigma2 = 1e-2;  // noise variance, standardized-output units

    double sigma_f() const { return std::pow(10.0, theta_f); }
    Eigen::VectorXd sigma_l() const {
        return theta_l.unaryExpr([](double t) { return std::pow(10.0, t); });
    }
    bool isotropic() const { return theta_l.size() == 1; }
};

/// Matern 5/2 covariance between two points.
double matern52(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                const KernelHyperparams& hp);

/// Full kernel matrix; exactly symmetric (upper triangle mirrored).
Eigen::MatrixXd build_kernel_matrix(const Eigen::MatrixXd& X,
                                    const KernelHyperparams& hp);

/// Cross-kernel K(X, Xq), T x Tq.
Eigen::MatrixXd build_cross_kernel(const Eigen::MatrixXd& X,
                                   const Eigen::MatrixXd& Xq,
                                   const KernelHyperparams& hp);

/// z-score standardization fitted on training data.
struct Standardizer {
    Eigen::VectorXd x_mean, x_std;
    double y_mean = 0.0, y_std = 1.0;

    static Standardizer fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);
    Eigen::MatrixXd transform_x(const Eigen::MatrixXd& X) const;
    Eigen::VectorXd transform_y(const Eigen::VectorXd& y) const;
    double destandardize_mean(double m) const { return m * y_std + y_mean; }
    double destandardize_var(double v) const { return v * y_std * y_std; }
};

/// Cholesky of K + sigma2*I with jitter escalation.
/// Throws SingularKernelError after the escalation ladder is exhausted.
Eigen::LLT<Eigen::MatrixXd> chol_with_jitter(const Eigen::MatrixXd& A,
                                             double* jitter_used = nullptr);

/// Concentrated constant-basis coefficient: (1' A^-1 y) / (1' A^-1 1).
double concentrated_beta(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         const KernelHyperparams& hp);
double concentrated_beta_chol(const Eigen::LLT<Eigen::MatrixXd>& llt,
                              const Eigen::VectorXd& y);

/// Concentrated log marginal likelihood with the standard -(T/2) log 2pi term.
double log_marginal_likelihood(const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y,
                               const KernelHyperparams& hp);

struct FitOptions {
    int n_starts = 8;
    int max_evals = 2000;
    bool ard = false;
    std::uint64_t seed = 0;
};

struct FitStart {
    KernelHyperparams initial;
    KernelHyperparams final;
    double log_likelihood = 0.0;
    int evaluations = 0;
    bool converged = false;
};

struct FitReport {
    std::vector<FitStart> starts;
    int best_start = -1;
};

struct Prediction {
    Eigen::VectorXd mean;      // MW
    Eigen::VectorXd variance;  // MW^2
    bool includes_noise = false;
};

class TrainedGpr {
public:
    Standardizer standardizer;
    Eigen::MatrixXd X;  // standardized training inputs, T x q
    Eigen::VectorXd y;  // standardized outputs
    KernelHyperparams hp;
    double beta = 0.0;
    Eigen::MatrixXd chol_L;  // lower factor of K + sigma2 I
    Eigen::VectorXd alpha;   // (K + sigma2 I)^-1 (y - beta)
    FitReport fit_report;

    Prediction predict(const Eigen::MatrixXd& Xq_raw, bool include_noise) const;

    std::string to_json() const;
    /// Recomputes the Cholesky factor and verifies the stored invariants.
    static TrainedGpr from_json(const std::string& text);

    /// Rebuild chol_L/alpha from X, y, hp, beta (used after deserialization).
    void refactor();
};

TrainedGpr fit_gpr(const Eigen::MatrixXd& X_raw, const Eigen::VectorXd& y_raw,
                   const FitOptions& opts);

}  // namespace solarfc
