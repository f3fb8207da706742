#include "solarfc/gpr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <nlohmann/json.hpp>

#include "solarfc/errors.hpp"
#include "solarfc/nelder_mead.hpp"
#include "solarfc/rng.hpp"

namespace solarfc {

namespace {

constexpr double kSqrt5 = 2.23606797749978969640917366873;
constexpr double kSigma2Floor = 1e-8;

double matern_of_r(double r, double sf2) {
    return sf2 * (1.0 + kSqrt5 * r + (5.0 / 3.0) * r * r) * std::exp(-kSqrt5 * r);
}

double scaled_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                       const KernelHyperparams& hp) {
    if (hp.isotropic()) return (u - v).norm() / std::pow(10.0, hp.theta_l[0]);
    double s = 0;
    for (Eigen::Index j = 0; j < u.size(); ++j) {
        const double d = (u[j] - v[j]) / std::pow(10.0, hp.theta_l[j]);
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace

double matern52(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                const KernelHyperparams& hp) {
    if (u.size() != v.size())
        throw DimensionMismatchError("matern52 point dimensions differ");
    if (!hp.isotropic() && hp.theta_l.size() != u.size())
        throw DimensionMismatchError("ARD length-scale dimension mismatch");
    const double sf = hp.sigma_f();
    return matern_of_r(scaled_distance(u, v, hp), sf * sf);
}

Eigen::MatrixXd build_kernel_matrix(const Eigen::MatrixXd& X,
                                    const KernelHyperparams& hp) {
    const Eigen::Index n = X.rows();
    const double sf = hp.sigma_f();
    const double sf2 = sf * sf;
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        K(i, i) = sf2;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = matern_of_r(
                scaled_distance(X.row(i).transpose(), X.row(j).transpose(), hp),
                sf2);
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    return K;
}

Eigen::MatrixXd build_cross_kernel(const Eigen::MatrixXd& X,
                                   const Eigen::MatrixXd& Xq,
                                   const KernelHyperparams& hp) {
    if (X.cols() != Xq.cols())
        throw DimensionMismatchError("query dimension differs from training");
    const double sf = hp.sigma_f();
    const double sf2 = sf * sf;
    Eigen::MatrixXd K(X.rows(), Xq.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = 0; j < Xq.rows(); ++j)
            K(i, j) = matern_of_r(
                scaled_distance(X.row(i).transpose(), Xq.row(j).transpose(), hp),
                sf2);
    return K;
}

// ------------------------------------------------------------- Standardizer

Standardizer Standardizer::fit(const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y) {
    Standardizer s;
    const double n = static_cast<double>(X.rows());
    s.x_mean = X.colwise().mean();
    s.x_std.resize(X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const double var =
            (X.col(j).array() - s.x_mean[j]).square().sum() / std::max(n - 1, 1.0);
        s.x_std[j] = std::sqrt(var);
        if (!(s.x_std[j] > 0))
            throw ConstantColumnError("constant feature column " +
                                      std::to_string(j));
    }
    s.y_mean = y.mean();
    const double yvar =
        (y.array() - s.y_mean).square().sum() / std::max(n - 1, 1.0);
    s.y_std = std::sqrt(yvar);
    if (!(s.y_std > 0)) throw ConstantColumnError("constant output");
    return s;
}

Eigen::MatrixXd Standardizer::transform_x(const Eigen::MatrixXd& X) const {
    return (X.rowwise() - x_mean.transpose()).array().rowwise() /
           x_std.transpose().array();
}

Eigen::VectorXd Standardizer::transform_y(const Eigen::VectorXd& y) const {
    return (y.array() - y_mean) / y_std;
}

// ------------------------------------------------------------- Cholesky

Eigen::LLT<Eigen::MatrixXd> chol_with_jitter(const Eigen::MatrixXd& A,
                                             double* jitter_used) {
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() == Eigen::Success) {
        if (jitter_used) *jitter_used = 0;
        return llt;
    }
    for (double jitter = 1e-10; jitter <= 1e-4; jitter *= 10) {
        Eigen::MatrixXd Aj = A;
        Aj.diagonal().array() += jitter;
        llt.compute(Aj);
        if (llt.info() == Eigen::Success) {
            if (jitter_used) *jitter_used = jitter;
            return llt;
        }
    }
    throw SingularKernelError("Cholesky failed after jitter escalation");
}

double concentrated_beta_chol(const Eigen::LLT<Eigen::MatrixXd>& llt,
                              const Eigen::VectorXd& y) {
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(y.size());
    const Eigen::VectorXd z1 = llt.matrixL().solve(ones);
    const Eigen::VectorXd zy = llt.matrixL().solve(y);
    return z1.dot(zy) / z1.dot(z1);
}

double concentrated_beta(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         const KernelHyperparams& hp) {
    Eigen::MatrixXd A = build_kernel_matrix(X, hp);
    A.diagonal().array() += std::max(hp.sigma2, kSigma2Floor);
    return concentrated_beta_chol(chol_with_jitter(A), y);
}

double log_marginal_likelihood(const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y,
                               const KernelHyperparams& hp) {
    const Eigen::Index n = y.size();
    Eigen::MatrixXd A = build_kernel_matrix(X, hp);
    A.diagonal().array() += std::max(hp.sigma2, kSigma2Floor);
    const auto llt = chol_with_jitter(A);
    const double beta = concentrated_beta_chol(llt, y);
    const Eigen::VectorXd r = y.array() - beta;
    const Eigen::VectorXd zr = llt.matrixL().solve(r);
    const double logdet =
        2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
    return -0.5 * zr.squaredNorm() -
           0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi) -
           0.5 * logdet;
}

// --------------------------------------------------------------------- fit

namespace {

KernelHyperparams params_from_vector(const Eigen::VectorXd& p, bool ard, int q) {
    KernelHyperparams hp;
    const int nl = ard ? q : 1;
    hp.theta_l = p.head(nl);
    hp.theta_f = p[nl];
    hp.sigma2 = std::max(std::pow(10.0, p[nl + 1]), kSigma2Floor);
    return hp;
}

double median_pairwise_distance(const Eigen::MatrixXd& X,
                                std::mt19937_64& rng) {
    const Eigen::Index n = X.rows();
    std::vector<double> dists;
    if (n <= 64) {
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j)
                dists.push_back((X.row(i) - X.row(j)).norm());
    } else {
        for (int s = 0; s < 2000; ++s) {
            const auto i = uniform_below(rng, static_cast<std::uint64_t>(n));
            const auto j = uniform_below(rng, static_cast<std::uint64_t>(n));
            if (i == j) continue;
            dists.push_back((X.row(static_cast<Eigen::Index>(i)) -
                             X.row(static_cast<Eigen::Index>(j)))
                                .norm());
        }
    }
    if (dists.empty()) return 1.0;
    std::sort(dists.begin(), dists.end());
    const double med = dists[dists.size() / 2];
    return med > 0 ? med : 1.0;
}

}  // namespace

TrainedGpr fit_gpr(const Eigen::MatrixXd& X_raw, const Eigen::VectorXd& y_raw,
                   const FitOptions& opts) {
    if (X_raw.rows() < 5) throw TooFewPointsError("GPR fit needs T >= 5");
    if (X_raw.rows() != y_raw.size())
        throw LengthMismatchError("X and y row counts differ");

    TrainedGpr m;
    m.standardizer = Standardizer::fit(X_raw, y_raw);
    m.X = m.standardizer.transform_x(X_raw);
    m.y = m.standardizer.transform_y(y_raw);
    const int q = static_cast<int>(m.X.cols());
    const int nl = opts.ard ? q : 1;

    std::mt19937_64 rng(mix_seed(opts.seed, 0xf17));
    const double med = median_pairwise_distance(m.X, rng);
    const double lo = std::log10(0.1 * med);
    const double hi = std::log10(10.0 * med);

    auto objective = [&](const Eigen::VectorXd& p) {
        try {
            const auto hp = params_from_vector(p, opts.ard, q);
            return -log_marginal_likelihood(m.X, m.y, hp);
        } catch (const SingularKernelError&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    double best_nll = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_p;
    for (int s = 0; s < opts.n_starts; ++s) {
        Eigen::VectorXd p0(nl + 2);
        for (int j = 0; j < nl; ++j) p0[j] = uniform_real(rng, lo, hi);
        p0[nl] = 0.0;       // theta_f: std(y_std) = 1
        p0[nl + 1] = -2.0;  // sigma2 = 0.01
        auto res = nelder_mead(objective, p0, 0.5, 1e-6, opts.max_evals);

        FitStart fs;
        fs.initial = params_from_vector(p0, opts.ard, q);
        fs.final = params_from_vector(res.x, opts.ard, q);
        fs.log_likelihood = -res.fval;
        fs.evaluations = res.evaluations;
        fs.converged = res.converged;
        m.fit_report.starts.push_back(fs);

        if (res.fval < best_nll) {
            best_nll = res.fval;
            best_p = res.x;
            m.fit_report.best_start = s;
        }
    }
    if (!std::isfinite(best_nll))
        throw OptimizerFailureError("no start produced a finite likelihood");

    m.hp = params_from_vector(best_p, opts.ard, q);
    m.refactor();
    return m;
}

void TrainedGpr::refactor() {
    Eigen::MatrixXd A = build_kernel_matrix(X, hp);
    A.diagonal().array() += std::max(hp.sigma2, kSigma2Floor);
    const auto llt = chol_with_jitter(A);
    beta = concentrated_beta_chol(llt, y);
    chol_L = llt.matrixL();
    alpha = llt.solve(Eigen::VectorXd(y.array() - beta));
}

Prediction TrainedGpr::predict(const Eigen::MatrixXd& Xq_raw,
                               bool include_noise) const {
    if (Xq_raw.cols() != X.cols())
        throw DimensionMismatchError("query feature dimension mismatch");
    const Eigen::MatrixXd Xq = standardizer.transform_x(Xq_raw);
    const Eigen::MatrixXd Ks = build_cross_kernel(X, Xq, hp);
    const double sf = hp.sigma_f();
    const double sf2 = sf * sf;

    Prediction pred;
    pred.includes_noise = include_noise;
    pred.mean.resize(Xq.rows());
    pred.variance.resize(Xq.rows());
    const auto L = chol_L.triangularView<Eigen::Lower>();
    for (Eigen::Index i = 0; i < Xq.rows(); ++i) {
        const Eigen::VectorXd ks = Ks.col(i);
        const double mean_std = beta + ks.dot(alpha);
        const Eigen::VectorXd v = L.solve(ks);
        double var_std = sf2 - v.squaredNorm();
        if (include_noise) var_std += hp.sigma2;
        var_std = std::max(var_std, 0.0);
        pred.mean[i] = standardizer.destandardize_mean(mean_std);
        pred.variance[i] = standardizer.destandardize_var(var_std);
    }
    return pred;
}

// ------------------------------------------------------------ serialization

namespace {

nlohmann::json vec_to_json(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd vec_from_json(const nlohmann::json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                             static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string TrainedGpr::to_json() const {
    nlohmann::json j;
    j["standardizer"] = {{"x_mean", vec_to_json(standardizer.x_mean)},
                         {"x_std", vec_to_json(standardizer.x_std)},
                         {"y_mean", standardizer.y_mean},
                         {"y_std", standardizer.y_std}};
    j["hyperparams"] = {{"theta_l", vec_to_json(hp.theta_l)},
                        {"theta_f", hp.theta_f},
                        {"sigma2", hp.sigma2}};
    j["beta"] = beta;
    std::vector<std::vector<double>> rows(X.rows(),
                                          std::vector<double>(X.cols()));
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index c = 0; c < X.cols(); ++c) rows[i][c] = X(i, c);
    j["X"] = rows;
    j["y"] = vec_to_json(y);
    nlohmann::json starts = nlohmann::json::array();
    for (const auto& s : fit_report.starts)
        starts.push_back({{"log_likelihood", s.log_likelihood},
                          {"evaluations", s.evaluations},
                          {"converged", s.converged},
                          {"theta_l", vec_to_json(s.final.theta_l)},
                          {"theta_f", s.final.theta_f},
                          {"sigma2", s.final.sigma2}});
    j["fit_report"] = {{"starts", starts},
                       {"best_start", fit_report.best_start}};
    return j.dump();
}

TrainedGpr TrainedGpr::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ArtifactCorruptError(std::string("model artifact unparseable: ") +
                                   e.what());
    }
    TrainedGpr m;
    try {
        m.standardizer.x_mean = vec_from_json(j["standardizer"]["x_mean"]);
        m.standardizer.x_std = vec_from_json(j["standardizer"]["x_std"]);
        m.standardizer.y_mean = j["standardizer"]["y_mean"];
        m.standardizer.y_std = j["standardizer"]["y_std"];
        m.hp.theta_l = vec_from_json(j["hyperparams"]["theta_l"]);
        m.hp.theta_f = j["hyperparams"]["theta_f"];
        m.hp.sigma2 = j["hyperparams"]["sigma2"];
        const auto rows = j["X"].get<std::vector<std::vector<double>>>();
        const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
        const Eigen::Index q =
            n > 0 ? static_cast<Eigen::Index>(rows[0].size()) : 0;
        m.X.resize(n, q);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index c = 0; c < q; ++c) m.X(i, c) = rows[i][c];
        m.y = vec_from_json(j["y"]);
        const double stored_beta = j["beta"];
        m.refactor();
        // integrity: recomputed factorization must reproduce the stored state
        Eigen::MatrixXd A = build_kernel_matrix(m.X, m.hp);
        A.diagonal().array() += std::max(m.hp.sigma2, kSigma2Floor);
        const Eigen::MatrixXd rec =
            m.chol_L * m.chol_L.transpose();
        if ((rec - A).norm() > 1e-8 * A.norm())
            throw ArtifactCorruptError("Cholesky reconstruction check failed");
        if (std::abs(stored_beta - m.beta) > 1e-6 * (1 + std::abs(stored_beta)))
            throw ArtifactCorruptError("stored beta inconsistent with data");
    } catch (const nlohmann::json::exception& e) {
        throw ArtifactCorruptError(std::string("model artifact malformed: ") +
                                   e.what());
    }
    return m;
}

}  // namespace solarfc
