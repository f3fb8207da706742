#include "solarfc/evaluation.hpp"

#include <cmath>
#include <numeric>

#include "solarfc/errors.hpp"
#include "solarfc/rng.hpp"

namespace solarfc {

MetricSet metrics(const std::vector<double>& actual,
                  const std::vector<double>& predicted, double base_mw) {
    if (actual.size() != predicted.size())
        throw LengthMismatchError("metric input lengths differ");
    if (actual.empty()) throw EmptyInputError("metrics on empty vectors");
    if (!(base_mw > 0)) throw ValidationError("metric base must be positive");

    MetricSet m;
    m.n_points = actual.size();
    double se = 0, ae = 0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double e = actual[i] - predicted[i];
        se += e * e;
        ae += std::abs(e);
    }
    m.mse_mw2 = se / actual.size();
    m.rmse_mw = std::sqrt(m.mse_mw2);
    m.mae_mw = ae / actual.size();
    m.rmse_pct = 100.0 * m.rmse_mw / base_mw;
    m.mae_pct = 100.0 * m.mae_mw / base_mw;
    return m;
}

std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k,
                                                  std::uint64_t seed) {
    if (k < 2 || n < k) throw TooFewPointsError("kfold needs n >= k >= 2");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(seed);
    shuffle_indices(idx, rng);

    std::vector<std::vector<std::size_t>> folds(k);
    const std::size_t base = n / k;
    const std::size_t extra = n % k;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t len = base + (f < extra ? 1 : 0);
        folds[f].assign(idx.begin() + pos, idx.begin() + pos + len);
        pos += len;
    }
    return folds;
}

CvResult cross_validate(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const FitOptions& gpr_opts, double base_mw,
                        std::size_t k, std::uint64_t seed) {
    const std::size_t n = static_cast<std::size_t>(X.rows());
    CvResult cv;
    cv.fold_assignments = kfold_split(n, k, seed);

    double sum_rmse = 0, sum_mae = 0, sum_mse = 0;
    std::size_t ok_folds = 0, total_points = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const auto& test_idx = cv.fold_assignments[f];
        std::vector<std::size_t> train_idx;
        for (std::size_t g = 0; g < k; ++g)
            if (g != f)
                train_idx.insert(train_idx.end(), cv.fold_assignments[g].begin(),
                                 cv.fold_assignments[g].end());

        Eigen::MatrixXd Xtr(train_idx.size(), X.cols());
        Eigen::VectorXd ytr(train_idx.size());
        for (std::size_t i = 0; i < train_idx.size(); ++i) {
            Xtr.row(i) = X.row(static_cast<Eigen::Index>(train_idx[i]));
            ytr[i] = y[static_cast<Eigen::Index>(train_idx[i])];
        }
        Eigen::MatrixXd Xte(test_idx.size(), X.cols());
        std::vector<double> yte(test_idx.size());
        for (std::size_t i = 0; i < test_idx.size(); ++i) {
            Xte.row(i) = X.row(static_cast<Eigen::Index>(test_idx[i]));
            yte[i] = y[static_cast<Eigen::Index>(test_idx[i])];
        }

        try {
            const auto model = fit_gpr(Xtr, ytr, gpr_opts);
            const auto pred = model.predict(Xte, false);
            std::vector<double> pv(pred.mean.data(),
                                   pred.mean.data() + pred.mean.size());
            const auto ms = metrics(yte, pv, base_mw);
            cv.per_fold.push_back(ms);
            sum_rmse += ms.rmse_mw;
            sum_mae += ms.mae_mw;
            sum_mse += ms.mse_mw2;
            total_points += ms.n_points;
            ++ok_folds;
        } catch (const Error& e) {
            cv.failures.push_back({f, e.what()});
        }
    }
    if (ok_folds == 0)
        throw OptimizerFailureError("every CV fold failed: " +
                                    (cv.failures.empty()
                                         ? std::string("unknown")
                                         : cv.failures.front().message));
    cv.mean.rmse_mw = sum_rmse / ok_folds;
    cv.mean.mae_mw = sum_mae / ok_folds;
    cv.mean.mse_mw2 = sum_mse / ok_folds;
    cv.mean.rmse_pct = 100.0 * cv.mean.rmse_mw / base_mw;
    cv.mean.mae_pct = 100.0 * cv.mean.mae_mw / base_mw;
    cv.mean.n_points = total_points;
    return cv;
}

ErrorDistribution fit_normal(const std::vector<double>& errors) {
    if (errors.empty()) throw EmptyInputError("normal fit on empty errors");
    if (errors.size() < 2)
        throw TooFewPointsError("normal fit needs at least 2 errors");
    ErrorDistribution d;
    d.n = errors.size();
    d.eps_bar = std::accumulate(errors.begin(), errors.end(), 0.0) / d.n;
    double s2 = 0;
    for (double e : errors) s2 += (e - d.eps_bar) * (e - d.eps_bar);
    d.sigma_eps = std::sqrt(s2 / (d.n - 1));
    return d;
}

double z_star_for_level(double level) {
    if (level == 0.90) return 1.645;
    if (level == 0.95) return 1.960;
    if (level == 0.99) return 2.576;
    throw UnsupportedLevelError("confidence level must be 0.90, 0.95 or 0.99");
}

ConfidenceInterval confidence_interval(const ErrorDistribution& dist,
                                       double level) {
    if (dist.n < 2) throw TooFewPointsError("CI needs at least 2 samples");
    ConfidenceInterval ci;
    ci.level = level;
    ci.z_star = z_star_for_level(level);
    const double se = ci.z_star * dist.sigma_eps / std::sqrt(double(dist.n));
    ci.lo_mw = dist.eps_bar - se;
    ci.hi_mw = dist.eps_bar + se;
    const double pop = ci.z_star * dist.sigma_eps;
    ci.pop_lo_mw = dist.eps_bar - pop;
    ci.pop_hi_mw = dist.eps_bar + pop;
    return ci;
}

}  // namespace solarfc
