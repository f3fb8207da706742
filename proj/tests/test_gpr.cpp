#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "solarfc/errors.hpp"
#include "solarfc/gpr.hpp"

using namespace solarfc;

namespace {

// ---- dense-algebra oracles, independent of the Cholesky path ----

double oracle_kernel(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                     double sigma_l, double sigma_f) {
    const double r = (u - v).norm() / sigma_l;
    const double s5 = std::sqrt(5.0);
    return sigma_f * sigma_f * (1.0 + s5 * r + (5.0 / 3.0) * r * r) *
           std::exp(-s5 * r);
}

Eigen::MatrixXd oracle_A(const Eigen::MatrixXd& X, double sigma_l,
                         double sigma_f, double sigma2) {
    const Eigen::Index n = X.rows();
    Eigen::MatrixXd A(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            A(i, j) = oracle_kernel(X.row(i).transpose(), X.row(j).transpose(),
                                    sigma_l, sigma_f);
    A.diagonal().array() += sigma2;
    return A;
}

double oracle_beta(const Eigen::MatrixXd& A, const Eigen::VectorXd& y) {
    const Eigen::MatrixXd Ainv = A.inverse();
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(y.size());
    return ones.dot(Ainv * y) / ones.dot(Ainv * ones);
}

double oracle_lml(const Eigen::MatrixXd& A, const Eigen::VectorXd& y) {
    const double beta = oracle_beta(A, y);
    const Eigen::VectorXd r = y.array() - beta;
    const double quad = r.dot(A.inverse() * r);
    return -0.5 * quad -
           0.5 * y.size() * std::log(2.0 * std::numbers::pi) -
           0.5 * std::log(A.determinant());
}

KernelHyperparams make_hp(double sigma_l, double sigma_f, double sigma2) {
    KernelHyperparams hp;
    hp.theta_l[0] = std::log10(sigma_l);
    hp.theta_f = std::log10(sigma_f);
    hp.sigma2 = sigma2;
    return hp;
}

Eigen::MatrixXd random_inputs(int n, int q, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> norm;
    Eigen::MatrixXd X(n, q);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < q; ++j) X(i, j) = norm(rng);
    return X;
}

Eigen::VectorXd random_vector(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> norm;
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = norm(rng);
    return y;
}

}  // namespace

TEST_CASE("matern52 anchor values") {
    Eigen::VectorXd u(2), v(2);
    u << 1.0, 2.0;
    v = u;
    const auto hp = make_hp(1.0, 1.0, 0.0);
    CHECK(matern52(u, u, hp) == doctest::Approx(1.0));

    v << 1.0, 3.0;  // distance 1 = sigma_l
    CHECK(matern52(u, v, hp) == doctest::Approx(0.52399).epsilon(1e-4));

    v << 1.0, 4.0;  // distance 2
    CHECK(matern52(u, v, hp) == doctest::Approx(0.13867).epsilon(1e-4));

    v << 1.0, 102.0;  // r = 100
    CHECK(matern52(u, v, hp) < 1e-80);

    // amplitude scales quadratically
    const auto hp3 = make_hp(1.0, 3.0, 0.0);
    CHECK(matern52(u, u, hp3) == doctest::Approx(9.0));

    Eigen::VectorXd w(3);
    CHECK_THROWS_AS(matern52(u, w, hp), DimensionMismatchError);
}

TEST_CASE("ARD with equal scales matches isotropic") {
    Eigen::VectorXd u = random_vector(4, 1), v = random_vector(4, 2);
    const auto iso = make_hp(1.7, 1.3, 0.0);
    KernelHyperparams ard = iso;
    ard.theta_l = Eigen::VectorXd::Constant(4, std::log10(1.7));
    CHECK(matern52(u, v, ard) == doctest::Approx(matern52(u, v, iso)));

    // ARD ignores a coordinate whose scale goes to infinity
    KernelHyperparams ard2 = ard;
    ard2.theta_l[0] = 12.0;  // effectively infinite length scale
    Eigen::VectorXd u2 = u, v2 = v;
    u2[0] = 0;
    v2[0] = 0;
    CHECK(matern52(u, v, ard2) ==
          doctest::Approx(matern52(u2, v2, ard2)).epsilon(1e-6));
}

TEST_CASE("kernel matrix structure") {
    const auto hp = make_hp(1.0, 2.0, 0.0);

    Eigen::MatrixXd X1(1, 3);
    X1 << 0.5, -1.0, 2.0;
    const auto K1 = build_kernel_matrix(X1, hp);
    REQUIRE(K1.rows() == 1);
    CHECK(K1(0, 0) == doctest::Approx(4.0));

    Eigen::MatrixXd X2(2, 2);
    X2 << 1, 2, 1, 2;  // duplicated rows
    const auto K2 = build_kernel_matrix(X2, hp);
    CHECK(K2(0, 1) == doctest::Approx(K2(0, 0)));

    // collinear points spaced sigma_l apart: K(1,3) at r=2
    Eigen::MatrixXd X3(3, 1);
    X3 << 0.0, 1.0, 2.0;
    const auto K3 = build_kernel_matrix(X3, hp);
    CHECK(K3(0, 2) == doctest::Approx(4.0 * 0.13867).epsilon(1e-4));

    // exact symmetry by construction
    const auto X = random_inputs(15, 3, 5);
    const auto K = build_kernel_matrix(X, hp);
    CHECK((K - K.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("kernel matrices are numerically PSD") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 5 + static_cast<int>(rng() % 16);
        const int q = 1 + static_cast<int>(rng() % 3);
        const auto X = random_inputs(n, q, 1000 + trial);
        const double sf = std::pow(10.0, -1.0 + 2.0 * (trial % 5) / 4.0);
        const auto hp = make_hp(0.5 + 0.1 * (trial % 7), sf, 0.0);
        const auto K = build_kernel_matrix(X, hp);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10 * sf * sf);
    }
}

TEST_CASE("concentrated beta special cases") {
    const auto X = random_inputs(6, 2, 9);

    // constant output: generalized mean of a constant is the constant
    const auto hp = make_hp(1.0, 1.0, 0.1);
    CHECK(concentrated_beta(X, Eigen::VectorXd::Constant(6, 3.7), hp) ==
          doctest::Approx(3.7));

    // K ~ 0 (tiny amplitude), sigma2 = 1 -> A ~ I -> ordinary mean
    const auto y = random_vector(6, 10);
    const auto hp_id = make_hp(1.0, 1e-8, 1.0);
    CHECK(concentrated_beta(X, y, hp_id) == doctest::Approx(y.mean()).epsilon(1e-6));

    // 3-point system against the explicit dense inverse
    const auto X3 = random_inputs(3, 2, 11);
    const auto y3 = random_vector(3, 12);
    const auto hp3 = make_hp(0.8, 1.2, 0.3);
    const auto A = oracle_A(X3, 0.8, 1.2, 0.3);
    CHECK(concentrated_beta(X3, y3, hp3) ==
          doctest::Approx(oracle_beta(A, y3)).epsilon(1e-10));
}

TEST_CASE("log marginal likelihood anchors and dense equivalence") {
    // T=1 with A=[1]: sigma_f^2 = 0.5, sigma2 = 0.5, y = 0
    Eigen::MatrixXd X1(1, 1);
    X1 << 0.0;
    Eigen::VectorXd y1(1);
    y1 << 0.0;
    const auto hp1 = make_hp(1.0, std::sqrt(0.5), 0.5);
    CHECK(log_marginal_likelihood(X1, y1, hp1) ==
          doctest::Approx(-0.91893853).epsilon(1e-6));

    // hand-built 2x2 system vs dense oracle
    Eigen::MatrixXd X2(2, 1);
    X2 << 0.0, 1.0;
    Eigen::VectorXd y2(2);
    y2 << 1.0, -1.0;
    const auto hp2 = make_hp(1.5, 1.1, 0.2);
    CHECK(log_marginal_likelihood(X2, y2, hp2) ==
          doctest::Approx(oracle_lml(oracle_A(X2, 1.5, 1.1, 0.2), y2))
              .epsilon(1e-10));

    // random instances T <= 20: Cholesky path vs dense-inverse path
    std::mt19937 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 18);
        const int q = 1 + static_cast<int>(rng() % 3);
        const auto X = random_inputs(n, q, 500 + trial);
        const auto y = random_vector(n, 600 + trial);
        const double sl = 0.5 + 0.2 * (trial % 5);
        const double sf = 0.7 + 0.15 * (trial % 4);
        const double s2 = 0.05 + 0.1 * (trial % 3);
        const double chol_path =
            log_marginal_likelihood(X, y, make_hp(sl, sf, s2));
        const double dense_path = oracle_lml(oracle_A(X, sl, sf, s2), y);
        CHECK(chol_path ==
              doctest::Approx(dense_path).epsilon(1e-8));
    }
}

TEST_CASE("prediction against the dense posterior oracle") {
    const int n = 5;
    Eigen::MatrixXd X(n, 1);
    X << -2.0, -1.0, 0.0, 1.0, 2.0;
    Eigen::VectorXd y = (X.col(0).array() * 1.3).sin();

    TrainedGpr m;
    m.standardizer = Standardizer::fit(X, y);
    m.X = m.standardizer.transform_x(X);
    m.y = m.standardizer.transform_y(y);
    m.hp = make_hp(0.9, 1.2, 0.05);
    m.refactor();

    Eigen::MatrixXd Xq(3, 1);
    Xq << -0.5, 0.3, 1.7;
    const auto pred = m.predict(Xq, false);

    // oracle in the standardized space, then de-standardized
    const Eigen::MatrixXd Xs = m.X;
    const Eigen::MatrixXd Xqs = m.standardizer.transform_x(Xq);
    const Eigen::MatrixXd A = [&] {
        Eigen::MatrixXd a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                a(i, j) = oracle_kernel(Xs.row(i).transpose(),
                                        Xs.row(j).transpose(), 0.9, 1.2);
        a.diagonal().array() += 0.05;
        return a;
    }();
    const double beta = oracle_beta(A, m.y);
    const Eigen::MatrixXd Ainv = A.inverse();
    const Eigen::VectorXd resid = m.y.array() - beta;
    for (int t = 0; t < 3; ++t) {
        Eigen::VectorXd ks(n);
        for (int i = 0; i < n; ++i)
            ks[i] = oracle_kernel(Xs.row(i).transpose(), Xqs.row(t).transpose(),
                                  0.9, 1.2);
        const double mean_std = beta + ks.dot(Ainv * resid);
        const double var_std = 1.2 * 1.2 - ks.dot(Ainv * ks);
        CHECK(pred.mean[t] ==
              doctest::Approx(m.standardizer.destandardize_mean(mean_std))
                  .epsilon(1e-8));
        CHECK(pred.variance[t] ==
              doctest::Approx(m.standardizer.destandardize_var(var_std))
                  .epsilon(1e-8));
    }
}

TEST_CASE("prediction limit behaviour") {
    Eigen::MatrixXd X(6, 1);
    X << 0, 1, 2, 3, 4, 5;
    Eigen::VectorXd y(6);
    y << 0.3, 1.9, 0.7, -1.2, 0.4, 2.2;

    TrainedGpr m;
    m.standardizer = Standardizer::fit(X, y);
    m.X = m.standardizer.transform_x(X);
    m.y = m.standardizer.transform_y(y);
    m.hp = make_hp(1.0, 1.0, 1e-8);  // noise at the jitter floor
    m.refactor();

    // noiseless interpolation at a training point
    const auto at_train = m.predict(X.topRows(1), false);
    CHECK(std::abs(at_train.mean[0] - y[0]) / m.standardizer.y_std <= 1e-3);
    CHECK(at_train.variance[0] / m.standardizer.destandardize_var(1.0) <= 1e-3);

    // far query reverts to the prior: mean -> destandardized beta,
    // variance -> sigma_f^2 (+ sigma2 when included)
    Eigen::MatrixXd far(1, 1);
    far << 500.0;
    const auto p = m.predict(far, false);
    CHECK(p.mean[0] ==
          doctest::Approx(m.standardizer.destandardize_mean(m.beta))
              .epsilon(1e-6));
    CHECK(p.variance[0] ==
          doctest::Approx(m.standardizer.destandardize_var(1.0)).epsilon(1e-6));
    const auto pn = m.predict(far, true);
    CHECK(pn.variance[0] >= p.variance[0]);

    // variance never exceeds the prior amplitude
    Eigen::MatrixXd grid(50, 1);
    for (int i = 0; i < 50; ++i) grid(i, 0) = -5.0 + 0.3 * i;
    const auto pg = m.predict(grid, false);
    for (int i = 0; i < 50; ++i)
        CHECK(pg.variance[i] <=
              m.standardizer.destandardize_var(1.0) + 1e-10);

    Eigen::MatrixXd wrong(1, 2);
    CHECK_THROWS_AS(m.predict(wrong, false), DimensionMismatchError);
}

TEST_CASE("standardizer round-trip and constant column rejection") {
    const auto X = random_inputs(30, 3, 21);
    const auto y = random_vector(30, 22);
    const auto s = Standardizer::fit(X, y);
    const Eigen::VectorXd ys = s.transform_y(y);
    for (int i = 0; i < 30; ++i)
        CHECK(s.destandardize_mean(ys[i]) == doctest::Approx(y[i]).epsilon(1e-12));

    Eigen::MatrixXd Xc = X;
    Xc.col(1).setConstant(4.2);
    CHECK_THROWS_AS(Standardizer::fit(Xc, y), ConstantColumnError);
}

TEST_CASE("fit recovers a known GP draw") {
    // draw y ~ N(0, K + sigma2 I) at the true hyperparameters
    const int n = 200;
    const double true_sl = 1.2, true_sf = 1.5, true_s2 = 0.01;
    Eigen::MatrixXd X(n, 1);
    std::mt19937 rng(314);
    std::uniform_real_distribution<double> ux(-5.0, 5.0);
    for (int i = 0; i < n; ++i) X(i, 0) = ux(rng);
    const Eigen::MatrixXd A = oracle_A(X, true_sl, true_sf, true_s2);
    const Eigen::MatrixXd L = Eigen::LLT<Eigen::MatrixXd>(A).matrixL();
    const Eigen::VectorXd y = L * random_vector(n, 2718);

    FitOptions opts;
    opts.n_starts = 4;
    opts.seed = 5;
    const auto m = fit_gpr(X, y, opts);

    // truth mapped into the model's standardized space
    KernelHyperparams truth;
    truth.theta_l[0] = std::log10(true_sl / m.standardizer.x_std[0]);
    truth.theta_f = std::log10(true_sf / m.standardizer.y_std);
    truth.sigma2 = true_s2 / (m.standardizer.y_std * m.standardizer.y_std);
    const double ll_truth = log_marginal_likelihood(m.X, m.y, truth);
    const double ll_fit = log_marginal_likelihood(m.X, m.y, m.hp);
    CHECK(ll_fit >= ll_truth - 1e-6);
}

TEST_CASE("fit on pure noise keeps the total variance near 1") {
    const int n = 100;
    const auto X = random_inputs(n, 1, 33);
    const auto y = random_vector(n, 34);
    FitOptions opts;
    opts.n_starts = 6;
    opts.seed = 2;
    const auto m = fit_gpr(X, y, opts);
    const double sf2 = m.hp.sigma_f() * m.hp.sigma_f();
    const double total = sf2 + m.hp.sigma2;
    CHECK(total == doctest::Approx(1.0).epsilon(0.30));
}

TEST_CASE("fit is deterministic for a fixed seed") {
    const auto X = random_inputs(40, 2, 55);
    Eigen::VectorXd y =
        (X.col(0).array().sin() + 0.5 * X.col(1).array()).matrix();
    FitOptions opts;
    opts.n_starts = 3;
    opts.seed = 77;
    const auto m1 = fit_gpr(X, y, opts);
    const auto m2 = fit_gpr(X, y, opts);
    CHECK(m1.hp.theta_l[0] == m2.hp.theta_l[0]);
    CHECK(m1.hp.theta_f == m2.hp.theta_f);
    CHECK(m1.hp.sigma2 == m2.hp.sigma2);
    CHECK(m1.beta == m2.beta);
}

TEST_CASE("fit input validation") {
    FitOptions opts;
    CHECK_THROWS_AS(fit_gpr(random_inputs(4, 1, 1), random_vector(4, 2), opts),
                    TooFewPointsError);
    auto X = random_inputs(10, 2, 3);
    X.col(0).setConstant(1.0);
    CHECK_THROWS_AS(fit_gpr(X, random_vector(10, 4), opts),
                    ConstantColumnError);
}

TEST_CASE("training-set RMSE never exceeds the constant predictor") {
    const auto X = random_inputs(60, 2, 88);
    Eigen::VectorXd y =
        (2.0 * X.col(0).array().cos() + X.col(1).array()).matrix();
    FitOptions opts;
    opts.n_starts = 4;
    opts.seed = 8;
    const auto m = fit_gpr(X, y, opts);
    const auto pred = m.predict(X, false);
    double rmse_model = 0, rmse_const = 0;
    const double beta_mw = m.standardizer.destandardize_mean(m.beta);
    for (int i = 0; i < 60; ++i) {
        rmse_model += std::pow(pred.mean[i] - y[i], 2);
        rmse_const += std::pow(beta_mw - y[i], 2);
    }
    CHECK(rmse_model <= rmse_const + 1e-12);
}

TEST_CASE("Cholesky invariants on the trained model") {
    const auto X = random_inputs(30, 2, 101);
    Eigen::VectorXd y = X.col(0).array().sin().matrix();
    FitOptions opts;
    opts.n_starts = 2;
    opts.seed = 1;
    const auto m = fit_gpr(X, y, opts);

    Eigen::MatrixXd A = build_kernel_matrix(m.X, m.hp);
    A.diagonal().array() += m.hp.sigma2;
    CHECK((m.chol_L * m.chol_L.transpose() - A).norm() <= 1e-8 * A.norm());
    const Eigen::VectorXd resid =
        A * m.alpha - Eigen::VectorXd(m.y.array() - m.beta);
    CHECK(resid.norm() <= 1e-8 * m.y.norm());
}

TEST_CASE("model JSON round-trip preserves predictions") {
    const auto X = random_inputs(25, 2, 77);
    Eigen::VectorXd y = (X.col(0).array() * X.col(1).array()).matrix();
    FitOptions opts;
    opts.n_starts = 2;
    opts.seed = 3;
    const auto m = fit_gpr(X, y, opts);
    const auto restored = TrainedGpr::from_json(m.to_json());

    const auto Xq = random_inputs(5, 2, 78);
    const auto p1 = m.predict(Xq, true);
    const auto p2 = restored.predict(Xq, true);
    for (int i = 0; i < 5; ++i) {
        CHECK(p1.mean[i] == doctest::Approx(p2.mean[i]).epsilon(1e-10));
        CHECK(p1.variance[i] == doctest::Approx(p2.variance[i]).epsilon(1e-10));
    }

    CHECK_THROWS_AS(TrainedGpr::from_json("{not json"), ArtifactCorruptError);
    CHECK_THROWS_AS(TrainedGpr::from_json("{\"beta\": 1}"),
                    ArtifactCorruptError);
}
