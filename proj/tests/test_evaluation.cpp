#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "solarfc/errors.hpp"
#include "solarfc/evaluation.hpp"

using namespace solarfc;

TEST_CASE("metrics hand cases") {
    // errors (-1, +1): rmse = mae = 1, mse = 1
    const auto m = metrics({2.0, 4.0}, {3.0, 3.0}, 10.0);
    CHECK(m.rmse_mw == doctest::Approx(1.0));
    CHECK(m.mae_mw == doctest::Approx(1.0));
    CHECK(m.mse_mw2 == doctest::Approx(1.0));
    CHECK(m.rmse_pct == doctest::Approx(10.0));
    CHECK(m.mae_pct == doctest::Approx(10.0));
    CHECK(m.n_points == 2);

    // 1.23 MW on a 30 MW base -> 4.10%
    const auto m2 = metrics({1.23}, {0.0}, 30.0);
    CHECK(m2.rmse_mw == doctest::Approx(1.23));
    CHECK(m2.rmse_pct == doctest::Approx(4.10).epsilon(1e-3));

    // perfect prediction
    const auto m3 = metrics({5, 6, 7}, {5, 6, 7}, 30.0);
    CHECK(m3.rmse_mw == 0.0);
    CHECK(m3.mae_mw == 0.0);
}

TEST_CASE("metrics validation") {
    CHECK_THROWS_AS(metrics({}, {}, 30.0), EmptyInputError);
    CHECK_THROWS_AS(metrics({1, 2}, {1}, 30.0), LengthMismatchError);
}

TEST_CASE("metrics properties on random vectors") {
    std::mt19937 rng(17);
    std::normal_distribution<double> norm(0.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng() % 40;
        std::vector<double> a(n), p(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = norm(rng);
            p[i] = norm(rng);
        }
        const auto m = metrics(a, p, 30.0);
        CHECK(m.rmse_mw >= m.mae_mw - 1e-12);  // RMS dominates the mean
        CHECK(m.mse_mw2 == doctest::Approx(m.rmse_mw * m.rmse_mw));
        CHECK(m.rmse_pct == doctest::Approx(100.0 * m.rmse_mw / 30.0));

        // order of the points is irrelevant
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<double> a2(n), p2(n);
        for (std::size_t i = 0; i < n; ++i) {
            a2[i] = a[perm[i]];
            p2[i] = p[perm[i]];
        }
        const auto mp = metrics(a2, p2, 30.0);
        CHECK(mp.rmse_mw == doctest::Approx(m.rmse_mw).epsilon(1e-12));
        CHECK(mp.mae_mw == doctest::Approx(m.mae_mw).epsilon(1e-12));
    }
}

TEST_CASE("kfold sizes and determinism") {
    // 10 into 5 folds: all of size 2
    const auto f10 = kfold_split(10, 5, 1);
    REQUIRE(f10.size() == 5);
    for (const auto& f : f10) CHECK(f.size() == 2);

    // 11 into 5 folds: sizes 3,2,2,2,2
    const auto f11 = kfold_split(11, 5, 1);
    CHECK(f11[0].size() == 3);
    for (int i = 1; i < 5; ++i) CHECK(f11[i].size() == 2);

    // same seed, same partition; different seed, different partition
    CHECK(kfold_split(40, 4, 9) == kfold_split(40, 4, 9));
    CHECK(kfold_split(40, 4, 9) != kfold_split(40, 4, 10));
}

TEST_CASE("kfold is a partition of the index range") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 5 + rng() % 100;
        const std::size_t k = 2 + rng() % std::min<std::size_t>(n - 1, 8);
        const auto folds = kfold_split(n, k, trial);
        std::set<std::size_t> seen;
        std::size_t total = 0;
        for (const auto& f : folds) {
            total += f.size();
            for (auto i : f) {
                CHECK(i < n);
                CHECK(seen.insert(i).second);  // no duplicates across folds
            }
        }
        CHECK(total == n);
        // balanced: sizes differ by at most one
        std::size_t lo = n, hi = 0;
        for (const auto& f : folds) {
            lo = std::min(lo, f.size());
            hi = std::max(hi, f.size());
        }
        CHECK(hi - lo <= 1);
    }
}

TEST_CASE("kfold argument validation") {
    CHECK_THROWS_AS(kfold_split(3, 5, 1), TooFewPointsError);
    CHECK_THROWS_AS(kfold_split(10, 1, 1), TooFewPointsError);
    CHECK_NOTHROW(kfold_split(5, 5, 1));  // leave-one-out boundary
}

TEST_CASE("cross_validate on a smooth function scores well") {
    const int n = 60;
    Eigen::MatrixXd X(n, 1);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = -3.0 + 6.0 * i / (n - 1);
        y[i] = 10.0 + 8.0 * std::sin(X(i, 0));
    }
    FitOptions opts;
    opts.n_starts = 4;
    opts.seed = 3;
    const auto cv = cross_validate(X, y, opts, 30.0, 5, 7);
    REQUIRE(cv.per_fold.size() == 5);
    CHECK(cv.failures.empty());
    CHECK(cv.mean.rmse_pct < 2.0);

    // mean really is the arithmetic mean of the per-fold values
    double acc = 0;
    for (const auto& f : cv.per_fold) acc += f.rmse_mw;
    CHECK(cv.mean.rmse_mw == doctest::Approx(acc / 5).epsilon(1e-12));

    // fold assignments are echoed and form a partition
    std::size_t total = 0;
    for (const auto& f : cv.fold_assignments) total += f.size();
    CHECK(total == static_cast<std::size_t>(n));
}

TEST_CASE("cross_validate is deterministic") {
    const int n = 40;
    Eigen::MatrixXd X(n, 1);
    Eigen::VectorXd y(n);
    std::mt19937 rng(11);
    std::normal_distribution<double> norm;
    for (int i = 0; i < n; ++i) {
        X(i, 0) = norm(rng);
        y[i] = std::cos(2.0 * X(i, 0)) + 0.05 * norm(rng);
    }
    FitOptions opts;
    opts.n_starts = 2;
    opts.seed = 4;
    const auto a = cross_validate(X, y, opts, 30.0, 4, 21);
    const auto b = cross_validate(X, y, opts, 30.0, 4, 21);
    CHECK(a.mean.rmse_mw == b.mean.rmse_mw);
    CHECK(a.fold_assignments == b.fold_assignments);
}

TEST_CASE("fit_normal hand cases") {
    // (-1, 1): mean 0, sample std sqrt(2)
    const auto d = fit_normal({-1.0, 1.0});
    CHECK(d.eps_bar == doctest::Approx(0.0));
    CHECK(d.sigma_eps == doctest::Approx(std::sqrt(2.0)));
    CHECK(d.n == 2);

    // constant errors: zero spread
    const auto c = fit_normal({0.5, 0.5, 0.5, 0.5});
    CHECK(c.eps_bar == doctest::Approx(0.5));
    CHECK(c.sigma_eps == doctest::Approx(0.0));

    CHECK_THROWS_AS(fit_normal({}), EmptyInputError);
    CHECK_THROWS_AS(fit_normal({1.0}), TooFewPointsError);
}

TEST_CASE("z-star table") {
    CHECK(z_star_for_level(0.90) == doctest::Approx(1.645));
    CHECK(z_star_for_level(0.95) == doctest::Approx(1.960));
    CHECK(z_star_for_level(0.99) == doctest::Approx(2.576));
    CHECK_THROWS_AS(z_star_for_level(0.80), UnsupportedLevelError);
}

TEST_CASE("confidence interval arithmetic") {
    // frozen hand case: eps_bar 0.03, sigma 0.50, n 720, level 0.95
    ErrorDistribution d{0.03, 0.50, 720};
    const auto ci = confidence_interval(d, 0.95);
    CHECK(ci.z_star == doctest::Approx(1.96));
    CHECK(ci.lo_mw == doctest::Approx(-0.0065).epsilon(1e-2));
    CHECK(ci.hi_mw == doctest::Approx(0.0665).epsilon(1e-2));
    CHECK(ci.pop_lo_mw == doctest::Approx(0.03 - 1.96 * 0.50));
    CHECK(ci.pop_hi_mw == doctest::Approx(0.03 + 1.96 * 0.50));

    // zero spread degenerates to a point at the mean
    const auto c0 = confidence_interval({0.2, 0.0, 100}, 0.99);
    CHECK(c0.lo_mw == doctest::Approx(0.2));
    CHECK(c0.hi_mw == doctest::Approx(0.2));

    // width ordering across levels and 1/sqrt(n) shrinkage
    const double w95 = ci.hi_mw - ci.lo_mw;
    const auto ci90 = confidence_interval(d, 0.90);
    const auto ci99 = confidence_interval(d, 0.99);
    CHECK(ci90.hi_mw - ci90.lo_mw < w95);
    CHECK(ci99.hi_mw - ci99.lo_mw > w95);
    const auto ci4n = confidence_interval({0.03, 0.50, 2880}, 0.95);
    CHECK(ci4n.hi_mw - ci4n.lo_mw == doctest::Approx(w95 / 2.0).epsilon(1e-9));
}
