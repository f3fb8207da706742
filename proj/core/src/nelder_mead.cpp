#include "solarfc/nelder_mead.hpp"

#include <algorithm>
#include <numeric>

namespace solarfc {

NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, double initial_step, double diameter_tol,
    int max_evals) {
    const int n = static_cast<int>(x0.size());
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    NelderMeadResult out;
    int evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++evals;
        return f(x);
    };

    std::vector<Eigen::VectorXd> simplex(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (int i = 1; i <= n; ++i) simplex[i][i - 1] += initial_step;
    for (int i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);

    std::vector<int> order(n + 1);
    while (evals < max_evals) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return fv[a] < fv[b]; });
        {
            std::vector<Eigen::VectorXd> s2(n + 1);
            std::vector<double> f2(n + 1);
            for (int i = 0; i <= n; ++i) {
                s2[i] = simplex[order[i]];
                f2[i] = fv[order[i]];
            }
            simplex.swap(s2);
            fv.swap(f2);
        }

        double diam = 0;
        for (int i = 1; i <= n; ++i)
            diam = std::max(diam, (simplex[i] - simplex[0]).norm());
        if (diam < diameter_tol) {
            out.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) centroid += simplex[i];
        centroid /= n;

        const Eigen::VectorXd xr = centroid + alpha * (centroid - simplex[n]);
        const double fr = eval(xr);
        if (fr < fv[0]) {
            const Eigen::VectorXd xe = centroid + gamma * (xr - centroid);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            simplex[n] = xr;
            fv[n] = fr;
        } else {
            const Eigen::VectorXd xc =
                fr < fv[n] ? centroid + rho * (xr - centroid)
                           : centroid + rho * (simplex[n] - centroid);
            const double fc = eval(xc);
            if (fc < std::min(fr, fv[n])) {
                simplex[n] = xc;
                fv[n] = fc;
            } else {
                for (int i = 1; i <= n; ++i) {
                    simplex[i] = simplex[0] + sigma * (simplex[i] - simplex[0]);
                    fv[i] = eval(simplex[i]);
                }
            }
        }
    }

    const auto best =
        std::min_element(fv.begin(), fv.end()) - fv.begin();
    out.x = simplex[best];
    out.fval = fv[best];
    out.evaluations = evals;
    return out;
}

}  // namespace solarfc
