#include "solarfc/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <nlohmann/json.hpp>

#include "solarfc/errors.hpp"
#include "solarfc/rng.hpp"

namespace solarfc {

void ClusterConfig::check() const {
    if (k < 1 || max_iter < 1 || n_restarts < 1 || !(tol > 0))
        throw ValidationError("invalid clustering config");
}

namespace {

using Pt = std::array<double, 2>;

double sqdist(const Pt& a, const Pt& b) {
    const double dx = a[0] - b[0];
    const double dy = a[1] - b[1];
    return dx * dx + dy * dy;
}

int nearest(const Pt& p, const std::vector<Pt>& centroids) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        const double d = sqdist(p, centroids[c]);
        if (d < best_d) {  // strict: ties keep the lowest id
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

// k-means++ seeding
std::vector<Pt> seed_centroids(const std::vector<Pt>& pts, int k,
                               std::mt19937_64& rng) {
    std::vector<Pt> centroids;
    centroids.push_back(pts[uniform_below(rng, pts.size())]);
    std::vector<double> d2(pts.size());
    while (static_cast<int>(centroids.size()) < k) {
        double total = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centroids) best = std::min(best, sqdist(pts[i], c));
            d2[i] = best;
            total += best;
        }
        std::size_t pick;
        if (total <= 0) {
            pick = uniform_below(rng, pts.size());
        } else {
            double target = uniform_real(rng, 0.0, total);
            pick = 0;
            for (; pick + 1 < pts.size(); ++pick) {
                target -= d2[pick];
                if (target <= 0) break;
            }
        }
        centroids.push_back(pts[pick]);
    }
    return centroids;
}

struct LloydResult {
    std::vector<Pt> centroids;
    std::vector<int> assign;  // 0-based
    double inertia = 0;
};

LloydResult lloyd(const std::vector<Pt>& pts, int k, int max_iter, double tol,
                  std::mt19937_64& rng) {
    LloydResult r;
    r.centroids = seed_centroids(pts, k, rng);
    r.assign.assign(pts.size(), -1);

    for (int it = 0; it < max_iter; ++it) {
        for (std::size_t i = 0; i < pts.size(); ++i)
            r.assign[i] = nearest(pts[i], r.centroids);

        std::vector<Pt> sums(k, Pt{0, 0});
        std::vector<int> counts(k, 0);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            sums[r.assign[i]][0] += pts[i][0];
            sums[r.assign[i]][1] += pts[i][1];
            ++counts[r.assign[i]];
        }
        double shift = 0;
        for (int c = 0; c < k; ++c) {
            Pt nc;
            if (counts[c] == 0) {
                // re-seed an empty cluster at the point farthest from its centroid
                std::size_t far = 0;
                double far_d = -1;
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    const double d = sqdist(pts[i], r.centroids[r.assign[i]]);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                nc = pts[far];
            } else {
                nc = Pt{sums[c][0] / counts[c], sums[c][1] / counts[c]};
            }
            shift = std::max(shift, sqdist(nc, r.centroids[c]));
            r.centroids[c] = nc;
        }
        if (shift < tol * tol) break;
    }
    // final assignment against converged centroids
    r.inertia = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        r.assign[i] = nearest(pts[i], r.centroids);
        r.inertia += sqdist(pts[i], r.centroids[r.assign[i]]);
    }
    // centroids must sit at assigned means (Lloyd fixpoint); one closing pass
    std::vector<Pt> sums(k, Pt{0, 0});
    std::vector<int> counts(k, 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        sums[r.assign[i]][0] += pts[i][0];
        sums[r.assign[i]][1] += pts[i][1];
        ++counts[r.assign[i]];
    }
    for (int c = 0; c < k; ++c)
        if (counts[c] > 0)
            r.centroids[c] = Pt{sums[c][0] / counts[c], sums[c][1] / counts[c]};
    r.inertia = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        r.assign[i] = nearest(pts[i], r.centroids);
        r.inertia += sqdist(pts[i], r.centroids[r.assign[i]]);
    }
    return r;
}

int modal_id(const std::map<int, int>& counts) {
    int best_id = 0, best_n = -1;
    for (const auto& [id, n] : counts) {
        if (n > best_n) {  // map iterates in id order; ties keep lowest id
            best_n = n;
            best_id = id;
        }
    }
    return best_id;
}

}  // namespace

std::array<double, 2> ClusterModel::normalize(double hour, double power) const {
    auto scale = [](double v, std::pair<double, double> mm) {
        return mm.second > mm.first ? (v - mm.first) / (mm.second - mm.first)
                                    : 0.0;
    };
    return {scale(hour, norm_params[0]), scale(power, norm_params[1])};
}

int ClusterModel::assign(double hour, double power) const {
    const auto p = normalize(hour, power);
    return nearest(p, centroids) + 1;
}

int ClusterModel::assign_forecast(int hour, int day_of_year) const {
    const int h = std::clamp(hour, 0, 23);
    const int d = std::clamp(day_of_year, 1, 366);
    const int id = hour_cluster_table[h][d - 1];
    return id > 0 ? id : hour_fallback[h];
}

ClusterModel fit_kmeans(const std::vector<ClusterPoint>& points,
                        const ClusterConfig& cfg) {
    cfg.check();
    if (static_cast<int>(points.size()) < cfg.k)
        throw TooFewPointsError("need at least k points for k-means");

    ClusterModel m;
    m.config = cfg;

    double hmin = points[0].hour, hmax = points[0].hour;
    double pmin = points[0].power, pmax = points[0].power;
    for (const auto& p : points) {
        hmin = std::min(hmin, p.hour);
        hmax = std::max(hmax, p.hour);
        pmin = std::min(pmin, p.power);
        pmax = std::max(pmax, p.power);
    }
    if (hmin == hmax && pmin == pmax && cfg.k > 1)
        throw DegenerateDataError("all points identical with k > 1");
    m.norm_params = {std::pair{hmin, hmax}, std::pair{pmin, pmax}};

    std::vector<std::array<double, 2>> pts(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        pts[i] = m.normalize(points[i].hour, points[i].power);

    LloydResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < cfg.n_restarts; ++r) {
        std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(r)));
        auto res = lloyd(pts, cfg.k, cfg.max_iter, cfg.tol, rng);
        if (res.inertia < best.inertia) best = std::move(res);
    }

    m.centroids = best.centroids;
    m.assignments.resize(best.assign.size());
    for (std::size_t i = 0; i < best.assign.size(); ++i)
        m.assignments[i] = best.assign[i] + 1;
    m.inertia_standard = best.inertia;

    std::vector<int> counts(cfg.k, 0);
    for (int a : best.assign) ++counts[a];
    m.inertia_weighted = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        m.inertia_weighted +=
            counts[best.assign[i]] * sqdist(pts[i], m.centroids[best.assign[i]]);

    // forecast-time lookup: modal cluster per (hour, ±15-day circular window)
    for (int h = 0; h < 24; ++h) {
        std::map<int, int> all_year;
        for (std::size_t i = 0; i < points.size(); ++i)
            if (static_cast<int>(std::lround(points[i].hour)) == h)
                ++all_year[m.assignments[i]];
        m.hour_fallback[h] = all_year.empty() ? 1 : modal_id(all_year);
        for (int d = 1; d <= 366; ++d) {
            std::map<int, int> window;
            for (std::size_t i = 0; i < points.size(); ++i) {
                if (static_cast<int>(std::lround(points[i].hour)) != h) continue;
                int diff = std::abs(points[i].day_of_year - d);
                diff = std::min(diff, 366 - diff);
                if (diff <= 15) ++window[m.assignments[i]];
            }
            m.hour_cluster_table[h][d - 1] = window.empty() ? 0 : modal_id(window);
        }
    }
    return m;
}

std::pair<double, double> objective(const ClusterModel& model,
                                    const std::vector<ClusterPoint>& points) {
    if (points.size() != model.assignments.size())
        throw LengthMismatchError("points do not match stored assignments");
    std::vector<int> counts(model.k(), 0);
    for (int a : model.assignments) ++counts[a - 1];
    double std_obj = 0, weighted = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const int c = model.assignments[i] - 1;
        auto scale = [&](double v, int coord) {
            const auto mm = model.norm_params[coord];
            return mm.second > mm.first ? (v - mm.first) / (mm.second - mm.first)
                                        : 0.0;
        };
        const std::array<double, 2> p{scale(points[i].hour, 0),
                                      scale(points[i].power, 1)};
        const double d = sqdist(p, model.centroids[c]);
        std_obj += d;
        weighted += counts[c] * d;
    }
    return {std_obj, weighted};
}

std::string ClusterModel::to_json() const {
    nlohmann::json j;
    j["config"] = {{"k", config.k},
                   {"max_iter", config.max_iter},
                   {"n_restarts", config.n_restarts},
                   {"seed", config.seed},
                   {"tol", config.tol}};
    j["centroids"] = centroids;
    j["norm_params"] = {{"hour", {norm_params[0].first, norm_params[0].second}},
                        {"power", {norm_params[1].first, norm_params[1].second}}};
    j["inertia_standard"] = inertia_standard;
    j["inertia_weighted"] = inertia_weighted;
    j["hour_cluster_table"] = hour_cluster_table;
    j["hour_fallback"] = hour_fallback;
    return j.dump(2);
}

ClusterModel ClusterModel::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ClusterModel m;
    m.config.k = j["config"]["k"];
    m.config.max_iter = j["config"]["max_iter"];
    m.config.n_restarts = j["config"]["n_restarts"];
    m.config.seed = j["config"]["seed"];
    m.config.tol = j["config"]["tol"];
    m.centroids = j["centroids"].get<std::vector<std::array<double, 2>>>();
    m.norm_params[0] = {j["norm_params"]["hour"][0], j["norm_params"]["hour"][1]};
    m.norm_params[1] = {j["norm_params"]["power"][0],
                        j["norm_params"]["power"][1]};
    m.inertia_standard = j["inertia_standard"];
    m.inertia_weighted = j["inertia_weighted"];
    m.hour_cluster_table =
        j["hour_cluster_table"].get<std::array<std::array<int, 366>, 24>>();
    m.hour_fallback = j["hour_fallback"].get<std::array<int, 24>>();
    return m;
}

}  // namespace solarfc
