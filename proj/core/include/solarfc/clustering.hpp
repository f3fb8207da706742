#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace solarfc {

struct ClusterConfig {
    int k = 4;
    int max_iter = 100;
    int n_restarts = 10;
    std::uint64_t seed = 0;
    double tol = 1e-8;

    void check() const;
};

/// A point in clustering space: (hour-of-day, power).
struct ClusterPoint {
    double hour = 0.0;
    double power = 0.0;
    int day_of_year = 0;  // 1..366; drives forecast-time assignment
};

/// Fitted k-means model in min-max normalized (hour, power) space.
/// Cluster ids are 1-based.
class ClusterModel {
public:
    ClusterConfig config;
    std::vector<std::array<double, 2>> centroids;  // normalized space
    std::array<std::pair<double, double>, 2> norm_params;  // per-coord (min,max)
    std::vector<int> assignments;  // per training point, 1..K
    double inertia_standard = 0.0;  // sum of squared distances
    double inertia_weighted = 0.0;  // N_k-weighted variant
    // modal cluster per (hour 0-23, day-of-year 1-366), ±15-day window
    std::array<std::array<int, 366>, 24> hour_cluster_table{};
    std::array<int, 24> hour_fallback{};  // modal cluster per hour, whole year

    int k() const { return static_cast<int>(centroids.size()); }

    /// Nearest-centroid id for a raw (hour, power) point; ties -> lowest id.
    int assign(double hour, double power) const;

    /// Cluster for a forecast-time point where power is unknown.
    int assign_forecast(int hour, int day_of_year) const;

    std::string to_json() const;
    static ClusterModel from_json(const std::string& text);

    std::array<double, 2> normalize(double hour, double power) const;
};

ClusterModel fit_kmeans(const std::vector<ClusterPoint>& points,
                        const ClusterConfig& cfg);

/// Both objective variants over an already-assigned point set.
std::pair<double, double> objective(const ClusterModel& model,
                                    const std::vector<ClusterPoint>& points);

}  // namespace solarfc
