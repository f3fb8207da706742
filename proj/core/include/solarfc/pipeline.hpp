#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "solarfc/clustering.hpp"
#include "solarfc/correlation.hpp"
#include "solarfc/dataset.hpp"
#include "solarfc/evaluation.hpp"
#include "solarfc/gpr.hpp"

namespace solarfc {

inline constexpr const char* kToolVersion = "0.1.0";

struct PipelineConfig {
    std::string data_path;
    ColumnSchema columns = identity_schema();
    SiteMeta site;
    CleanPolicy clean_policy = CleanPolicy::drop();
    struct {
        std::size_t n_days = 30;
        std::uint64_t seed = 42;
    } holdout;
    ClusterConfig clustering;
    FeaturePolicy features;
    FitOptions gpr;
    // subsample cap per cluster before GPR fitting; 0 = use everything
    int gpr_max_train_points = 400;
    struct {
        std::size_t k = 5;
        std::uint64_t seed = 11;
    } cv;
    std::vector<double> ci_levels = {0.90, 0.95, 0.99};
    std::string output_dir = "out";
    enum class MetricBase { Capacity, MaxObserved } metric_base =
        MetricBase::Capacity;

    std::string to_json() const;
    static PipelineConfig from_json(const std::string& text);
    static PipelineConfig load(const std::string& path);
};

struct ClusterSummary {
    int cluster = 0;
    std::size_t n_train = 0;
    std::size_t n_fit = 0;  // after the subsample cap
    MetricSet cv_mean;
    std::size_t cv_failed_folds = 0;
};

struct Manifest {
    std::string config_echo;  // JSON text of the config used
    std::uint64_t dataset_fingerprint = 0;
    std::uint64_t train_fingerprint = 0;
    std::uint64_t holdout_fingerprint = 0;
    std::vector<std::string> holdout_days;  // ISO dates
    std::vector<std::string> selected_features;
    std::string cluster_model_path;
    std::vector<std::string> model_paths;  // index c-1 -> cluster c artifact
    std::string train_csv_path;
    std::string holdout_csv_path;
    std::vector<ClusterSummary> clusters;
    MetricSet cv_pooled;  // point-weighted across clusters
    std::string tool_version = kToolVersion;
    std::string created_at;          // excluded from determinism contract
    double train_seconds = 0.0;      // likewise

    std::string to_json() const;
    static Manifest from_json(const std::string& text);
    static Manifest load(const std::string& path);
};

/// Wraps load + validate; writes <out>/validation_report.json.
/// Returns 0 when the report is clean, 1 otherwise.
int cmd_validate(const PipelineConfig& cfg);

/// Full training run; writes artifacts and <out>/manifest.json.
Manifest cmd_train(const PipelineConfig& cfg);

/// Forecast every hour of the horizon CSV; writes <out_csv>.
void cmd_predict(const Manifest& manifest, const std::string& horizon_csv,
                 const std::string& out_csv);

struct EvaluateResult {
    MetricSet pooled;
    std::vector<std::pair<int, MetricSet>> per_cluster;
    ErrorDistribution error_dist;
    std::vector<ConfidenceInterval> intervals;
};

/// Hold-out evaluation; writes <out>/metrics.json and <out>/plot_data.csv.
EvaluateResult cmd_evaluate(const Manifest& manifest,
                            const std::string& out_dir);

struct SensitivityRow {
    int k = 0;
    bool ok = false;
    std::string error;
    double rmse_pct = 0.0;
    double mae_pct = 0.0;
    double mse_pct = 0.0;  // 100 * mse / base^2
};

/// Train + CV for each k in [k_min, k_max]; writes <out>/sensitivity.csv.
std::vector<SensitivityRow> cmd_sensitivity(const PipelineConfig& cfg,
                                            int k_min, int k_max);

}  // namespace solarfc
