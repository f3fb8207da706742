#include "solarfc/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "solarfc/errors.hpp"
#include "solarfc/rng.hpp"

namespace solarfc {

namespace fs = std::filesystem;
using nlohmann::json;

// ------------------------------------------------------------------ logging

namespace {

int log_level() {
    static const int level = [] {
        const char* v = std::getenv("SOLARFC_LOG");
        if (!v) return 1;
        const std::string s = v;
        if (s == "quiet" || s == "0") return 0;
        if (s == "debug" || s == "2") return 2;
        return 1;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::fprintf(stderr, "[solarfc] %s\n", msg.c_str());
}

void log_debug(const std::string& msg) {
    if (log_level() >= 2) std::fprintf(stderr, "[solarfc] %s\n", msg.c_str());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFoundError(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

json metric_to_json(const MetricSet& m) {
    return {{"rmse_mw", m.rmse_mw},   {"mae_mw", m.mae_mw},
            {"mse_mw2", m.mse_mw2},   {"rmse_pct", m.rmse_pct},
            {"mae_pct", m.mae_pct},   {"n_points", m.n_points}};
}

MetricSet metric_from_json(const json& j) {
    MetricSet m;
    m.rmse_mw = j["rmse_mw"];
    m.mae_mw = j["mae_mw"];
    m.mse_mw2 = j["mse_mw2"];
    m.rmse_pct = j["rmse_pct"];
    m.mae_pct = j["mae_pct"];
    m.n_points = j["n_points"];
    return m;
}

}  // namespace

// ----------------------------------------------------------- PipelineConfig

std::string PipelineConfig::to_json() const {
    json j;
    j["data"] = {{"path", data_path}, {"columns", columns}};
    j["site"] = {{"name", site.name},
                 {"capacity_mw", site.capacity_mw},
                 {"latitude_deg", site.latitude_deg},
                 {"longitude_deg", site.longitude_deg}};
    j["clean"] = {{"policy", clean_policy.kind == CleanPolicy::Kind::Drop
                                 ? "drop"
                                 : "interpolate"},
                  {"max_gap_hours", clean_policy.max_gap_hours}};
    j["holdout"] = {{"n_days", holdout.n_days}, {"seed", holdout.seed}};
    j["clustering"] = {{"k", clustering.k},
                       {"max_iter", clustering.max_iter},
                       {"n_restarts", clustering.n_restarts},
                       {"seed", clustering.seed},
                       {"tol", clustering.tol}};
    j["features"] = {{"threshold", features.threshold},
                     {"force_include", features.force_include},
                     {"force_exclude", features.force_exclude}};
    j["gpr"] = {{"n_starts", gpr.n_starts},
                {"max_evals", gpr.max_evals},
                {"ard", gpr.ard},
                {"seed", gpr.seed},
                {"max_train_points", gpr_max_train_points}};
    j["cv"] = {{"k", cv.k}, {"seed", cv.seed}};
    j["ci_levels"] = ci_levels;
    j["output_dir"] = output_dir;
    j["metric_base"] =
        metric_base == MetricBase::Capacity ? "capacity" : "max_observed";
    return j.dump(2);
}

PipelineConfig PipelineConfig::from_json(const std::string& text) {
    json j = json::parse(text);
    PipelineConfig c;
    c.data_path = j["data"]["path"];
    if (j["data"].contains("columns"))
        c.columns = j["data"]["columns"].get<ColumnSchema>();
    c.site.name = j["site"].value("name", "site");
    c.site.capacity_mw = j["site"]["capacity_mw"];
    c.site.latitude_deg = j["site"].value("latitude_deg", 0.0);
    c.site.longitude_deg = j["site"].value("longitude_deg", 0.0);
    if (j.contains("clean")) {
        const std::string p = j["clean"].value("policy", "drop");
        c.clean_policy.kind = p == "interpolate" ? CleanPolicy::Kind::Interpolate
                                                 : CleanPolicy::Kind::Drop;
        c.clean_policy.max_gap_hours = j["clean"].value("max_gap_hours", 1);
    }
    if (j.contains("holdout")) {
        c.holdout.n_days = j["holdout"].value("n_days", 30);
        c.holdout.seed = j["holdout"].value("seed", 42);
    }
    if (j.contains("clustering")) {
        const auto& jc = j["clustering"];
        c.clustering.k = jc.value("k", 4);
        c.clustering.max_iter = jc.value("max_iter", 100);
        c.clustering.n_restarts = jc.value("n_restarts", 10);
        c.clustering.seed = jc.value("seed", 0);
        c.clustering.tol = jc.value("tol", 1e-8);
    }
    if (j.contains("features")) {
        const auto& jf = j["features"];
        c.features.threshold = jf.value("threshold", 0.10);
        if (jf.contains("force_include"))
            c.features.force_include =
                jf["force_include"].get<std::vector<std::string>>();
        if (jf.contains("force_exclude"))
            c.features.force_exclude =
                jf["force_exclude"].get<std::vector<std::string>>();
    }
    if (j.contains("gpr")) {
        const auto& jg = j["gpr"];
        c.gpr.n_starts = jg.value("n_starts", 8);
        c.gpr.max_evals = jg.value("max_evals", 2000);
        c.gpr.ard = jg.value("ard", false);
        c.gpr.seed = jg.value("seed", 0);
        c.gpr_max_train_points = jg.value("max_train_points", 400);
    }
    if (j.contains("cv")) {
        c.cv.k = j["cv"].value("k", 5);
        c.cv.seed = j["cv"].value("seed", 11);
    }
    if (j.contains("ci_levels"))
        c.ci_levels = j["ci_levels"].get<std::vector<double>>();
    c.output_dir = j.value("output_dir", "out");
    if (j.value("metric_base", "capacity") == "max_observed")
        c.metric_base = MetricBase::MaxObserved;
    return c;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
    return from_json(read_file(path));
}

// ----------------------------------------------------------------- Manifest

std::string Manifest::to_json() const {
    json j;
    j["config"] = json::parse(config_echo);
    j["dataset_fingerprint"] = dataset_fingerprint;
    j["train_fingerprint"] = train_fingerprint;
    j["holdout_fingerprint"] = holdout_fingerprint;
    j["holdout_days"] = holdout_days;
    j["selected_features"] = selected_features;
    j["cluster_model_path"] = cluster_model_path;
    j["model_paths"] = model_paths;
    j["train_csv_path"] = train_csv_path;
    j["holdout_csv_path"] = holdout_csv_path;
    json cl = json::array();
    for (const auto& c : clusters)
        cl.push_back({{"cluster", c.cluster},
                      {"n_train", c.n_train},
                      {"n_fit", c.n_fit},
                      {"cv_mean", metric_to_json(c.cv_mean)},
                      {"cv_failed_folds", c.cv_failed_folds}});
    j["clusters"] = cl;
    j["cv_pooled"] = metric_to_json(cv_pooled);
    j["tool_version"] = tool_version;
    j["created_at"] = created_at;
    j["train_seconds"] = train_seconds;
    return j.dump(2);
}

Manifest Manifest::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ArtifactCorruptError(std::string("manifest unparseable: ") +
                                   e.what());
    }
    Manifest m;
    m.config_echo = j["config"].dump(2);
    m.dataset_fingerprint = j["dataset_fingerprint"];
    m.train_fingerprint = j["train_fingerprint"];
    m.holdout_fingerprint = j["holdout_fingerprint"];
    m.holdout_days = j["holdout_days"].get<std::vector<std::string>>();
    m.selected_features = j["selected_features"].get<std::vector<std::string>>();
    m.cluster_model_path = j["cluster_model_path"];
    m.model_paths = j["model_paths"].get<std::vector<std::string>>();
    m.train_csv_path = j["train_csv_path"];
    m.holdout_csv_path = j["holdout_csv_path"];
    for (const auto& jc : j["clusters"]) {
        ClusterSummary c;
        c.cluster = jc["cluster"];
        c.n_train = jc["n_train"];
        c.n_fit = jc["n_fit"];
        c.cv_mean = metric_from_json(jc["cv_mean"]);
        c.cv_failed_folds = jc["cv_failed_folds"];
        m.clusters.push_back(c);
    }
    m.cv_pooled = metric_from_json(j["cv_pooled"]);
    m.tool_version = j.value("tool_version", "");
    m.created_at = j.value("created_at", "");
    m.train_seconds = j.value("train_seconds", 0.0);
    return m;
}

Manifest Manifest::load(const std::string& path) {
    return from_json(read_file(path));
}

// ------------------------------------------------------------- cmd_validate

int cmd_validate(const PipelineConfig& cfg) {
    const auto d = load_csv(cfg.data_path, cfg.columns, cfg.site);
    const auto rep = validate_dataset(d);
    fs::create_directories(cfg.output_dir);
    write_file(cfg.output_dir + "/validation_report.json", rep.to_json());
    log_info("validated " + std::to_string(rep.row_count) + " rows, " +
             std::to_string(rep.missing_cells.size()) + " missing cells, " +
             std::to_string(rep.range_violations.size()) + " range violations, " +
             std::to_string(rep.gap_list.size()) + " gaps");
    return rep.clean() ? 0 : 1;
}

// ---------------------------------------------------------------- training

namespace {

struct TrainedPipeline {
    ClusterModel cluster_model;
    FeatureSelection selection;
    CorrelationReport correlations;
    std::vector<TrainedGpr> models;  // index c-1
    std::vector<ClusterSummary> summaries;
    MetricSet cv_pooled;
    HoldoutSplit split;
    Dataset cleaned;
    double base_mw = 0.0;
};

double metric_base_mw(const PipelineConfig& cfg, const Dataset& train) {
    if (cfg.metric_base == PipelineConfig::MetricBase::Capacity)
        return cfg.site.capacity_mw;
    double mx = 0;
    for (const auto& r : train.records) mx = std::max(mx, r.power_mw);
    if (!(mx > 0)) throw ValidationError("no positive power in training data");
    return mx;
}

Eigen::MatrixXd feature_matrix(const std::vector<const SampleRecord*>& recs,
                               const std::vector<int>& feat_idx) {
    Eigen::MatrixXd X(recs.size(), feat_idx.size());
    for (std::size_t i = 0; i < recs.size(); ++i)
        for (std::size_t f = 0; f < feat_idx.size(); ++f)
            X(i, f) = recs[i]->feature(feat_idx[f]);
    return X;
}

/// Deterministic even-stride subsample of 0..n-1 down to at most cap.
std::vector<std::size_t> strided_subsample(std::size_t n, std::size_t cap) {
    std::vector<std::size_t> idx;
    if (cap == 0 || n <= cap) {
        idx.resize(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        return idx;
    }
    for (std::size_t i = 0; i < cap; ++i)
        idx.push_back(i * n / cap);
    return idx;
}

TrainedPipeline run_training(const PipelineConfig& cfg, int k_override) {
    TrainedPipeline tp;

    log_debug("loading " + cfg.data_path);
    const auto raw = load_csv(cfg.data_path, cfg.columns, cfg.site);
    tp.cleaned = clean(raw, cfg.clean_policy);
    tp.split = split_holdout(tp.cleaned, cfg.holdout.n_days, cfg.holdout.seed);
    const Dataset& train = tp.split.train;
    const double base = metric_base_mw(cfg, train);
    tp.base_mw = base;

    ClusterConfig ccfg = cfg.clustering;
    if (k_override > 0) ccfg.k = k_override;

    std::vector<ClusterPoint> points(train.records.size());
    for (std::size_t i = 0; i < train.records.size(); ++i)
        points[i] = ClusterPoint{static_cast<double>(train.records[i].timestamp.hour),
                                 train.records[i].power_mw,
                                 train.records[i].timestamp.day_of_year()};
    tp.cluster_model = fit_kmeans(points, ccfg);
    log_info("k-means: k=" + std::to_string(ccfg.k) + " inertia=" +
             std::to_string(tp.cluster_model.inertia_standard));

    tp.correlations = correlation_report(train);
    tp.selection = select_features(tp.correlations, cfg.features);
    const auto feat_idx = tp.selection.indices();

    double pooled_rmse = 0, pooled_mae = 0, pooled_mse = 0;
    std::size_t pooled_n = 0;
    for (int c = 1; c <= ccfg.k; ++c) {
        std::vector<const SampleRecord*> recs;
        for (std::size_t i = 0; i < train.records.size(); ++i)
            if (tp.cluster_model.assignments[i] == c)
                recs.push_back(&train.records[i]);
        if (recs.size() < 5 * cfg.cv.k)
            throw TooFewPointsError("cluster " + std::to_string(c) + " has " +
                                    std::to_string(recs.size()) +
                                    " points; too few for fitting and CV");

        const auto keep = strided_subsample(
            recs.size(), static_cast<std::size_t>(
                             std::max(cfg.gpr_max_train_points, 0)));
        std::vector<const SampleRecord*> fit_recs;
        for (auto i : keep) fit_recs.push_back(recs[i]);

        Eigen::MatrixXd X = feature_matrix(fit_recs, feat_idx);
        Eigen::VectorXd y(fit_recs.size());
        for (std::size_t i = 0; i < fit_recs.size(); ++i)
            y[i] = fit_recs[i]->power_mw;

        FitOptions opts = cfg.gpr;
        opts.seed = mix_seed(cfg.gpr.seed, static_cast<std::uint64_t>(c));
        log_info("fitting cluster " + std::to_string(c) + " (" +
                 std::to_string(fit_recs.size()) + " of " +
                 std::to_string(recs.size()) + " points)");
        tp.models.push_back(fit_gpr(X, y, opts));

        const auto cvres = cross_validate(
            X, y, opts, base, cfg.cv.k,
            mix_seed(cfg.cv.seed, static_cast<std::uint64_t>(c)));

        ClusterSummary cs;
        cs.cluster = c;
        cs.n_train = recs.size();
        cs.n_fit = fit_recs.size();
        cs.cv_mean = cvres.mean;
        cs.cv_failed_folds = cvres.failures.size();
        tp.summaries.push_back(cs);

        pooled_rmse += cvres.mean.rmse_mw * cvres.mean.n_points;
        pooled_mae += cvres.mean.mae_mw * cvres.mean.n_points;
        pooled_mse += cvres.mean.mse_mw2 * cvres.mean.n_points;
        pooled_n += cvres.mean.n_points;
        log_info("cluster " + std::to_string(c) + " CV rmse_pct=" +
                 std::to_string(cvres.mean.rmse_pct));
    }
    tp.cv_pooled.rmse_mw = pooled_rmse / pooled_n;
    tp.cv_pooled.mae_mw = pooled_mae / pooled_n;
    tp.cv_pooled.mse_mw2 = pooled_mse / pooled_n;
    tp.cv_pooled.rmse_pct = 100.0 * tp.cv_pooled.rmse_mw / base;
    tp.cv_pooled.mae_pct = 100.0 * tp.cv_pooled.mae_mw / base;
    tp.cv_pooled.n_points = pooled_n;
    return tp;
}

std::string now_iso() {
    const auto t = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
    return buf;
}

}  // namespace

Manifest cmd_train(const PipelineConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto tp = run_training(cfg, 0);

    fs::create_directories(cfg.output_dir);
    const std::string out = cfg.output_dir;

    Manifest m;
    m.config_echo = cfg.to_json();
    m.dataset_fingerprint = fingerprint(tp.cleaned);
    m.train_fingerprint = fingerprint(tp.split.train);
    m.holdout_fingerprint = fingerprint(tp.split.holdout);
    for (auto day : tp.split.holdout_days) {
        const auto ts = Timestamp::from_hour_number(day * 24);
        char buf[16];
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", ts.year, ts.month,
                      ts.day);
        m.holdout_days.push_back(buf);
    }
    m.selected_features = tp.selection.selected;

    m.cluster_model_path = out + "/cluster_model.json";
    write_file(m.cluster_model_path, tp.cluster_model.to_json());
    write_file(out + "/correlations.json", tp.correlations.to_json());
    write_file(out + "/correlations.csv", tp.correlations.to_csv());
    write_file(out + "/feature_selection.json", tp.selection.to_json());
    for (std::size_t i = 0; i < tp.models.size(); ++i) {
        const std::string path =
            out + "/model_cluster_" + std::to_string(i + 1) + ".json";
        write_file(path, tp.models[i].to_json());
        m.model_paths.push_back(path);
    }
    m.train_csv_path = out + "/train.csv";
    m.holdout_csv_path = out + "/holdout.csv";
    write_csv(tp.split.train, m.train_csv_path);
    write_csv(tp.split.holdout, m.holdout_csv_path);

    m.clusters = tp.summaries;
    m.cv_pooled = tp.cv_pooled;

    json cvj = json::array();
    for (const auto& c : tp.summaries)
        cvj.push_back({{"cluster", c.cluster},
                       {"cv_mean", metric_to_json(c.cv_mean)}});
    write_file(out + "/cv_results.json",
               json{{"per_cluster", cvj},
                    {"pooled", metric_to_json(tp.cv_pooled)}}
                   .dump(2));

    m.created_at = now_iso();
    m.train_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    write_file(out + "/manifest.json", m.to_json());
    log_info("train complete in " + std::to_string(m.train_seconds) + " s");
    return m;
}

// --------------------------------------------------------------- prediction

namespace {

struct LoadedModels {
    PipelineConfig cfg;
    ClusterModel cluster_model;
    std::vector<int> feat_idx;
    std::vector<TrainedGpr> models;
};

LoadedModels load_models(const Manifest& m) {
    LoadedModels lm;
    lm.cfg = PipelineConfig::from_json(m.config_echo);
    lm.cluster_model = ClusterModel::from_json(read_file(m.cluster_model_path));
    FeatureSelection sel;
    sel.selected = m.selected_features;
    lm.feat_idx = sel.indices();
    for (const auto& p : m.model_paths)
        lm.models.push_back(TrainedGpr::from_json(read_file(p)));
    return lm;
}

struct HourForecast {
    int cluster = 0;
    double mean = 0.0;
    double variance = 0.0;
};

HourForecast forecast_record(const LoadedModels& lm, const SampleRecord& r) {
    HourForecast f;
    f.cluster = lm.cluster_model.assign_forecast(r.timestamp.hour,
                                                 r.timestamp.day_of_year());
    const auto& model = lm.models.at(static_cast<std::size_t>(f.cluster - 1));
    Eigen::MatrixXd Xq(1, lm.feat_idx.size());
    for (std::size_t c = 0; c < lm.feat_idx.size(); ++c)
        Xq(0, c) = r.feature(lm.feat_idx[c]);
    const auto pred = model.predict(Xq, true);
    f.mean = pred.mean[0];
    f.variance = pred.variance[0];
    return f;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

void cmd_predict(const Manifest& manifest, const std::string& horizon_csv,
                 const std::string& out_csv) {
    const auto lm = load_models(manifest);

    std::string header = "timestamp,cluster,mean_mw,variance_mw2";
    for (double level : lm.cfg.ci_levels) {
        const int pct = static_cast<int>(std::lround(level * 100));
        header += ",ci" + std::to_string(pct) + "_lo,ci" + std::to_string(pct) +
                  "_hi";
    }
    std::string body;

    Dataset horizon;
    bool empty_horizon = false;
    try {
        horizon = load_csv(horizon_csv, lm.cfg.columns, lm.cfg.site, true);
    } catch (const EmptyDatasetError&) {
        empty_horizon = true;
    }
    if (!empty_horizon) {
        for (const auto& r : horizon.records) {
            const auto f = forecast_record(lm, r);
            body += r.timestamp.to_string() + "," + std::to_string(f.cluster) +
                    "," + fmt(f.mean) + "," + fmt(f.variance);
            const double sd = std::sqrt(std::max(f.variance, 0.0));
            for (double level : lm.cfg.ci_levels) {
                const double z = z_star_for_level(level);
                body += "," + fmt(f.mean - z * sd) + "," + fmt(f.mean + z * sd);
            }
            body += "\n";
        }
    }
    write_file(out_csv, header + "\n" + body);
    log_info("wrote forecasts to " + out_csv);
}

EvaluateResult cmd_evaluate(const Manifest& manifest,
                            const std::string& out_dir) {
    const auto lm = load_models(manifest);
    const auto holdout =
        load_csv(manifest.holdout_csv_path, identity_schema(), lm.cfg.site);
    const double base =
        lm.cfg.metric_base == PipelineConfig::MetricBase::Capacity
            ? lm.cfg.site.capacity_mw
            : [&] {
                  double mx = 0;
                  for (const auto& r : holdout.records)
                      mx = std::max(mx, r.power_mw);
                  return mx > 0 ? mx : lm.cfg.site.capacity_mw;
              }();

    EvaluateResult res;
    std::vector<double> actual, predicted, errors;
    std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_cluster;
    std::string plot =
        "timestamp,actual_mw,predicted_mw,variance_mw2,ci_lo,ci_hi\n";
    for (const auto& r : holdout.records) {
        const auto f = forecast_record(lm, r);
        actual.push_back(r.power_mw);
        predicted.push_back(f.mean);
        errors.push_back(r.power_mw - f.mean);
        by_cluster[f.cluster].first.push_back(r.power_mw);
        by_cluster[f.cluster].second.push_back(f.mean);
        const double sd = std::sqrt(std::max(f.variance, 0.0));
        const double z = z_star_for_level(0.95);
        plot += r.timestamp.to_string() + "," + fmt(r.power_mw) + "," +
                fmt(f.mean) + "," + fmt(f.variance) + "," +
                fmt(f.mean - z * sd) + "," + fmt(f.mean + z * sd) + "\n";
    }

    res.pooled = metrics(actual, predicted, base);
    for (const auto& [c, av] : by_cluster)
        res.per_cluster.emplace_back(c, metrics(av.first, av.second, base));
    res.error_dist = fit_normal(errors);
    for (double level : lm.cfg.ci_levels)
        res.intervals.push_back(confidence_interval(res.error_dist, level));

    fs::create_directories(out_dir);
    json j;
    j["pooled"] = metric_to_json(res.pooled);
    j["per_cluster"] = json::array();
    for (const auto& [c, ms] : res.per_cluster)
        j["per_cluster"].push_back({{"cluster", c}, {"metrics", metric_to_json(ms)}});
    j["error_distribution"] = {{"eps_bar", res.error_dist.eps_bar},
                               {"sigma_eps", res.error_dist.sigma_eps},
                               {"n", res.error_dist.n}};
    j["confidence_intervals"] = json::array();
    for (const auto& ci : res.intervals)
        j["confidence_intervals"].push_back({{"level", ci.level},
                                             {"z_star", ci.z_star},
                                             {"lo_mw", ci.lo_mw},
                                             {"hi_mw", ci.hi_mw},
                                             {"pop_lo_mw", ci.pop_lo_mw},
                                             {"pop_hi_mw", ci.pop_hi_mw}});
    write_file(out_dir + "/metrics.json", j.dump(2));
    write_file(out_dir + "/plot_data.csv", plot);
    log_info("hold-out rmse_pct=" + std::to_string(res.pooled.rmse_pct));
    return res;
}

// -------------------------------------------------------------- sensitivity

std::vector<SensitivityRow> cmd_sensitivity(const PipelineConfig& cfg,
                                            int k_min, int k_max) {
    if (k_min < 1 || k_max < k_min)
        throw ValidationError("bad sensitivity k range");
    std::vector<SensitivityRow> rows;
    for (int k = k_min; k <= k_max; ++k) {
        SensitivityRow row;
        row.k = k;
        try {
            const auto tp = run_training(cfg, k);
            row.ok = true;
            row.rmse_pct = tp.cv_pooled.rmse_pct;
            row.mae_pct = tp.cv_pooled.mae_pct;
            row.mse_pct =
                100.0 * tp.cv_pooled.mse_mw2 / (tp.base_mw * tp.base_mw);
        } catch (const Error& e) {
            row.ok = false;
            row.error = e.what();
            log_info("sensitivity k=" + std::to_string(k) + " failed: " +
                     row.error);
        }
        rows.push_back(row);
    }

    fs::create_directories(cfg.output_dir);
    std::string csv = "k,status,rmse_pct,mae_pct,mse_pct\n";
    for (const auto& r : rows) {
        csv += std::to_string(r.k) + ",";
        csv += r.ok ? "ok" : "failed";
        if (r.ok)
            csv += "," + fmt(r.rmse_pct) + "," + fmt(r.mae_pct) + "," +
                   fmt(r.mse_pct);
        else
            csv += ",,,";
        csv += "\n";
    }
    write_file(cfg.output_dir + "/sensitivity.csv", csv);
    return rows;
}

}  // namespace solarfc
