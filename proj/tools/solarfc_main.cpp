// Command-line front end: validate | train | predict | evaluate | sensitivity.
// Exit codes: 0 success, 1 validation failure, 2 runtime error.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "solarfc/errors.hpp"
#include "solarfc/pipeline.hpp"

namespace {

using solarfc::Manifest;
using solarfc::PipelineConfig;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    // flag overrides; empty/negative means "keep config value"
    int holdout_days = -1;
    long long holdout_seed = -1;
    int clusters_k = -1;
    int gpr_starts = -1;
    int gpr_max_evals = -1;
    int gpr_max_train_points = -1;
    int cv_k = -1;
    std::string data_path;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "pipeline config JSON")
        ->required();
    cmd->add_option("--out", o.out_dir, "output directory (overrides config)");
    cmd->add_option("--data", o.data_path, "input CSV (overrides config)");
    cmd->add_option("--holdout-days", o.holdout_days);
    cmd->add_option("--holdout-seed", o.holdout_seed);
    cmd->add_option("--clusters-k", o.clusters_k);
    cmd->add_option("--gpr-starts", o.gpr_starts);
    cmd->add_option("--gpr-max-evals", o.gpr_max_evals);
    cmd->add_option("--gpr-max-train-points", o.gpr_max_train_points);
    cmd->add_option("--cv-k", o.cv_k);
}

PipelineConfig resolve(const CommonOpts& o) {
    auto cfg = PipelineConfig::load(o.config_path);
    if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
    if (!o.data_path.empty()) cfg.data_path = o.data_path;
    if (o.holdout_days >= 0) cfg.holdout.n_days = o.holdout_days;
    if (o.holdout_seed >= 0) cfg.holdout.seed = o.holdout_seed;
    if (o.clusters_k >= 1) cfg.clustering.k = o.clusters_k;
    if (o.gpr_starts >= 1) cfg.gpr.n_starts = o.gpr_starts;
    if (o.gpr_max_evals >= 1) cfg.gpr.max_evals = o.gpr_max_evals;
    if (o.gpr_max_train_points >= 0)
        cfg.gpr_max_train_points = o.gpr_max_train_points;
    if (o.cv_k >= 2) cfg.cv.k = o.cv_k;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"clustered Matern-5/2 GPR solar power forecaster"};
    app.require_subcommand(1);

    CommonOpts ov, ot, op, oe, os;
    std::string horizon_csv, manifest_path, forecast_out;
    int k_min = 1, k_max = 8;

    auto* validate = app.add_subcommand("validate", "check an input CSV");
    add_common(validate, ov);

    auto* train = app.add_subcommand("train", "full training run");
    add_common(train, ot);

    auto* predict = app.add_subcommand("predict", "forecast a horizon CSV");
    add_common(predict, op);
    predict->add_option("--horizon", horizon_csv, "horizon CSV")->required();
    predict->add_option("--manifest", manifest_path,
                        "manifest path (default <out>/manifest.json)");
    predict->add_option("--forecast-out", forecast_out,
                        "output CSV (default <out>/forecast.csv)");

    auto* evaluate = app.add_subcommand("evaluate", "hold-out evaluation");
    add_common(evaluate, oe);
    evaluate->add_option("--manifest", manifest_path);

    auto* sensitivity =
        app.add_subcommand("sensitivity", "cluster-count sensitivity study");
    add_common(sensitivity, os);
    sensitivity->add_option("--k-min", k_min);
    sensitivity->add_option("--k-max", k_max);

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            return solarfc::cmd_validate(resolve(ov));
        }
        if (train->parsed()) {
            solarfc::cmd_train(resolve(ot));
            return 0;
        }
        if (predict->parsed()) {
            const auto cfg = resolve(op);
            const std::string mpath = manifest_path.empty()
                                          ? cfg.output_dir + "/manifest.json"
                                          : manifest_path;
            const std::string fout = forecast_out.empty()
                                         ? cfg.output_dir + "/forecast.csv"
                                         : forecast_out;
            solarfc::cmd_predict(Manifest::load(mpath), horizon_csv, fout);
            return 0;
        }
        if (evaluate->parsed()) {
            const auto cfg = resolve(oe);
            const std::string mpath = manifest_path.empty()
                                          ? cfg.output_dir + "/manifest.json"
                                          : manifest_path;
            solarfc::cmd_evaluate(Manifest::load(mpath), cfg.output_dir);
            return 0;
        }
        if (sensitivity->parsed()) {
            solarfc::cmd_sensitivity(resolve(os), k_min, k_max);
            return 0;
        }
    } catch (const solarfc::ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
